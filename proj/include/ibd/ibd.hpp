#pragma once

#include "ibd/errors.hpp"
#include "ibd/graph.hpp"
#include "ibd/logsumexp.hpp"
#include "ibd/model.hpp"
#include "ibd/classify.hpp"
#include "ibd/simulate.hpp"
#include "ibd/exact.hpp"
#include "ibd/stats.hpp"
