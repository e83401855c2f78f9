#pragma once

#include <json.hpp>

#include "ibd/classify.hpp"
#include "ibd/simulate.hpp"

namespace ibd {

inline void to_json(nlohmann::ordered_json& j, const Configuration& c) {
  j = nlohmann::ordered_json::array();
  for (Spin s : c.spins()) j.push_back(s);
}

inline void to_json(nlohmann::ordered_json& j, const RatePrediction& r) {
  j = nlohmann::ordered_json{{"kind", r.kind == RatePrediction::Kind::Pair ? "pair" : "per_vertex"},
                             {"values", r.values}};
}

inline void to_json(nlohmann::ordered_json& j, const RegimeReport& r) {
  j = nlohmann::ordered_json{};
  j["regime"] = to_string(r.regime);
  j["fine_structure"] = r.fine_structure ? nlohmann::ordered_json(to_string(*r.fine_structure)) : nullptr;
  j["theorem"] = r.theorem;
  j["inequality"] = r.inequality;
  j["rates"] = r.rates ? nlohmann::ordered_json(*r.rates) : nullptr;
  j["warnings"] = r.warnings;
}

inline void to_json(nlohmann::ordered_json& j, const RunSummary& s) {
  j = nlohmann::ordered_json{};
  j["initial"] = s.initial;
  j["final_configuration"] = s.final_configuration;
  j["step_count"] = s.step_count;
  j["simulated_time"] = s.simulated_time;
  j["increments"] = s.increments;
  j["decrements"] = s.decrements;
  j["death_count_after_burnin"] = s.death_count_after_burnin;
  j["detector_window"] = s.detector_window;
  j["explosion_flag"] = s.proxy_triggered ? "proxy_triggered" : "none";
  j["proxy_step"] = s.proxy_step ? nlohmann::ordered_json(*s.proxy_step) : nullptr;
  j["proxy_time"] = s.proxy_time ? nlohmann::ordered_json(*s.proxy_time) : nullptr;
  j["stop_reason"] = to_string(s.stop_reason);
  j["summary_only"] = s.summary_only;
  if (s.event_b) {
    j["event_b"] = {{"tau", s.event_b->tau}, {"vertex", s.event_b->vertex}};
  } else {
    j["event_b"] = nullptr;
  }
  nlohmann::ordered_json pair{{"status", to_string(s.pair.status)}};
  if (s.pair.status != PairOutcome::Status::None) {
    pair["x1"] = s.pair.x1;
    pair["x2"] = s.pair.x2;
    pair["rate1"] = s.pair.rate1;
    pair["rate2"] = s.pair.rate2;
  }
  j["pair"] = pair;
}

}  // namespace ibd
