#pragma once

// Small-instance exact oracles: the spin-capped Gibbs law, k-step laws of
// the embedded chain by exhaustive expansion, and the closed-form drift
// expressions used to certify recurrence/transience on finite shells.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ibd/errors.hpp"
#include "ibd/graph.hpp"
#include "ibd/logsumexp.hpp"
#include "ibd/model.hpp"

namespace ibd {

inline constexpr std::size_t kMaxTruncatedStates = 10'000'000;
inline constexpr double kDriftExpCutoff = 700.0;

// Law on {0..cap}^V proportional to exp(log W); states indexed mixed-radix
// with vertex 0 as the least significant digit.
struct TruncatedDistribution {
  Spin cap = 0;
  std::size_t vertices = 0;
  std::vector<double> probabilities;
  double log_normalizer = 0.0;

  std::size_t index_of(const Configuration& xi) const {
    std::size_t idx = 0;
    for (std::size_t x = vertices; x-- > 0;) idx = idx * static_cast<std::size_t>(cap + 1) + static_cast<std::size_t>(xi[x]);
    return idx;
  }

  Configuration state_at(std::size_t index) const {
    std::vector<Spin> s(vertices);
    for (std::size_t x = 0; x < vertices; ++x) {
      s[x] = static_cast<Spin>(index % static_cast<std::size_t>(cap + 1));
      index /= static_cast<std::size_t>(cap + 1);
    }
    return Configuration(std::move(s));
  }

  bool contains(const Configuration& xi) const {
    for (std::size_t x = 0; x < vertices; ++x)
      if (xi[x] > cap) return false;
    return true;
  }

  double probability(const Configuration& xi) const {
    return contains(xi) ? probabilities[index_of(xi)] : 0.0;
  }

  // Mass of states with at least one spin at the cap.
  double boundary_mass() const {
    double mass = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
      const Configuration c = state_at(i);
      for (std::size_t x = 0; x < vertices; ++x) {
        if (c[x] == cap) {
          mass += probabilities[i];
          break;
        }
      }
    }
    return mass;
  }
};

inline TruncatedDistribution truncated_stationary(const Graph& g, const ModelParams& p, Spin cap,
                                                  std::size_t budget = kMaxTruncatedStates) {
  if (cap < 1) throw DomainError("cap must be >= 1");
  const std::size_t n = g.vertex_count();
  std::size_t states = 1;
  bool overflow = false;
  for (std::size_t x = 0; x < n; ++x) {
    if (states > SIZE_MAX / static_cast<std::size_t>(cap + 1)) {
      overflow = true;
      break;
    }
    states *= static_cast<std::size_t>(cap + 1);
  }
  if (overflow || states > budget) {
    throw BudgetError("truncated state space exceeds budget", overflow ? SIZE_MAX : states);
  }

  TruncatedDistribution d;
  d.cap = cap;
  d.vertices = n;
  std::vector<double> logw(states);
  std::vector<Spin> odometer(n, 0);
  for (std::size_t i = 0; i < states; ++i) {
    logw[i] = log_weight(g, p, Configuration(odometer));
    for (std::size_t x = 0; x < n; ++x) {
      if (++odometer[x] <= cap) break;
      odometer[x] = 0;
    }
  }
  d.log_normalizer = numeric::log_sum_exp(logw);
  d.probabilities.resize(states);
  for (std::size_t i = 0; i < states; ++i) d.probabilities[i] = std::exp(logw[i] - d.log_normalizer);
  return d;
}

// CSV rows "x0,x1,...,probability".
inline void write_distribution_csv(std::ostream& out, const TruncatedDistribution& d) {
  for (std::size_t x = 0; x < d.vertices; ++x) out << "x" << x << ',';
  out << "probability\n";
  char buf[64];
  for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
    const Configuration c = d.state_at(i);
    for (std::size_t x = 0; x < d.vertices; ++x) out << c[x] << ',';
    std::snprintf(buf, sizeof buf, "%.17g", d.probabilities[i]);
    out << buf << '\n';
  }
}

struct Transition {
  Configuration target;
  double probability = 0.0;
  Spin delta_s = 0;
};

// One-step law of the embedded chain from zeta, births listed before deaths,
// zero-probability moves omitted.
inline std::vector<Transition> transition_law(const Graph& g, const ModelParams& p, const Configuration& zeta) {
  const std::vector<double> u = potentials(g, p, zeta);
  const std::size_t n = u.size();
  std::vector<double> logw;
  logw.reserve(2 * n);
  for (double v : u) logw.push_back(v);
  for (std::size_t x = 0; x < n; ++x) logw.push_back(zeta[x] > 0 ? 0.0 : numeric::kNegInf);
  const double log_total = numeric::log_sum_exp(logw);

  std::vector<Transition> out;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double prob = std::exp(logw[i] - log_total);
    if (!(prob > 0.0)) continue;
    if (i < n) out.push_back({zeta.plus_unit(i), prob, +1});
    else out.push_back({zeta.minus_unit(i - n), prob, -1});
  }
  return out;
}

inline constexpr std::size_t kMaxEnumerationSteps = 8;
inline constexpr std::size_t kMaxEnumerationVertices = 4;

// Exact law of the embedded chain after k steps, by breadth-first expansion
// with duplicate states merged at every level.
inline std::map<Configuration, double> enumerate_dtmc(const Graph& g, const ModelParams& p,
                                                      const Configuration& initial, std::size_t k) {
  require_matching(g, initial);
  if (k > kMaxEnumerationSteps || g.vertex_count() > kMaxEnumerationVertices) {
    std::size_t branching = 1;
    for (std::size_t i = 0; i < k && branching < SIZE_MAX / 16; ++i) branching *= 2 * g.vertex_count();
    throw BudgetError("enumeration limited to k <= 8 and at most 4 vertices", branching);
  }
  std::map<Configuration, double> level{{initial, 1.0}};
  for (std::size_t step = 0; step < k; ++step) {
    std::map<Configuration, double> next;
    for (const auto& [state, mass] : level) {
      for (const Transition& t : transition_law(g, p, state)) next[t.target] += mass * t.probability;
    }
    level = std::move(next);
  }
  return level;
}

struct GeneratorDrift {
  double value = 0.0;
  bool unbounded = false;  // some potential exceeded the exponent cutoff
};

// Generator applied to Q:
//   sum_x (-alpha - 2U) e^U + sum_x (-alpha + 2U) 1{xi_x > 0}.
inline GeneratorDrift drift_gq(const Graph& g, const ModelParams& p, const Configuration& xi) {
  const std::vector<double> u = potentials(g, p, xi);
  GeneratorDrift d;
  double unbounded_sign = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) {
    const double coeff = -p.alpha - 2.0 * u[x];
    if (u[x] > kDriftExpCutoff) {
      d.unbounded = true;
      unbounded_sign += coeff > 0 ? 1.0 : (coeff < 0 ? -1.0 : 0.0);
    } else if (u[x] >= -kDriftExpCutoff) {
      d.value += coeff * std::exp(u[x]);
    }
    if (xi[x] > 0) d.value += -p.alpha + 2.0 * u[x];
  }
  if (d.unbounded && unbounded_sign != 0.0) d.value = std::copysign(std::numeric_limits<double>::infinity(), unbounded_sign);
  return d;
}

// Expected one-step change of S for the embedded chain:
//   (sum e^U - #positive) / (sum e^U + #positive).
inline double drift_s(const Graph& g, const ModelParams& p, const Configuration& zeta) {
  const std::vector<double> u = potentials(g, p, zeta);
  std::size_t positive = 0;
  for (std::size_t x = 0; x < u.size(); ++x)
    if (zeta[x] > 0) ++positive;
  double top = positive > 0 ? 0.0 : numeric::kNegInf;
  for (double v : u) top = std::max(top, v);
  double births = 0.0;
  for (double v : u) births += std::exp(v - top);
  const double deaths = static_cast<double>(positive) * std::exp(-top);
  return (births - deaths) / (births + deaths);
}

// Drift certificates only make sense on exactly the critical line.
inline bool on_critical_line(double value) { return std::abs(value) <= kRegimeTolerance; }

struct TwoStepDrift {
  double value = 0.0;
  int steps = 1;  // 2 iff every potential vanishes at zeta
};

// Expected change of S over k(zeta) steps on a constant-degree graph with
// alpha + beta*nu = 0, where k = 2 exactly when all potentials are zero.
inline TwoStepDrift drift_two_step_s(const Graph& g, const ModelParams& p, const Configuration& zeta) {
  const StructureReport s = analyze(g);
  if (!s.constant_degree) throw DomainError("two-step S drift needs a constant-degree graph");
  if (!on_critical_line(p.alpha + p.beta * static_cast<double>(*s.constant_degree))) {
    throw DomainError("two-step S drift needs alpha + beta*nu = 0");
  }
  const std::vector<double> u = potentials(g, p, zeta);
  const bool all_zero = std::all_of(u.begin(), u.end(), [](double v) { return std::abs(v) <= kRegimeTolerance; });
  if (!all_zero) return {drift_s(g, p, zeta), 1};
  double value = 0.0;
  for (const Transition& t : transition_law(g, p, zeta)) {
    value += t.probability * (static_cast<double>(t.delta_s) + drift_s(g, p, t.target));
  }
  return {value, 2};
}

// Generator of the two-vertex chain applied to f(x, y) = log(x + y + 1),
// for alpha = 0 and beta < 0.
inline double drift_log_quarterplane(const ModelParams& p, Spin x, Spin y) {
  if (p.alpha != 0.0 || !(p.beta < 0.0)) throw DomainError("quarter-plane drift needs alpha = 0, beta < 0");
  if (x < 0 || y < 0) throw DomainError("coordinates must be non-negative");
  const double c1 = static_cast<double>(x + y) + 1.0;
  const double up = std::log1p(1.0 / c1);
  const double down = std::log1p(-1.0 / c1);
  const double births = std::exp(p.beta * static_cast<double>(y)) + std::exp(p.beta * static_cast<double>(x));
  const double deaths = static_cast<double>((x > 0 ? 1 : 0) + (y > 0 ? 1 : 0));
  return up * births + (deaths > 0 ? down * deaths : 0.0);
}

struct StarDrift {
  double one_step = 0.0;
  double two_step = 0.0;
};

namespace detail {

inline double star_f_one_step(const Graph& g, const ModelParams& p, Vertex centre, double root_n,
                              const Configuration& zeta) {
  double value = 0.0;
  for (const Transition& t : transition_law(g, p, zeta)) {
    Vertex moved = 0;
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      if (t.target[x] != zeta[x]) {
        moved = x;
        break;
      }
    }
    const double weight = moved == centre ? root_n : 1.0;
    value += t.probability * weight * static_cast<double>(t.delta_s);
  }
  return value;
}

}  // namespace detail

// One- and two-step drift of f(zeta) = sum_leaf zeta + sqrt(n) zeta_centre on
// a star at the critical line alpha < 0, alpha + beta sqrt(n) = 0.
inline StarDrift drift_star_f(const Graph& g, const ModelParams& p, const Configuration& zeta) {
  const StructureReport s = analyze(g);
  if (!s.star_leaf_count) throw DomainError("star f-drift needs a star graph");
  const double root_n = std::sqrt(static_cast<double>(*s.star_leaf_count));
  if (!(p.alpha < 0.0) || !on_critical_line(p.alpha + p.beta * root_n)) {
    throw DomainError("star f-drift needs alpha < 0 and alpha + beta*sqrt(n) = 0");
  }
  require_matching(g, zeta);
  const Vertex centre = star_centre(g);
  StarDrift d;
  d.one_step = detail::star_f_one_step(g, p, centre, root_n, zeta);
  d.two_step = d.one_step;
  for (const Transition& t : transition_law(g, p, zeta)) {
    d.two_step += t.probability * detail::star_f_one_step(g, p, centre, root_n, t.target);
  }
  return d;
}

// Visits every configuration on `vertices` sites with s_min <= S <= s_max.
inline void for_each_in_shell(std::size_t vertices, Spin s_min, Spin s_max,
                              const std::function<void(const Configuration&)>& visit) {
  if (vertices == 0) throw DomainError("need at least one vertex");
  std::vector<Spin> spins(vertices, 0);
  // fills sites [k, n) with exactly `remaining`
  std::function<void(std::size_t, Spin)> fill = [&](std::size_t k, Spin remaining) {
    if (k + 1 == vertices) {
      spins[k] = remaining;
      visit(Configuration(spins));
      return;
    }
    for (Spin v = 0; v <= remaining; ++v) {
      spins[k] = v;
      fill(k + 1, remaining - v);
    }
  };
  for (Spin total = std::max<Spin>(0, s_min); total <= s_max; ++total) fill(0, total);
}

// Visits every configuration in the box {0..cap}^vertices.
inline void for_each_in_box(std::size_t vertices, Spin cap, const std::function<void(const Configuration&)>& visit) {
  std::vector<Spin> spins(vertices, 0);
  for (;;) {
    visit(Configuration(spins));
    std::size_t x = 0;
    while (x < vertices && ++spins[x] > cap) spins[x++] = 0;
    if (x == vertices) return;
  }
}

// Start of the shell beyond which the one-step S drift is at least eps on a
// constant-degree graph with alpha + beta*nu > 0, doubled as a margin.
// Derived from J(zeta, eps) >= delta(alpha+beta nu) S - (1+delta)|V| with
// delta = (1-eps)/(1+eps), i.e. S > 2|V| / ((1-eps)(alpha+beta nu)).
inline double s_drift_shell_start(const Graph& g, const ModelParams& p, double eps) {
  const StructureReport s = analyze(g);
  if (!s.constant_degree) throw DomainError("S-drift shell needs a constant-degree graph");
  const double growth = p.alpha + p.beta * static_cast<double>(*s.constant_degree);
  if (!(growth > 0.0)) throw DomainError("S-drift shell needs alpha + beta*nu > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  const double n = static_cast<double>(g.vertex_count());
  return 2.0 * (2.0 * n / ((1.0 - eps) * growth));
}

}  // namespace ibd
