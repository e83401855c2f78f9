#pragma once

// Regime classification of (graph, alpha, beta) by the known theorems.
// Theorem tags in reports:
//   T1.1 / T1.2    arbitrary connected graph, ergodicity / non-ergodicity
//   T2             alpha > max(0, beta), single-vertex explosion
//   T-no-triangle  0 < alpha < beta on triangle-free graphs, adjacent pair
//   T3.1 .. T3.4   constant degree nu (T3.4i / T3.4ii fine structure)
//   T-mean-field   complete graph limits zeta_k(t)/t -> 1/n
//   T4.1 .. T4.4   star with n leaves (T4.4i / T4.4ii fine structure)
//   beta=0         independent components

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ibd/errors.hpp"
#include "ibd/graph.hpp"
#include "ibd/model.hpp"

namespace ibd {

enum class Regime { Ergodic, NonErgodic, Transient, Explosive, NotExplosive, Unknown };
enum class FineStructure { SingleVertexExplosion, AdjacentPairExplosion, SimultaneousExplosion };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Ergodic: return "Ergodic";
    case Regime::NonErgodic: return "NonErgodic";
    case Regime::Transient: return "Transient";
    case Regime::Explosive: return "Explosive";
    case Regime::NotExplosive: return "NotExplosive";
    case Regime::Unknown: return "Unknown";
  }
  return "?";
}

inline const char* to_string(FineStructure f) {
  switch (f) {
    case FineStructure::SingleVertexExplosion: return "SingleVertexExplosion";
    case FineStructure::AdjacentPairExplosion: return "AdjacentPairExplosion";
    case FineStructure::SimultaneousExplosion: return "SimultaneousExplosion";
  }
  return "?";
}

// PerVertex: one limit fraction per vertex, indexed like the graph.
// Pair: the two fractions of the (random) exploding adjacent pair.
struct RatePrediction {
  enum class Kind { PerVertex, Pair };
  Kind kind = Kind::PerVertex;
  std::vector<double> values;

  friend bool operator==(const RatePrediction&, const RatePrediction&) = default;
};

struct RegimeReport {
  Regime regime = Regime::Unknown;
  std::optional<FineStructure> fine_structure;
  std::string theorem;
  std::string inequality;
  std::optional<RatePrediction> rates;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

inline int sign_with_tolerance(double v) {
  if (v > kRegimeTolerance) return 1;
  if (v < -kRegimeTolerance) return -1;
  return 0;
}

inline RegimeReport make(Regime r, std::string theorem, std::string inequality) {
  RegimeReport rep;
  rep.regime = r;
  rep.theorem = std::move(theorem);
  rep.inequality = std::move(inequality);
  return rep;
}

inline RegimeReport explosive(std::optional<FineStructure> fs, std::string theorem, std::string inequality) {
  RegimeReport rep = make(Regime::Explosive, std::move(theorem), std::move(inequality));
  rep.fine_structure = fs;
  return rep;
}

inline RatePrediction uniform_rates(std::size_t n) {
  return {RatePrediction::Kind::PerVertex, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

inline RatePrediction pair_rates() { return {RatePrediction::Kind::Pair, {0.5, 0.5}}; }

inline RatePrediction star_rates(const Graph& g, const ModelParams& p, std::size_t leaves) {
  const double n = static_cast<double>(leaves);
  const double a = std::abs(p.alpha);
  const double denom = 2.0 * n * p.beta + (n + 1.0) * a;
  std::vector<double> v(g.vertex_count(), (p.beta + a) / denom);
  v[star_centre(g)] = (n * p.beta + a) / denom;
  return {RatePrediction::Kind::PerVertex, std::move(v)};
}

inline RegimeReport non_ergodic_alpha_zero(const ModelParams& p) {
  return make(Regime::NonErgodic, "T1.2", fmt("alpha = %g >= 0", p.alpha));
}

inline RegimeReport classify_beta_zero(const Graph& g, const ModelParams& p) {
  if (p.alpha < 0.0) return make(Regime::Ergodic, "beta=0", fmt("beta = 0, alpha = %g < 0", p.alpha));
  auto rep = explosive(FineStructure::SingleVertexExplosion, "beta=0", fmt("beta = 0, alpha = %g > 0", p.alpha));
  if (g.vertex_count() == 1) rep.fine_structure.reset();
  return rep;
}

inline RegimeReport classify_single_vertex(const ModelParams& p) {
  if (p.alpha < 0.0) return make(Regime::Ergodic, "T1.1", fmt("alpha = %g < 0, single vertex", p.alpha));
  if (p.alpha > 0.0) return explosive(std::nullopt, "beta=0", fmt("alpha = %g > 0, single vertex", p.alpha));
  auto rep = make(Regime::NonErgodic, "T1.2", "alpha = 0, single vertex");
  rep.warnings.push_back("single vertex with alpha = 0 is a null-recurrent reflected walk");
  return rep;
}

inline RegimeReport classify_complete(const ModelParams& p, std::size_t n) {
  const double nu = static_cast<double>(n - 1);
  const double t = p.alpha + p.beta * nu;
  if (p.alpha < 0.0) {
    switch (sign_with_tolerance(t)) {
      case -1: return make(Regime::Ergodic, "T3.1", fmt("alpha = %g < 0, alpha + beta*nu = %g < 0", p.alpha, t));
      case 0: return make(Regime::Transient, "T3.2", fmt("alpha = %g < 0, alpha + beta*nu = %g = 0", p.alpha, t));
      default: {
        auto rep = explosive(FineStructure::SimultaneousExplosion, "T3.3+T-mean-field",
                             fmt("alpha = %g < 0 < alpha + beta*nu = %g", p.alpha, t));
        rep.rates = uniform_rates(n);
        return rep;
      }
    }
  }
  if (p.alpha > 0.0) {
    const double gap = p.alpha - p.beta;
    if (sign_with_tolerance(gap) > 0)
      return explosive(FineStructure::SingleVertexExplosion, "T3.4i",
                       fmt("alpha = %g > max(0, beta = %g)", p.alpha, p.beta));
    if (sign_with_tolerance(gap) < 0) {
      auto rep = explosive(FineStructure::SimultaneousExplosion, "T-mean-field",
                           fmt("0 < alpha = %g < beta = %g", p.alpha, p.beta));
      rep.rates = uniform_rates(n);
      return rep;
    }
    auto rep = explosive(std::nullopt, "T3.4", fmt("alpha = beta = %g > 0", p.alpha));
    rep.warnings.push_back("alpha = beta: no theorem gives the fine structure of the explosion");
    return rep;
  }
  auto rep = non_ergodic_alpha_zero(p);
  if (n == 2 && p.beta < 0.0)
    rep.warnings.push_back("two-vertex graph with alpha = 0, beta < 0 is null recurrent (quarter-plane walk)");
  return rep;
}

inline RegimeReport classify_star(const Graph& g, const ModelParams& p, std::size_t leaves) {
  const double root_n = std::sqrt(static_cast<double>(leaves));
  const double t = p.alpha + p.beta * root_n;
  if (p.alpha < 0.0) {
    switch (sign_with_tolerance(t)) {
      case -1: return make(Regime::Ergodic, "T4.1", fmt("alpha = %g < 0, alpha + beta*sqrt(n) = %g < 0", p.alpha, t));
      case 0: return make(Regime::Transient, "T4.2", fmt("alpha = %g < 0, alpha + beta*sqrt(n) = %g = 0", p.alpha, t));
      default: {
        auto rep = explosive(FineStructure::SimultaneousExplosion, "T4.3",
                             fmt("alpha = %g < 0 < alpha + beta*sqrt(n) = %g", p.alpha, t));
        rep.rates = star_rates(g, p, leaves);
        rep.warnings.push_back(
            "star rates use denominator 2*n*beta + (n+1)*|alpha|; the printed form (n+1)*beta + 2*|alpha| "
            "does not sum to 1 for n >= 2");
        return rep;
      }
    }
  }
  if (p.alpha > 0.0) {
    const double gap = p.alpha - p.beta;
    if (sign_with_tolerance(gap) > 0)
      return explosive(FineStructure::SingleVertexExplosion, "T4.4i",
                       fmt("alpha = %g > max(0, beta = %g)", p.alpha, p.beta));
    if (sign_with_tolerance(gap) < 0) {
      auto rep = explosive(FineStructure::AdjacentPairExplosion, "T4.4ii",
                           fmt("0 < alpha = %g < beta = %g", p.alpha, p.beta));
      rep.rates = pair_rates();
      return rep;
    }
    auto rep = explosive(std::nullopt, "T4.4", fmt("alpha = beta = %g > 0", p.alpha));
    rep.warnings.push_back("alpha = beta: no theorem gives the fine structure of the explosion");
    return rep;
  }
  return non_ergodic_alpha_zero(p);
}

inline RegimeReport classify_constant_degree(const ModelParams& p, std::size_t nu, bool triangle_free) {
  const double t = p.alpha + p.beta * static_cast<double>(nu);
  if (p.alpha < 0.0) {
    switch (sign_with_tolerance(t)) {
      case -1: return make(Regime::Ergodic, "T3.1", fmt("alpha = %g < 0, alpha + beta*nu = %g < 0", p.alpha, t));
      case 0: return make(Regime::Transient, "T3.2", fmt("alpha = %g < 0, alpha + beta*nu = %g = 0", p.alpha, t));
      default: return explosive(std::nullopt, "T3.3", fmt("alpha = %g < 0 < alpha + beta*nu = %g", p.alpha, t));
    }
  }
  if (p.alpha > 0.0) {
    const double gap = p.alpha - p.beta;
    if (sign_with_tolerance(gap) > 0)
      return explosive(FineStructure::SingleVertexExplosion, "T3.4i",
                       fmt("alpha = %g > max(0, beta = %g)", p.alpha, p.beta));
    if (sign_with_tolerance(gap) < 0 && triangle_free) {
      auto rep = explosive(FineStructure::AdjacentPairExplosion, "T3.4ii",
                           fmt("0 < alpha = %g < beta = %g, no triangles", p.alpha, p.beta));
      rep.rates = pair_rates();
      return rep;
    }
    auto rep = explosive(std::nullopt, "T3.4", fmt("alpha = %g > 0", p.alpha));
    rep.warnings.push_back(sign_with_tolerance(gap) == 0
                               ? "alpha = beta: no theorem gives the fine structure of the explosion"
                               : "alpha < beta on a graph with triangles: fine structure not covered");
    return rep;
  }
  return non_ergodic_alpha_zero(p);
}

inline RegimeReport classify_general(const ModelParams& p, const StructureReport& s) {
  const double t = p.alpha + p.beta * static_cast<double>(s.max_degree);
  if (p.alpha < 0.0) {
    switch (sign_with_tolerance(t)) {
      case -1:
        return make(Regime::Ergodic, "T1.1", fmt("alpha = %g < 0, alpha + beta*max_degree = %g < 0", p.alpha, t));
      case 0: {
        auto rep = make(Regime::NotExplosive, "T1.1",
                        fmt("alpha = %g < 0, alpha + beta*max_degree = %g = 0", p.alpha, t));
        rep.warnings.push_back("recurrence unknown on irregular graphs at alpha + beta*max_degree = 0");
        return rep;
      }
      default: {
        auto rep = make(Regime::Unknown, "none", fmt("alpha = %g < 0 < alpha + beta*max_degree = %g", p.alpha, t));
        rep.warnings.push_back("no theorem covers alpha < 0 < alpha + beta*max_degree on irregular non-star graphs");
        return rep;
      }
    }
  }
  if (p.alpha > 0.0) {
    const double gap = p.alpha - p.beta;
    if (sign_with_tolerance(gap) > 0)
      return explosive(FineStructure::SingleVertexExplosion, "T2",
                       fmt("alpha = %g > max(0, beta = %g)", p.alpha, p.beta));
    if (sign_with_tolerance(gap) < 0 && s.is_triangle_free) {
      auto rep = explosive(FineStructure::AdjacentPairExplosion, "T-no-triangle",
                           fmt("0 < alpha = %g < beta = %g, no triangles", p.alpha, p.beta));
      rep.rates = pair_rates();
      return rep;
    }
    auto rep = make(Regime::Unknown, "T1.2", fmt("alpha = %g > 0", p.alpha));
    rep.warnings.push_back("non-ergodic by T1.2; explosion structure not covered for these parameters");
    return rep;
  }
  return non_ergodic_alpha_zero(p);
}

}  // namespace detail

inline RegimeReport classify(const Graph& g, const ModelParams& p) {
  if (!p.finite()) throw DomainError("alpha and beta must be finite");
  if (g.vertex_count() == 0) throw DomainError("graph has no vertices");
  if (p.alpha == 0.0 && p.beta == 0.0)
    throw ExcludedCaseError(
        "excluded trivial case alpha = beta = 0 (independent reflected walks: null recurrent for |V| <= 2, "
        "transient for |V| >= 3)");

  const StructureReport s = analyze(g);
  if (!s.is_connected) {
    if (p.alpha > std::max(0.0, p.beta) + kRegimeTolerance)
      return detail::explosive(FineStructure::SingleVertexExplosion, "T2",
                               detail::fmt("alpha = %g > max(0, beta = %g), graph disconnected", p.alpha, p.beta));
    throw DomainError("disconnected graph: only alpha > max(0, beta) can be classified");
  }
  if (p.beta == 0.0) return detail::classify_beta_zero(g, p);
  if (s.vertex_count == 1) return detail::classify_single_vertex(p);
  if (s.is_complete) return detail::classify_complete(p, s.vertex_count);
  if (s.star_leaf_count) return detail::classify_star(g, p, *s.star_leaf_count);
  if (s.constant_degree) return detail::classify_constant_degree(p, *s.constant_degree, s.is_triangle_free);
  return detail::classify_general(p, s);
}

inline std::optional<RatePrediction> predicted_rates(const Graph& g, const ModelParams& p) {
  return classify(g, p).rates;
}

}  // namespace ibd
