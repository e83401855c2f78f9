#pragma once

// Closed-form quantities of the interacting birth-and-death system: the
// interaction sum, vertex potentials, the reversible weight (kept in log
// form), the quadratic form Q with its matrix, and the linear statistic S.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ibd/errors.hpp"
#include "ibd/graph.hpp"

namespace ibd {

using Spin = std::int64_t;

struct ModelParams {
  double alpha = 0.0;
  double beta = 0.0;

  bool finite() const { return std::isfinite(alpha) && std::isfinite(beta); }
};

// Non-negative integer spin vector, one entry per vertex.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t n) : spins_(n, 0) {}
  explicit Configuration(std::vector<Spin> spins) : spins_(std::move(spins)) { validate(); }
  Configuration(std::initializer_list<Spin> spins) : spins_(spins) { validate(); }

  std::size_t size() const noexcept { return spins_.size(); }
  Spin operator[](Vertex x) const { return spins_[x]; }
  std::span<const Spin> spins() const noexcept { return spins_; }

  Spin total() const {
    Spin s = 0;
    for (Spin v : spins_) s += v;
    return s;
  }

  bool is_zero() const {
    return std::all_of(spins_.begin(), spins_.end(), [](Spin v) { return v == 0; });
  }

  // Adds +1 or -1 at x; a death at a zero spin is a contract violation.
  void step(Vertex x, int direction) {
    if (direction < 0 && spins_[x] == 0) throw ContractViolation("death from a zero spin");
    spins_[x] += direction;
  }

  Configuration plus_unit(Vertex x) const {
    Configuration c = *this;
    c.spins_[x] += 1;
    return c;
  }

  Configuration minus_unit(Vertex x) const {
    Configuration c = *this;
    c.step(x, -1);
    return c;
  }

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < spins_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(spins_[i]);
    }
    return out + ")";
  }

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  void validate() const {
    for (Spin v : spins_) {
      if (v < 0) throw DomainError("spins must be non-negative");
    }
  }

  std::vector<Spin> spins_;
};

inline void require_matching(const Graph& g, const Configuration& xi) {
  if (xi.size() != g.vertex_count()) {
    throw DomainError("configuration has " + std::to_string(xi.size()) + " spins, graph has " +
                      std::to_string(g.vertex_count()) + " vertices");
  }
}

// Sum of neighbour spins.
inline Spin interaction_sum(const Graph& g, const Configuration& xi, Vertex x) {
  Spin s = 0;
  for (Vertex y : g.neighbours(x)) s += xi[y];
  return s;
}

// Log birth rate at x: alpha * xi_x + beta * (sum of neighbour spins).
inline double potential(const Graph& g, const ModelParams& p, const Configuration& xi, Vertex x) {
  return p.alpha * static_cast<double>(xi[x]) +
         p.beta * static_cast<double>(interaction_sum(g, xi, x));
}

inline std::vector<double> potentials(const Graph& g, const ModelParams& p, const Configuration& xi) {
  require_matching(g, xi);
  std::vector<double> u(g.vertex_count());
  for (Vertex x = 0; x < u.size(); ++x) u[x] = potential(g, p, xi, x);
  return u;
}

// log W(xi) = alpha * sum xi_x (xi_x - 1) / 2 + beta * sum over edges xi_x xi_y.
inline double log_weight(const Graph& g, const ModelParams& p, const Configuration& xi) {
  require_matching(g, xi);
  double self = 0.0, pair = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const double v = static_cast<double>(xi[x]);
    self += v * (v - 1.0) / 2.0;
    for (Vertex y : g.neighbours(x)) {
      if (x < y) pair += v * static_cast<double>(xi[y]);
    }
  }
  return p.alpha * self + p.beta * pair;
}

inline Spin linear_s(const Configuration& xi) { return xi.total(); }

// Q(xi) = -alpha * sum xi_x^2 - 2 beta * sum over edges xi_x xi_y.
inline double quadratic_q(const Graph& g, const ModelParams& p, const Configuration& xi) {
  require_matching(g, xi);
  double squares = 0.0, pair = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const double v = static_cast<double>(xi[x]);
    squares += v * v;
    for (Vertex y : g.neighbours(x)) {
      if (x < y) pair += v * static_cast<double>(xi[y]);
    }
  }
  return -p.alpha * squares - 2.0 * p.beta * pair;
}

// Q written through vertex degrees and squared edge differences.
inline double quadratic_q_degree_form(const Graph& g, const ModelParams& p, const Configuration& xi) {
  require_matching(g, xi);
  double diag = 0.0, diffs = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    const double v = static_cast<double>(xi[x]);
    diag += (-p.alpha - p.beta * static_cast<double>(g.degree(x))) * v * v;
    for (Vertex y : g.neighbours(x)) {
      if (x < y) {
        const double d = v - static_cast<double>(xi[y]);
        diffs += d * d;
      }
    }
  }
  return diag + p.beta * diffs;
}

// Q = -sum_x xi_x U(x, xi).
inline double quadratic_q_potential_form(const Graph& g, const ModelParams& p, const Configuration& xi) {
  require_matching(g, xi);
  double q = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    q -= static_cast<double>(xi[x]) * potential(g, p, xi, x);
  }
  return q;
}

// Dense symmetric matrix, row-major.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  bool is_symmetric(double tol = 0.0) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
  }

  // (A u, u)
  double quadratic_form(std::span<const double> u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n_; ++j) row += (*this)(i, j) * u[j];
      acc += row * u[i];
    }
    return acc;
  }

  std::vector<double> multiply(std::span<const double> u) const {
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * u[j];
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// A_Q: diagonal -alpha, -beta on edges, zero elsewhere; Q(u) = (A_Q u, u).
inline SymmetricMatrix build_aq(const Graph& g, const ModelParams& p) {
  SymmetricMatrix m(g.vertex_count());
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    m(x, x) = -p.alpha;
    for (Vertex y : g.neighbours(x)) m(x, y) = -p.beta;
  }
  return m;
}

enum class Definiteness { Positive, Boundary, NotPositive };

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::Positive: return "positive";
    case Definiteness::Boundary: return "boundary";
    case Definiteness::NotPositive: return "not-positive";
  }
  return "?";
}

// Regime boundaries (alpha + beta*nu = 0, alpha = beta) are decided with this
// absolute tolerance.
inline constexpr double kRegimeTolerance = 1e-9;

inline constexpr double kPivotTolerance = 1e-12;
inline constexpr double kBoundaryBand = 1e-9;

// Attempts an in-place Cholesky factorisation of m + shift * I; true iff
// every pivot exceeds the pivot tolerance.
inline bool cholesky_succeeds(const SymmetricMatrix& m, double shift) {
  const std::size_t n = m.size();
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j) + shift;
    for (std::size_t k = 0; k < j; ++k) pivot -= l[j * n + k] * l[j * n + k];
    if (!(pivot > kPivotTolerance)) return false;
    const double root = std::sqrt(pivot);
    l[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = v / root;
    }
  }
  return true;
}

// Positive when the smallest eigenvalue exceeds the boundary band, Boundary
// when it lies within +-band of zero, NotPositive otherwise. Decided by two
// shifted factorisations; no eigen-decomposition.
inline Definiteness positive_definite(const SymmetricMatrix& m) {
  if (!m.is_symmetric()) throw ContractViolation("positive_definite needs a symmetric matrix");
  if (cholesky_succeeds(m, -kBoundaryBand)) return Definiteness::Positive;
  if (cholesky_succeeds(m, +kBoundaryBand)) return Definiteness::Boundary;
  return Definiteness::NotPositive;
}

inline bool strictly_diagonally_dominant_positive(const SymmetricMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (j != i) off += std::abs(m(i, j));
    if (!(m(i, i) > 0.0 && m(i, i) - off > 0.0)) return false;
  }
  return true;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

// Union of Gershgorin discs of a symmetric matrix, as a real interval.
inline Interval gershgorin_interval(const SymmetricMatrix& m) {
  Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < m.size(); ++i) {
    double radius = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (j != i) radius += std::abs(m(i, j));
    iv.lo = std::min(iv.lo, m(i, i) - radius);
    iv.hi = std::max(iv.hi, m(i, i) + radius);
  }
  return iv;
}

struct Eigenvalue {
  double value = 0.0;
  std::size_t multiplicity = 0;
};

// Closed-form spectrum of A_Q for complete graphs and stars, ascending, with
// coincident eigenvalues merged. nullopt when no closed form is known.
inline std::optional<std::vector<Eigenvalue>> spectral_summary(const Graph& g, const ModelParams& p) {
  const StructureReport s = analyze(g);
  std::vector<Eigenvalue> raw;
  const double a = p.alpha, b = p.beta;
  if (s.is_complete) {
    const double n = static_cast<double>(s.vertex_count);
    raw = {{b - a, s.vertex_count - 1}, {-a - (n - 1.0) * b, 1}};
  } else if (s.star_leaf_count) {
    const std::size_t n = *s.star_leaf_count;
    const double root = std::sqrt(static_cast<double>(n));
    raw = {{-a, n - 1}, {-a - b * root, 1}, {-a + b * root, 1}};
  } else {
    return std::nullopt;
  }
  std::erase_if(raw, [](const Eigenvalue& e) { return e.multiplicity == 0; });
  std::sort(raw.begin(), raw.end(), [](const Eigenvalue& l, const Eigenvalue& r) { return l.value < r.value; });
  std::vector<Eigenvalue> merged;
  for (const auto& e : raw) {
    if (!merged.empty() && std::abs(merged.back().value - e.value) <= 1e-12) {
      merged.back().multiplicity += e.multiplicity;
    } else {
      merged.push_back(e);
    }
  }
  return merged;
}

// (n beta + |alpha|) U(centre) + (beta + |alpha|) sum_leaf U(leaf)
//   - (n beta^2 - alpha^2) S(xi), which vanishes identically on stars.
inline double star_potential_identity_residual(const Graph& g, const ModelParams& p, const Configuration& xi) {
  const StructureReport s = analyze(g);
  if (!s.star_leaf_count) throw DomainError("star identity needs a star graph");
  if (!(p.alpha < 0.0)) throw DomainError("star identity needs alpha < 0");
  require_matching(g, xi);
  const double n = static_cast<double>(*s.star_leaf_count);
  const double abs_a = std::abs(p.alpha), b = p.beta;
  const Vertex centre = star_centre(g);
  double leaf_sum = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (x != centre) leaf_sum += potential(g, p, xi, x);
  }
  const double lhs = (n * b + abs_a) * potential(g, p, xi, centre) + (b + abs_a) * leaf_sum;
  const double rhs = (n * b * b - p.alpha * p.alpha) * static_cast<double>(xi.total());
  return lhs - rhs;
}

}  // namespace ibd
