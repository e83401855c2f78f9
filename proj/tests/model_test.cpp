#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ibd/harness/suites.hpp"
#include "ibd/model.hpp"

using namespace ibd;

TEST(Configuration, RejectsNegativeSpins) {
  EXPECT_THROW(Configuration({1, -1}), DomainError);
  Configuration c{0, 2};
  EXPECT_THROW(c.step(0, -1), ContractViolation);
  c.step(1, -1);
  EXPECT_EQ(c, (Configuration{0, 1}));
  EXPECT_EQ(c.total(), 1);
  EXPECT_EQ(c.to_string(), "(0,1)");
}

TEST(Model, InteractionSumExamples) {
  const Graph two = build_path(2);
  EXPECT_EQ(interaction_sum(two, {3, 1}, 0), 1);
  EXPECT_EQ(interaction_sum(build_star(3), {2, 1, 1, 1}, 0), 3);
  const Graph k4 = build_complete(4);
  for (Vertex x = 0; x < 4; ++x) EXPECT_EQ(interaction_sum(k4, Configuration(4), x), 0);
}

TEST(Model, PotentialExamples) {
  const Graph two = build_path(2);
  const ModelParams p{-1.0, 2.0};
  EXPECT_DOUBLE_EQ(potential(two, p, {3, 1}, 0), -1.0);
  EXPECT_DOUBLE_EQ(potential(two, p, {3, 1}, 1), 5.0);
  for (double u : potentials(build_cycle(5), p, Configuration(5))) EXPECT_EQ(u, 0.0);
}

TEST(Model, LogWeightAndQuadraticExamples) {
  const Graph two = build_path(2);
  const ModelParams p{-1.0, 0.5};
  EXPECT_DOUBLE_EQ(log_weight(two, p, {2, 1}), 0.0);
  EXPECT_DOUBLE_EQ(quadratic_q(two, p, {2, 1}), 3.0);
  EXPECT_EQ(linear_s({2, 1}), 3);
  EXPECT_DOUBLE_EQ(-(quadratic_q(two, p, {2, 1}) + p.alpha * 3.0) / 2.0, 0.0);
  EXPECT_EQ(log_weight(two, p, {0, 0}), 0.0);
  EXPECT_EQ(quadratic_q(two, p, {0, 0}), 0.0);
}

// Oracle: brute-force double sum over ordered vertex pairs, independent of
// the edge-list iteration used in the library.
double log_weight_oracle(const Graph& g, const ModelParams& p, const Configuration& xi) {
  double self = 0.0, pair = 0.0;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    self += static_cast<double>(xi[x]) * static_cast<double>(xi[x] - 1) / 2.0;
    for (Vertex y = 0; y < g.vertex_count(); ++y)
      if (g.adjacent(x, y)) pair += static_cast<double>(xi[x]) * static_cast<double>(xi[y]);
  }
  return p.alpha * self + p.beta * pair / 2.0;
}

TEST(ModelProperty, IdentitiesOnRandomDraws) {
  Rng rng(17);
  std::uniform_real_distribution<double> param(-3.0, 3.0);
  for (int i = 0; i < 3000; ++i) {
    const Graph g = harness::detail::random_test_graph(rng);
    const ModelParams p{param(rng), param(rng)};
    const Configuration xi = harness::detail::random_configuration(rng, g.vertex_count(), 15);
    const double lw = log_weight(g, p, xi);
    ASSERT_NEAR(lw, log_weight_oracle(g, p, xi), 1e-9);
    double sum_u = 0.0, sum_lin = 0.0;
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      const double u = potential(g, p, xi, x);
      ASSERT_NEAR(log_weight(g, p, xi.plus_unit(x)) - lw, u, 1e-9);
      sum_u += u;
      sum_lin += (p.alpha + p.beta * static_cast<double>(g.degree(x))) * static_cast<double>(xi[x]);
    }
    ASSERT_NEAR(sum_u, sum_lin, 1e-9);
    const double q = quadratic_q(g, p, xi);
    ASSERT_NEAR(q, quadratic_q_degree_form(g, p, xi), 1e-9);
    ASSERT_NEAR(q, quadratic_q_potential_form(g, p, xi), 1e-9);
    ASSERT_NEAR(lw, -(q + p.alpha * static_cast<double>(xi.total())) / 2.0, 1e-9);
  }
}

TEST(QuadraticMatrix, Entries) {
  const SymmetricMatrix k3 = build_aq(build_complete(3), {-1.0, 0.4});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(k3(i, j), i == j ? 1.0 : -0.4);

  const SymmetricMatrix diag = build_aq(build_cycle(4), {-2.0, 0.0});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(diag(i, j), i == j ? 2.0 : 0.0);

  const SymmetricMatrix star = build_aq(build_star(4), {-1.0, 0.5});
  int centre_entries = 0;
  for (std::size_t j = 1; j < 5; ++j) centre_entries += star(0, j) == -0.5;
  EXPECT_EQ(centre_entries, 4);
}

TEST(QuadraticMatrix, FormMatchesQOnRandomIntegerVectors) {
  Rng rng(3);
  std::uniform_real_distribution<double> param(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const Graph g = harness::detail::random_test_graph(rng);
    const ModelParams p{param(rng), param(rng)};
    const Configuration xi = harness::detail::random_configuration(rng, g.vertex_count(), 30);
    const std::vector<double> u(xi.spins().begin(), xi.spins().end());
    const double q = quadratic_q(g, p, xi);
    EXPECT_NEAR(build_aq(g, p).quadratic_form(u), q, 1e-9 * std::max(1.0, std::abs(q)));
  }
}

TEST(QuadraticMatrix, ConstantDegreeEigenvector) {
  for (const Graph& g : {build_cycle(6), build_complete(5), build_lattice_torus(2, 2)}) {
    const ModelParams p{-0.7, 0.3};
    const double nu = static_cast<double>(*analyze(g).constant_degree);
    const std::vector<double> ones(g.vertex_count(), 1.0);
    for (double v : build_aq(g, p).multiply(ones)) EXPECT_NEAR(v, -p.alpha - p.beta * nu, 1e-9);
  }
}

TEST(Spectrum, ClosedFormExamples) {
  const auto k3 = spectral_summary(build_complete(3), {-1.0, 0.4});
  ASSERT_TRUE(k3);
  ASSERT_EQ(k3->size(), 2u);
  EXPECT_NEAR((*k3)[0].value, 0.2, 1e-12);
  EXPECT_EQ((*k3)[0].multiplicity, 1u);
  EXPECT_NEAR((*k3)[1].value, 1.4, 1e-12);
  EXPECT_EQ((*k3)[1].multiplicity, 2u);
  EXPECT_EQ(positive_definite(build_aq(build_complete(3), {-1.0, 0.4})), Definiteness::Positive);

  const auto s4 = spectral_summary(build_star(4), {-1.0, 0.5});
  ASSERT_TRUE(s4);
  ASSERT_EQ(s4->size(), 3u);
  EXPECT_NEAR((*s4)[0].value, 0.0, 1e-12);
  EXPECT_NEAR((*s4)[1].value, 1.0, 1e-12);
  EXPECT_EQ((*s4)[1].multiplicity, 3u);
  EXPECT_NEAR((*s4)[2].value, 2.0, 1e-12);
  EXPECT_EQ(positive_definite(build_aq(build_star(4), {-1.0, 0.5})), Definiteness::Boundary);

  EXPECT_EQ(positive_definite(build_aq(build_cycle(5), {-1.0, 0.0})), Definiteness::Positive);
  EXPECT_FALSE(spectral_summary(build_cycle(5), {-1.0, 0.3}));
}

// The closed forms are checked against explicit eigenvectors: A v = lambda v.
TEST(Spectrum, ClosedFormsHaveEigenvectors) {
  const ModelParams p{-0.8, 0.45};
  for (std::size_t n : {3u, 4u, 6u}) {
    const SymmetricMatrix a = build_aq(build_complete(n), p);
    std::vector<double> ones(n, 1.0), diff(n, 0.0);
    diff[0] = 1.0;
    diff[1] = -1.0;
    const auto av = a.multiply(ones);
    for (double v : av) EXPECT_NEAR(v, -p.alpha - static_cast<double>(n - 1) * p.beta, 1e-12);
    const auto ad = a.multiply(diff);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ad[i], (p.beta - p.alpha) * diff[i], 1e-12);
  }
  for (std::size_t n : {2u, 4u, 7u}) {
    const SymmetricMatrix a = build_aq(build_star(n), p);
    const double r = std::sqrt(static_cast<double>(n));
    for (double sign : {-1.0, 1.0}) {
      // centre weight sign*sqrt(n) against unit leaves
      std::vector<double> v(n + 1, 1.0);
      v[0] = -sign * r;
      const auto av = a.multiply(v);
      const double lambda = -p.alpha + sign * p.beta * r;
      for (std::size_t i = 0; i <= n; ++i) EXPECT_NEAR(av[i], lambda * v[i], 1e-12);
    }
  }
}

TEST(Spectrum, PdVerdictMatchesClosedFormAndGershgorin) {
  for (double a = -2.0; a <= 2.0; a += 0.173) {
    for (double b = -2.0; b <= 2.0; b += 0.151) {
      for (const Graph& g : {build_complete(4), build_star(3), build_star(5)}) {
        const ModelParams p{a, b};
        const auto spec = spectral_summary(g, p);
        const SymmetricMatrix m = build_aq(g, p);
        const double lmin = spec->front().value;
        const Definiteness d = positive_definite(m);
        if (lmin > kBoundaryBand) {
          EXPECT_EQ(d, Definiteness::Positive);
        } else if (lmin < -kBoundaryBand) {
          EXPECT_EQ(d, Definiteness::NotPositive);
        }
        const Interval gi = gershgorin_interval(m);
        for (const auto& e : *spec) EXPECT_TRUE(gi.contains(e.value, 1e-12));
        if (strictly_diagonally_dominant_positive(m)) {
          EXPECT_EQ(d, Definiteness::Positive);
        }
      }
    }
  }
}

TEST(Spectrum, NonSymmetricIsContractViolation) {
  SymmetricMatrix m(2);
  m(0, 1) = 1.0;
  EXPECT_THROW(positive_definite(m), ContractViolation);
}

TEST(StarIdentity, ExamplesAndErrors) {
  EXPECT_NEAR(star_potential_identity_residual(build_star(2), {-1.0, 1.0}, {1, 1, 1}), 0.0, 1e-12);
  EXPECT_EQ(star_potential_identity_residual(build_star(3), {-1.0, 1.0}, Configuration(4)), 0.0);
  EXPECT_THROW(star_potential_identity_residual(build_cycle(4), {-1.0, 1.0}, Configuration(4)), DomainError);
  EXPECT_THROW(star_potential_identity_residual(build_star(2), {0.5, 1.0}, Configuration(3)), DomainError);
}

TEST(StarIdentity, RandomDraws) {
  Rng rng(23);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Graph s = build_star(std::uniform_int_distribution<std::size_t>(1, 9)(rng));
    const ModelParams p{std::uniform_real_distribution<double>(-3.0, -0.01)(rng),
                        std::uniform_real_distribution<double>(-3.0, 3.0)(rng)};
    const Configuration xi = harness::detail::random_configuration(rng, s.vertex_count(), 20);
    worst = std::max(worst, std::abs(star_potential_identity_residual(s, p, xi)));
  }
  EXPECT_LT(worst, 1e-9);
}
