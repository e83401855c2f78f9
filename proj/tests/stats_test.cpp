#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ibd/stats.hpp"

using namespace ibd;

TEST(Stats, TotalVariation) {
  const std::vector<double> p{0.5, 0.5, 0.0}, q{0.25, 0.25, 0.5};
  EXPECT_DOUBLE_EQ(stats::total_variation(p, q), 0.5);
  EXPECT_EQ(stats::total_variation(p, p), 0.0);
  EXPECT_THROW(stats::total_variation(p, std::vector<double>{1.0}), DomainError);
}

TEST(Stats, MultinomialBound) {
  // two cells at 1/2: 0.5 * 4 * 2 * sqrt(0.25 / 100)
  const std::vector<double> p{0.5, 0.5};
  EXPECT_NEAR(stats::multinomial_tv_bound(p, 100), 0.2, 1e-12);
  EXPECT_EQ(stats::multinomial_tv_bound(std::vector<double>{1.0}, 10), 0.0);
}

TEST(Stats, ChiSquareKnownValue) {
  // statistic 4 on 1 dof
  const std::vector<double> obs{60, 40}, prob{0.5, 0.5};
  const auto r = stats::chi_square_gof(obs, prob);
  EXPECT_DOUBLE_EQ(r.statistic, 4.0);
  EXPECT_EQ(r.dof, 1u);
  EXPECT_NEAR(r.p_value, 0.0455002638963584, 1e-12);
  const std::vector<double> even{50, 50};
  EXPECT_NEAR(stats::chi_square_gof(even, prob).p_value, 1.0, 1e-12);
}

TEST(Stats, ChiSquarePoolsSparseCellsAndFlagsImpossibleMass) {
  const std::vector<double> prob{0.5, 0.49, 0.01, 0.0};
  const std::vector<double> obs{50, 49, 1, 0};
  const auto r = stats::chi_square_gof(obs, prob);
  EXPECT_EQ(r.dof, 2u);  // cell 2 and 3 pooled
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  const std::vector<double> bad{50, 48, 0, 2};
  const std::vector<double> tight{0.5, 0.5, 0.0, 0.0};
  EXPECT_EQ(stats::chi_square_gof(bad, tight).p_value, 0.0);
}

TEST(Stats, WilsonInterval) {
  const auto p = stats::proportion(8, 10);
  EXPECT_DOUBLE_EQ(p.estimate, 0.8);
  EXPECT_NEAR(p.lower, 0.4901624, 1e-6);
  EXPECT_NEAR(p.upper, 0.9433178, 1e-6);
  const auto all = stats::proportion(20, 20);
  EXPECT_NEAR(all.upper, 1.0, 1e-12);
  EXPECT_LT(all.lower, 1.0);
  EXPECT_EQ(stats::proportion(0, 0).estimate, 0.0);
  const bool flags[] = {true, false, true, true};
  EXPECT_DOUBLE_EQ(stats::frequency(flags).estimate, 0.75);
}

TEST(Stats, Summarize) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = stats::summarize(v);
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.stddev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_GT(s.ci95_half_width, 0.0);
  EXPECT_EQ(stats::summarize(std::vector<double>{}).n, 0u);
}
