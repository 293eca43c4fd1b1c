#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccplan/presets.hpp"
#include "ccplan/scenario_gen.hpp"
#include "support/fixtures.hpp"

namespace ccplan::gen {
namespace {

// Moments of a discrete distribution computed directly from the definition.
Moments direct_moments(const std::vector<double>& x, const std::vector<double>& p) {
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mean += p[i] * x[i];
  double m2 = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m2 += p[i] * std::pow(x[i] - mean, 2);
    m3 += p[i] * std::pow(x[i] - mean, 3);
  }
  return {mean, m2, m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0};
}

TEST(LognormalMoments, ClosedFormValues) {
  EXPECT_NEAR(lognormal_moments(3.66, 0.60).mean, 46.46, 0.1);
  EXPECT_NEAR(lognormal_moments(5.79, 0.26).mean, 338.3, 0.1);
  const auto tiny = lognormal_moments(0.0, 1e-6);
  EXPECT_NEAR(tiny.mean, 1.0, 1e-9);
  EXPECT_NEAR(tiny.variance, 0.0, 1e-9);
  EXPECT_NEAR(tiny.skewness, 0.0, 1e-5);
  EXPECT_THROW(lognormal_moments(1.0, 0.0), std::invalid_argument);
}

TEST(LognormalMoments, AgreeWithNumericalIntegration) {
  const double mu = 1.2, sigma = 0.45;
  // Integrate over z ~ N(0,1), x = exp(mu + sigma z).
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  const double h = 1e-3;
  for (double z = -12; z <= 12; z += h) {
    const double w = std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI) * h;
    const double x = std::exp(mu + sigma * z);
    m1 += w * x;
    m2 += w * x * x;
    m3 += w * x * x * x;
  }
  const double var = m2 - m1 * m1;
  const double skew = (m3 - 3 * m1 * var - m1 * m1 * m1) / std::pow(var, 1.5);
  const auto m = lognormal_moments(mu, sigma);
  EXPECT_NEAR(m.mean, m1, 1e-8 * m1);
  EXPECT_NEAR(m.variance, var, 1e-6 * var);
  EXPECT_NEAR(m.skewness, skew, 1e-5);
}

TEST(BranchingFactor, Examples) {
  EXPECT_EQ(branching_factor(3, 6, 3), 3);
  EXPECT_EQ(branching_factor(1, 1, 1), 1);
  EXPECT_EQ(branching_factor(2, 3, 3), 3);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 1; t <= 6; ++t) {
      for (int m = 1; m <= 3; ++m) {
        const int d = n * t;
        const int y = branching_factor(n, t, m);
        EXPECT_GE((d + 1) * y - 1, d * m);
        if (y > 1) EXPECT_LT((d + 1) * (y - 1) - 1, d * m);
      }
    }
  }
}

TEST(ImpliedMoments, PublishedTreeOneKeyboardMean) {
  BranchSet set{{{133, 246, 87}, {30, 58, 39}, {49, 57, 20}}, {0.1, 0.598, 0.302}};
  const auto m = implied_moments(set);
  EXPECT_NEAR(m[0].mean, 46.038, 1e-9);
  EXPECT_NEAR(m[0].mean, 46.0, 0.05);
  for (int n = 0; n < 3; ++n) {
    std::vector<double> x;
    for (const auto& r : set.realizations) x.push_back(r[static_cast<std::size_t>(n)]);
    const auto d = direct_moments(x, set.probabilities);
    EXPECT_NEAR(m[static_cast<std::size_t>(n)].variance, d.variance, 1e-9);
    EXPECT_NEAR(m[static_cast<std::size_t>(n)].skewness, d.skewness, 1e-12);
  }
}

TEST(MatchingObjective, GradientMatchesFiniteDifferences) {
  const auto spec = moment_spec_for(presets::retail_instance(), Regime::Normal);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 0.5);
  const int y = 3;
  std::vector<double> x(static_cast<std::size_t>(y * 3 + y));
  for (double& v : x) v = z(rng);
  std::vector<double> grad;
  matching_objective_and_gradient(spec, y, x, &grad);
  ASSERT_EQ(grad.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    auto up = x, down = x;
    up[i] += h;
    down[i] -= h;
    const double fd = (matching_objective_and_gradient(spec, y, up, nullptr) -
                       matching_objective_and_gradient(spec, y, down, nullptr)) / (2 * h);
    EXPECT_NEAR(grad[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << "coordinate " << i;
  }
}

TEST(MatchMoments, SingleBranchSitsAtMeans) {
  auto spec = moment_spec_for(presets::retail_instance(), Regime::Normal);
  const auto r = match_moments(spec, 1, 1);
  ASSERT_EQ(r.branches.branches(), 1u);
  EXPECT_DOUBLE_EQ(r.branches.probabilities[0], 1.0);
  double expected = 0.0;
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_NEAR(r.branches.realizations[0][n], spec.products[n].value.mean, 1e-4 * spec.products[n].value.mean);
    expected += std::pow(spec.products[n].value.variance, 2) + std::pow(spec.products[n].value.skewness, 2);
  }
  EXPECT_NEAR(r.objective, expected, 1e-6 * expected);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.underspecified);
}

TEST(MatchMoments, MeansOnlyReachesZero) {
  auto spec = moment_spec_for(presets::retail_instance(), Regime::Booming, 3);
  for (auto& p : spec.products) p.weight = {1.0, 0.0, 0.0};
  const auto r = match_moments(spec, 2, 5);
  EXPECT_LT(r.objective, 1e-6);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_NEAR(r.achieved[n].mean, spec.products[n].value.mean, 1e-3);
}

TEST(MatchMoments, NormalRegimeThreeBranches) {
  const auto spec = moment_spec_for(presets::retail_instance(), Regime::Normal);
  const auto r = match_moments(spec, 3, 11);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.objective, 1e-6);
  double total = 0.0;
  for (double p : r.branches.probabilities) {
    EXPECT_GE(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  for (std::size_t n = 0; n < 3; ++n) {
    const auto target = spec.products[n].value;
    EXPECT_NEAR(r.achieved[n].mean, target.mean, 1e-3 * target.mean);
    std::vector<double> x;
    for (const auto& row : r.branches.realizations) x.push_back(row[n]);
    const auto d = direct_moments(x, r.branches.probabilities);
    EXPECT_NEAR(d.mean, r.achieved[n].mean, 1e-9 * d.mean);
    EXPECT_NEAR(d.variance, r.achieved[n].variance, 1e-9 * d.variance);
    EXPECT_NEAR(d.skewness, r.achieved[n].skewness, 1e-9);
  }
  EXPECT_NEAR(r.achieved[0].mean, 46.46, 0.05 * 46.46);
}

TEST(MatchMoments, DeterministicForSeed) {
  const auto spec = moment_spec_for(presets::retail_instance(), Regime::Booming);
  const auto a = match_moments(spec, 3, 42);
  const auto b = match_moments(spec, 3, 42);
  EXPECT_EQ(a.branches.realizations, b.branches.realizations);
  EXPECT_EQ(a.branches.probabilities, b.branches.probabilities);
}

TEST(BuildTree, PublishedTreeHas729Paths) {
  const auto trees = presets::retail_trees();
  ASSERT_EQ(trees.size(), 3u);
  const auto fan = trees[0].to_fan();
  EXPECT_EQ(fan.size(), 729u);
  double total = 0.0;
  for (double p : fan.probabilities) total += p;
  EXPECT_NEAR(total, 1.0, 1e-9);
  // Periods 5 and 6 draw from the booming set, earlier ones from the normal set.
  const auto& normal = trees[0].branch_sets.at(Regime::Normal);
  const auto& booming = trees[0].branch_sets.at(Regime::Booming);
  const auto& last = fan.scenarios.back();
  EXPECT_EQ(last(0, 4), normal.realizations[2][0]);
  EXPECT_EQ(last(0, 5), booming.realizations[2][0]);
  EXPECT_EQ(last(0, 6), booming.realizations[2][0]);
  EXPECT_NEAR(fan.probabilities.back(), std::pow(0.302, 4) * std::pow(0.396, 2), 1e-15);
}

TEST(BuildTree, SinglePeriodIsTheBranchSet) {
  auto c = testing::small_instance(2, 1);
  BranchSet set{{{1, 2}, {3, 4}}, {0.25, 0.75}};
  const auto fan = build_tree(c, {{Regime::Normal, set}}).to_fan();
  ASSERT_EQ(fan.size(), 2u);
  EXPECT_EQ(fan.probabilities, set.probabilities);
  EXPECT_EQ(fan.scenarios[1](1, 1), 4.0);
}

TEST(BuildTree, MissingRegimeIsAnError) {
  auto c = testing::small_instance(1, 2);
  c.demand_pattern = {Regime::Normal, Regime::Booming};
  EXPECT_THROW(build_tree(c, {{Regime::Normal, BranchSet{{{1}}, {1.0}}}}), std::invalid_argument);
}

TEST(BuildTree, RandomPathProbabilitiesSumToOne) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = testing::small_instance(2, 1 + static_cast<int>(rng() % 4));
    for (auto& r : c.demand_pattern) r = rng() % 2 ? Regime::Normal : Regime::Booming;
    std::map<Regime, BranchSet> sets;
    for (Regime r : {Regime::Normal, Regime::Booming}) {
      BranchSet s;
      const int y = 1 + static_cast<int>(rng() % 3);
      double total = 0.0;
      for (int b = 0; b < y; ++b) {
        s.realizations.push_back({10 * u(rng), 10 * u(rng)});
        s.probabilities.push_back(u(rng));
        total += s.probabilities.back();
      }
      for (double& p : s.probabilities) p /= total;
      sets[r] = s;
    }
    const auto fan = build_tree(c, sets).to_fan();
    double total = 0.0;
    for (double p : fan.probabilities) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(TreeJson, RoundTrips) {
  const auto tree = presets::retail_trees()[1];
  const auto back = tree_from_json(tree_to_json(tree));
  EXPECT_EQ(tree_to_json(back), tree_to_json(tree));
  EXPECT_EQ(back.to_fan().scenarios, tree.to_fan().scenarios);
}

}  // namespace
}  // namespace ccplan::gen
