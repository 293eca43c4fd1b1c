#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccplan/scenario_reduce.hpp"
#include "support/fixtures.hpp"

namespace ccplan::reduce {
namespace {

using testing::grid;

ScenarioFan scalar_fan(const std::vector<double>& values, const std::vector<double>& probs) {
  ScenarioFan fan;
  for (double v : values) fan.scenarios.push_back(grid({{v}}));
  fan.probabilities = probs;
  return fan;
}

ScenarioFan random_fan(std::mt19937_64& rng, std::size_t size, int products, int horizon) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioFan fan;
  double total = 0.0;
  for (std::size_t s = 0; s < size; ++s) {
    PeriodGrid g(products, horizon);
    for (int n = 0; n < products; ++n) {
      for (int t = 1; t <= horizon; ++t) g(n, t) = std::round(50 * u(rng));
    }
    fan.scenarios.push_back(g);
    fan.probabilities.push_back(0.1 + u(rng));
    total += fan.probabilities.back();
  }
  for (double& p : fan.probabilities) p /= total;
  return fan;
}

TEST(Distance, Examples) {
  EXPECT_EQ(pairwise_distance(grid({{1, 2}}), grid({{1, 2}})), 0.0);
  EXPECT_EQ(pairwise_distance(grid({{3}}), grid({{7}})), 4.0);
  EXPECT_DOUBLE_EQ(pairwise_distance(grid({{1, 2}, {3, 4}}), grid({{1, 0}, {0, 4}})), std::sqrt(13.0));
  EXPECT_THROW(pairwise_distance(grid({{1}}), grid({{1, 2}})), std::invalid_argument);
}

TEST(FastForward, HandTracedThreeScenarios) {
  // Weighted distances: 0 -> 8.4, 10 -> 2.4, 11 -> 2.6.
  const auto fan = scalar_fan({0, 10, 11}, {0.2, 0.4, 0.4});
  const auto r = fast_forward_select(fan, 2);
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(r.assignment[2], 1u);
  EXPECT_NEAR(r.probabilities[0], 0.8, 1e-15);
  EXPECT_NEAR(r.probabilities[1], 0.2, 1e-15);
  EXPECT_NEAR(r.total_weighted_distance, 0.4, 1e-15);
}

TEST(FastForward, KeepAllLeavesProbabilities) {
  std::mt19937_64 rng(1);
  const auto fan = random_fan(rng, 12, 2, 3);
  const auto r = fast_forward_select(fan, fan.size());
  ASSERT_EQ(r.selected.size(), fan.size());
  for (std::size_t i = 0; i < r.selected.size(); ++i) {
    EXPECT_EQ(r.probabilities[i], fan.probabilities[r.selected[i]]);
  }
  EXPECT_EQ(r.total_weighted_distance, 0.0);
}

TEST(FastForward, RangeChecked) {
  const auto fan = scalar_fan({1, 2}, {0.5, 0.5});
  EXPECT_THROW(fast_forward_select(fan, 0), std::invalid_argument);
  EXPECT_THROW(fast_forward_select(fan, 3), std::invalid_argument);
}

TEST(FastForward, SingleSelectionMatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto fan = random_fan(rng, 2 + rng() % 20, 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3));
    std::size_t best = 0;
    double best_value = INFINITY;
    for (std::size_t i = 0; i < fan.size(); ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < fan.size(); ++j) v += fan.probabilities[j] * pairwise_distance(fan.scenarios[j], fan.scenarios[i]);
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    const auto r = fast_forward_select(fan, 1);
    ASSERT_EQ(r.selected, std::vector<std::size_t>{best});
    ASSERT_NEAR(r.probabilities[0], 1.0, 1e-9);
    ASSERT_NEAR(r.total_weighted_distance, best_value, 1e-9);
  }
}

TEST(FastForward, ProbabilitiesSumToOneAndAssignmentIsNearest) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fan = random_fan(rng, 30, 2, 3);
    const std::size_t k = 1 + rng() % 29;
    const auto r = fast_forward_select(fan, k);
    double total = 0.0;
    for (double p : r.probabilities) total += p;
    ASSERT_NEAR(total, 1.0, 1e-9);
    for (std::size_t j = 0; j < fan.size(); ++j) {
      double nearest = INFINITY;
      for (std::size_t s : r.selected) nearest = std::min(nearest, pairwise_distance(fan.scenarios[j], fan.scenarios[s]));
      ASSERT_DOUBLE_EQ(pairwise_distance(fan.scenarios[j], fan.scenarios[r.assignment[j]]), nearest);
    }
  }
}

TEST(FastForward, DroppingOneGoesToNearestNeighbour) {
  std::mt19937_64 rng(6);
  const auto fan = random_fan(rng, 15, 1, 4);
  const auto r = fast_forward_select(fan, fan.size() - 1);
  std::vector<bool> kept(fan.size(), false);
  for (std::size_t s : r.selected) kept[s] = true;
  const auto dropped = static_cast<std::size_t>(std::find(kept.begin(), kept.end(), false) - kept.begin());
  std::size_t nearest = 0;
  double best = INFINITY;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    if (i == dropped) continue;
    const double d = pairwise_distance(fan.scenarios[i], fan.scenarios[dropped]);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  for (std::size_t i = 0; i < r.selected.size(); ++i) {
    const double expected = fan.probabilities[r.selected[i]] + (r.selected[i] == nearest ? fan.probabilities[dropped] : 0.0);
    EXPECT_NEAR(r.probabilities[i], expected, 1e-15);
  }
}

TEST(FastForward, SelectionsAreNestedPrefixes) {
  std::mt19937_64 rng(7);
  const auto fan = random_fan(rng, 40, 3, 2);
  const auto big = fast_forward_select(fan, 25);
  for (std::size_t k : {1u, 5u, 12u, 24u}) {
    const auto small = fast_forward_select(fan, k);
    EXPECT_TRUE(std::equal(small.selected.begin(), small.selected.end(), big.selected.begin()));
  }
}

TEST(FastForward, InvariantUnderUniformScaling) {
  std::mt19937_64 rng(8);
  auto fan = random_fan(rng, 25, 2, 2);
  const auto base = fast_forward_select(fan, 7);
  for (auto& s : fan.scenarios) {
    for (int n = 0; n < s.products(); ++n) {
      for (int t = 1; t <= s.last_period(); ++t) s(n, t) *= 4.0;
    }
  }
  EXPECT_EQ(fast_forward_select(fan, 7).selected, base.selected);
}

TEST(FastForward, TiesGoToLowestIndex) {
  const auto fan = scalar_fan({5, 5, 5}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_EQ(fast_forward_select(fan, 2).selected, (std::vector<std::size_t>{0, 1}));
}

TEST(Apply, BuildsReducedFan) {
  const auto fan = scalar_fan({0, 10, 11}, {0.2, 0.4, 0.4});
  const auto reduced = apply(fan, fast_forward_select(fan, 2));
  ASSERT_EQ(reduced.size(), 2u);
  EXPECT_EQ(reduced.scenarios[0](0, 1), 10.0);
  EXPECT_NO_THROW(reduced.check());
}

}  // namespace
}  // namespace ccplan::reduce
