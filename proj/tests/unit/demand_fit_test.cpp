#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ccplan/demand_fit.hpp"

namespace ccplan::fit {
namespace {

SampleSet sample(std::vector<double> obs) { return SampleSet{"p", Regime::Normal, std::move(obs)}; }

std::vector<double> draws(std::mt19937_64& rng, double mu, double sigma, int n) {
  std::lognormal_distribution<double> dist(mu, sigma);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(dist(rng));
  return out;
}

TEST(ScaleComments, DividesByRate) {
  const std::vector<double> counts{3, 5};
  EXPECT_EQ(scale_comments(counts, 0.1, 0).demand, (std::vector<double>{30, 50}));
  EXPECT_EQ(scale_comments(counts, 1.0, 0).demand, (std::vector<double>{3, 5}));
}

TEST(ScaleComments, LagShiftsDatesOnly) {
  const std::vector<double> counts{0, 4};
  const auto s = scale_comments(counts, 0.1, 1);
  EXPECT_EQ(s.demand, (std::vector<double>{0, 40}));
  EXPECT_EQ(s.start_offset, -1);
}

TEST(ScaleComments, RejectsBadInput) {
  const std::vector<double> counts{1};
  EXPECT_THROW(scale_comments({}, 0.1, 0), std::invalid_argument);
  EXPECT_THROW(scale_comments(counts, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(scale_comments(counts, 1.5, 0), std::invalid_argument);
  EXPECT_THROW(scale_comments(counts, 0.1, -1), std::invalid_argument);
}

TEST(FitLognormal, TwoPointClosedForm) {
  const auto f = fit_lognormal_mle(sample({std::exp(2.0), std::exp(4.0)}));
  EXPECT_NEAR(f.mu, 3.0, 1e-12);
  EXPECT_NEAR(f.sigma, 1.0, 1e-12);
}

TEST(FitLognormal, DegenerateAndNonPositiveRejected) {
  EXPECT_THROW(fit_lognormal_mle(sample({std::exp(3.0), std::exp(3.0), std::exp(3.0)})), std::invalid_argument);
  try {
    fit_lognormal_mle(sample({1.0, 0.0, 2.0}));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("observation 1"), std::string::npos);
  }
  EXPECT_THROW(fit_lognormal_mle(sample({2.0})), std::invalid_argument);
}

TEST(FitLognormal, RecoversKeyboardParameters) {
  std::mt19937_64 rng(2024);
  const auto f = fit_lognormal_mle(sample(draws(rng, 3.66, 0.60, 10000)));
  EXPECT_NEAR(f.mu, 3.66, 0.02);
  EXPECT_NEAR(f.sigma, 0.60, 0.02);
}

TEST(FitLognormal, ScaleEquivariantOnLogScale) {
  std::mt19937_64 rng(9);
  auto obs = draws(rng, 1.0, 0.4, 50);
  const auto base = fit_lognormal_mle(sample(obs));
  for (double& x : obs) x *= std::exp(1.0);
  const auto scaled = fit_lognormal_mle(sample(obs));
  EXPECT_NEAR(scaled.mu, base.mu + 1.0, 1e-12);
  EXPECT_NEAR(scaled.sigma, base.sigma, 1e-12);
}

TEST(KsTest, MostlyAcceptsCorrectModel) {
  std::mt19937_64 rng(77);
  int accepted = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = sample(draws(rng, 3.66, 0.60, 500));
    if (fit_and_test(s).ks_p_value > 0.05) ++accepted;
  }
  EXPECT_GE(accepted, 90);
}

TEST(KsTest, RejectsGrossMismatch) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  std::vector<double> obs;
  for (int i = 0; i < 200; ++i) obs.push_back(u(rng));
  EXPECT_LT(ks_test(sample(obs), FitResult{3.66, 0.60}), 0.01);
}

TEST(KsTest, StatisticShrinksWithPerfectQuantiles) {
  // Observations at the exact model quantiles (i - 0.5) / n.
  double previous = 1.0;
  for (int n : {10, 100, 1000}) {
    std::vector<double> obs;
    for (int i = 1; i <= n; ++i) {
      const double u = (i - 0.5) / n;
      double lo = 1e-9, hi = 1e9;
      for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (lognormal_cdf(mid, 0.0, 1.0) < u ? lo : hi) = mid;
      }
      obs.push_back(std::sqrt(lo * hi));
    }
    const double d = ks_statistic(obs, 0.0, 1.0);
    EXPECT_NEAR(d, 0.5 / n, 1e-6);
    EXPECT_LT(d, previous);
    previous = d;
  }
}

TEST(KsTest, SurvivalIsMonotoneAndBounded) {
  double previous = 1.0;
  for (double lambda = 0.05; lambda < 3.0; lambda += 0.05) {
    const double p = kolmogorov_survival(lambda);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_LE(p, previous + 1e-15);
    previous = p;
  }
  // Tabulated Kolmogorov quantile: P(K > 1.3581) = 0.05.
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 1e-4);
}

TEST(SamplesCsv, GroupsAndScales) {
  std::istringstream is(
      "product_id,period_start_date,regime,observation\n"
      "kb,2020-01-01,normal,3\n"
      "kb,2020-01-08,0,5\n"
      "kb,2020-11-01,booming,40\n"
      "ms,2020-01-01,normal,0\n"
      "ms,2020-01-08,normal,2\n");
  const auto sets = build_sample_sets(read_samples_csv(is), 0.1, 0);
  ASSERT_EQ(sets.size(), 3u);
  EXPECT_EQ(sets[0].product_id, "kb");
  EXPECT_EQ(sets[0].observations, (std::vector<double>{30, 50}));
  EXPECT_EQ(sets[1].regime, Regime::Booming);
  EXPECT_EQ(sets[2].observations, (std::vector<double>{20}));
}

TEST(SamplesCsv, EmptyInputIsAnError) {
  std::istringstream empty("");
  EXPECT_THROW(read_samples_csv(empty), std::invalid_argument);
  std::istringstream header_only("product_id,period_start_date,regime,observation\n");
  EXPECT_THROW(read_samples_csv(header_only), std::invalid_argument);
}

}  // namespace
}  // namespace ccplan::fit
