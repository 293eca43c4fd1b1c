#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccplan/core.hpp"

namespace ccplan::fit {

struct SampleSet {
  std::string product_id;
  Regime regime = Regime::Normal;
  std::vector<double> observations;
};

struct FitResult {
  double mu = 0.0;
  double sigma = 0.0;
  double ks_p_value = 0.0;
  double ks_statistic = 0.0;
  std::size_t sample_size = 0;
};

// Demand estimate from a comment-count series. `start_offset` is the period
// of demand[0] relative to the first comment period, i.e. -lag.
struct ScaledSeries {
  int start_offset = 0;
  std::vector<double> demand;
};

ScaledSeries scale_comments(std::span<const double> comment_counts, double comment_rate, int lag);

// Closed-form maximum likelihood: mean and population standard deviation of
// log-observations. Fills mu and sigma only.
FitResult fit_lognormal_mle(const SampleSet& samples);

double lognormal_cdf(double x, double mu, double sigma);

// One-sample KS statistic sup |F_n - F| against log-normal(mu, sigma).
double ks_statistic(std::span<const double> observations, double mu, double sigma);

// Survival function of the limiting Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

// p-value of the KS statistic under the asymptotic distribution, using
// lambda = sqrt(n) * D.
double ks_test(const SampleSet& samples, const FitResult& fit);

// Fit + KS in one step.
FitResult fit_and_test(const SampleSet& samples);

// Rows of product_id, period_start_date, regime, observation. Regime accepts
// 0/1 or normal/booming. Rows are grouped by (product, regime) in order of
// first appearance; each group's observations keep file order.
struct SampleRow {
  std::string product_id;
  std::string period_start_date;
  Regime regime;
  double observation;
};

std::vector<SampleRow> read_samples_csv(std::istream& is);

// Groups rows into sample sets after turning comment counts into demand
// estimates with scale_comments (rate and lag applied per product/regime
// series). Non-positive estimates are dropped because they are outside the
// log-normal support.
std::vector<SampleSet> build_sample_sets(const std::vector<SampleRow>& rows, double comment_rate, int lag);

// {"<product>": {"normal": {...}, "booming": {...}}}
nlohmann::json fits_to_json(const std::vector<std::pair<SampleSet, FitResult>>& fits);

}  // namespace ccplan::fit
