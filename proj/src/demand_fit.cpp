#include "ccplan/demand_fit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <stdexcept>

#include "ccplan/text_io.hpp"

namespace ccplan::fit {

ScaledSeries scale_comments(std::span<const double> comment_counts, double comment_rate, int lag) {
  if (comment_counts.empty()) throw std::invalid_argument("scale_comments: empty series");
  if (!(comment_rate > 0.0 && comment_rate <= 1.0)) {
    throw std::invalid_argument("scale_comments: comment rate must be in (0, 1]");
  }
  if (lag < 0) throw std::invalid_argument("scale_comments: lag must be >= 0");
  ScaledSeries out;
  out.start_offset = -lag;
  out.demand.reserve(comment_counts.size());
  for (double c : comment_counts) out.demand.push_back(std::round(c / comment_rate));
  return out;
}

FitResult fit_lognormal_mle(const SampleSet& samples) {
  const auto& obs = samples.observations;
  if (obs.size() < 2) throw std::invalid_argument("fit_lognormal_mle: need at least 2 observations");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!(obs[i] > 0.0) || !std::isfinite(obs[i])) {
      throw std::invalid_argument("fit_lognormal_mle: observation " + std::to_string(i) + " is not positive");
    }
  }
  const double n = static_cast<double>(obs.size());
  double mean = 0.0;
  for (double x : obs) mean += std::log(x);
  mean /= n;
  double ss = 0.0;
  for (double x : obs) {
    const double d = std::log(x) - mean;
    ss += d * d;
  }
  const double sigma = std::sqrt(ss / n);
  // Relative threshold: log-observations that agree to rounding are degenerate.
  if (!(sigma > 1e-12 * std::max(1.0, std::abs(mean)))) {
    throw std::invalid_argument("fit_lognormal_mle: degenerate sample, sigma must be > 0");
  }
  FitResult fit;
  fit.mu = mean;
  fit.sigma = sigma;
  fit.sample_size = obs.size();
  return fit;
}

double lognormal_cdf(double x, double mu, double sigma) {
  if (x <= 0.0) return 0.0;
  return 0.5 * std::erfc(-(std::log(x) - mu) / (sigma * std::numbers::sqrt2));
}

double ks_statistic(std::span<const double> observations, double mu, double sigma) {
  if (observations.empty()) throw std::invalid_argument("ks_statistic: no observations");
  std::vector<double> sorted(observations.begin(), observations.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = lognormal_cdf(sorted[i], mu, sigma);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // P(K <= l) = sqrt(2 pi)/l * sum exp(-(2k-1)^2 pi^2 / (8 l^2)); fast for small l.
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    double cdf = 0.0;
    double y_pow = y;
    const double y8 = std::pow(y, 8.0);
    double step = y8;  // ratio between consecutive odd-square powers grows as y^(8k)
    for (int k = 1; k <= 50 && y_pow > 0.0; ++k) {
      cdf += y_pow;
      y_pow *= step;
      step *= y8;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_test(const SampleSet& samples, const FitResult& fit) {
  if (!(fit.sigma > 0.0)) throw std::invalid_argument("ks_test: fit sigma must be > 0");
  const double d = ks_statistic(samples.observations, fit.mu, fit.sigma);
  return kolmogorov_survival(std::sqrt(static_cast<double>(samples.observations.size())) * d);
}

FitResult fit_and_test(const SampleSet& samples) {
  FitResult fit = fit_lognormal_mle(samples);
  fit.ks_statistic = ks_statistic(samples.observations, fit.mu, fit.sigma);
  fit.ks_p_value = ks_test(samples, fit);
  return fit;
}

namespace {

Regime parse_regime(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  if (text == "0" || text == "normal") return Regime::Normal;
  if (text == "1" || text == "booming") return Regime::Booming;
  throw std::invalid_argument("samples CSV: unknown regime '" + text + "'");
}

}  // namespace

std::vector<SampleRow> read_samples_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("samples CSV: empty input");
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"product_id", "period_start_date", "regime", "observation"};
  if (header != expected) {
    throw std::invalid_argument("samples CSV: header must be product_id,period_start_date,regime,observation");
  }
  std::vector<SampleRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 4) throw std::invalid_argument("samples CSV: line " + std::to_string(lineno) + " needs 4 fields");
    rows.push_back({cells[0], cells[1], parse_regime(cells[2]), parse_double(cells[3], "observation")});
  }
  if (rows.empty()) throw std::invalid_argument("samples CSV: no data rows");
  return rows;
}

std::vector<SampleSet> build_sample_sets(const std::vector<SampleRow>& rows, double comment_rate, int lag) {
  std::vector<std::string> products;
  for (const auto& row : rows) {
    if (std::find(products.begin(), products.end(), row.product_id) == products.end()) {
      products.push_back(row.product_id);
    }
  }
  std::vector<SampleSet> sets;
  auto set_for = [&sets](const std::string& product, Regime regime) -> SampleSet& {
    for (auto& s : sets) {
      if (s.product_id == product && s.regime == regime) return s;
    }
    sets.push_back(SampleSet{product, regime, {}});
    return sets.back();
  };

  for (const auto& product : products) {
    std::vector<const SampleRow*> series;
    for (const auto& row : rows) {
      if (row.product_id == product) series.push_back(&row);
    }
    std::vector<double> counts;
    for (const auto* row : series) counts.push_back(row->observation);
    const ScaledSeries scaled = scale_comments(counts, comment_rate, lag);
    // Comments in row i + lag describe purchases made in period i.
    for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < series.size(); ++i) {
      const double estimate = scaled.demand[i + static_cast<std::size_t>(lag)];
      if (estimate > 0.0) set_for(product, series[i]->regime).observations.push_back(estimate);
    }
  }
  return sets;
}

nlohmann::json fits_to_json(const std::vector<std::pair<SampleSet, FitResult>>& fits) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [samples, fit] : fits) {
    doc[samples.product_id][regime_name(samples.regime)] = {{"mu", fit.mu},
                                                             {"sigma", fit.sigma},
                                                             {"ks_statistic", fit.ks_statistic},
                                                             {"ks_p_value", fit.ks_p_value},
                                                             {"sample_size", fit.sample_size}};
  }
  return doc;
}

}  // namespace ccplan::fit
