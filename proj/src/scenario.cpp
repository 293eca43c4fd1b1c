#include "ccplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include "ccplan/text_io.hpp"

namespace ccplan {

void ScenarioFan::check(double tolerance) const {
  if (scenarios.empty()) throw std::invalid_argument("scenario fan is empty");
  if (scenarios.size() != probabilities.size()) {
    throw std::invalid_argument("scenario fan: one probability per scenario required");
  }
  const auto& first = scenarios.front();
  double total = 0.0;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    if (!scenarios[s].same_shape(first)) throw std::invalid_argument("scenario fan: scenarios differ in shape");
    for (double d : scenarios[s].raw()) {
      if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("scenario fan: demands must be >= 0");
    }
    if (!(probabilities[s] >= 0.0)) throw std::invalid_argument("scenario fan: probabilities must be >= 0");
    total += probabilities[s];
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw std::invalid_argument("scenario fan: probabilities sum to " + format_double(total) + ", expected 1");
  }
}

std::vector<std::size_t> ScenarioFan::duplicates() const {
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto raw = scenarios[s].raw();
    if (!seen.emplace(raw.begin(), raw.end()).second) out.push_back(s);
  }
  return out;
}

PeriodGrid ScenarioFan::mean() const {
  check(1e-6);
  PeriodGrid out(products(), horizon());
  for (std::size_t s = 0; s < size(); ++s) {
    for (int n = 0; n < products(); ++n) {
      for (int t = 1; t <= horizon(); ++t) out(n, t) += probabilities[s] * scenarios[s](n, t);
    }
  }
  return out;
}

ScenarioFan single_scenario_fan(const PeriodGrid& demands) { return ScenarioFan{{demands}, {1.0}}; }

void write_fan_csv(std::ostream& os, const ScenarioFan& fan) {
  const int N = fan.products();
  const int T = fan.horizon();
  os << "probability";
  for (int t = 1; t <= T; ++t) {
    for (int n = 1; n <= N; ++n) os << ",t" << t << "_p" << n;
  }
  os << '\n';
  for (std::size_t s = 0; s < fan.size(); ++s) {
    os << format_double(fan.probabilities[s]);
    for (int t = 1; t <= T; ++t) {
      for (int n = 0; n < N; ++n) os << ',' << format_double(fan.scenarios[s](n, t));
    }
    os << '\n';
  }
}

ScenarioFan read_fan_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("fan CSV: missing header");
  const auto header = split_csv_line(line);
  if (header.empty() || header.front() != "probability") {
    throw std::invalid_argument("fan CSV: header must start with 'probability'");
  }
  int N = 0;
  int T = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    int t = 0;
    int n = 0;
    if (std::sscanf(header[i].c_str(), "t%d_p%d", &t, &n) != 2) {
      throw std::invalid_argument("fan CSV: bad column name '" + header[i] + "'");
    }
    T = std::max(T, t);
    N = std::max(N, n);
  }
  if (N < 1 || T < 1 || static_cast<std::size_t>(N * T) + 1 != header.size()) {
    throw std::invalid_argument("fan CSV: header does not describe a full N x T grid");
  }

  ScenarioFan fan;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("fan CSV: row " + std::to_string(row) + " has wrong column count");
    }
    fan.probabilities.push_back(parse_double(cells[0], "probability"));
    PeriodGrid grid(N, T);
    std::size_t k = 1;
    for (int t = 1; t <= T; ++t) {
      for (int n = 0; n < N; ++n) grid(n, t) = parse_double(cells[k++], "demand");
    }
    fan.scenarios.push_back(std::move(grid));
  }
  fan.check(1e-6);
  return fan;
}

}  // namespace ccplan
