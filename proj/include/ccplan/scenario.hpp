#pragma once

#include <iosfwd>
#include <vector>

#include "ccplan/core.hpp"

namespace ccplan {

// Flat list of full-horizon demand paths (each an N x T grid) with
// probabilities. A scenario tree collapses to this by enumerating its leaves.
struct ScenarioFan {
  std::vector<PeriodGrid> scenarios;
  std::vector<double> probabilities;

  std::size_t size() const { return scenarios.size(); }
  int products() const { return scenarios.empty() ? 0 : scenarios.front().products(); }
  int horizon() const { return scenarios.empty() ? 0 : scenarios.front().last_period(); }

  // Throws std::invalid_argument on shape mismatch, negative demand or
  // probabilities that are negative or do not sum to 1 within `tolerance`.
  void check(double tolerance = 1e-9) const;

  // Indices of scenarios that duplicate an earlier one exactly.
  std::vector<std::size_t> duplicates() const;

  // Probability-weighted mean demand.
  PeriodGrid mean() const;
};

ScenarioFan single_scenario_fan(const PeriodGrid& demands);

// CSV: header "probability,t1_p1,t1_p2,...", then one row per path with the
// N*T demand values in period-major, product-minor order.
void write_fan_csv(std::ostream& os, const ScenarioFan& fan);
ScenarioFan read_fan_csv(std::istream& is);

}  // namespace ccplan
