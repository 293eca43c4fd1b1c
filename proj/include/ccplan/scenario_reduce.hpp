#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccplan/scenario.hpp"

namespace ccplan::reduce {

// Euclidean norm over all N*T demand entries.
double pairwise_distance(const PeriodGrid& a, const PeriodGrid& b);

struct ReductionResult {
  std::vector<std::size_t> selected;     // original indices, in selection order
  std::vector<double> probabilities;     // redistributed, parallel to `selected`
  std::vector<std::size_t> assignment;   // original index -> selected original index
  double total_weighted_distance = 0.0;  // sum over dropped j of Pr(j) * d(j, assignment[j])
};

// Fast forward selection. Greedily picks the scenario with the smallest
// probability-weighted distance to the not-yet-selected scenarios, updating
// distances by d(j,i) <- min(d(j,i), d(j,l)) after each pick l. Dropped
// scenarios give their probability to the nearest selected one. Ties go to
// the lowest index.
ReductionResult fast_forward_select(const ScenarioFan& fan, std::size_t k);

// Selected scenarios with redistributed probabilities, in selection order.
ScenarioFan apply(const ScenarioFan& fan, const ReductionResult& result);

nlohmann::json reduction_to_json(const ReductionResult& result);

}  // namespace ccplan::reduce
