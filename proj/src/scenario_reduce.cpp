#include "ccplan/scenario_reduce.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ccplan/parallel.hpp"

namespace ccplan::reduce {

double pairwise_distance(const PeriodGrid& a, const PeriodGrid& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("pairwise_distance: scenarios differ in shape");
  const auto ra = a.raw();
  const auto rb = b.raw();
  double ss = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double d = ra[i] - rb[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

ReductionResult fast_forward_select(const ScenarioFan& fan, std::size_t k) {
  fan.check(1e-6);
  const std::size_t S = fan.size();
  if (k < 1 || k > S) throw std::invalid_argument("fast_forward_select: k must be in [1, number of scenarios]");
  const auto& pr = fan.probabilities;

  // dist[j * S + i] = d(j, i); only entries with both j, i unselected are
  // updated after the first step.
  std::vector<double> base(S * S);
  parallel_for(S, [&](std::size_t j) {
    for (std::size_t i = 0; i < S; ++i) base[j * S + i] = pairwise_distance(fan.scenarios[j], fan.scenarios[i]);
  });
  std::vector<double> dist = base;

  std::vector<char> chosen(S, 0);
  ReductionResult out;
  out.selected.reserve(k);
  for (std::size_t step = 0; step < k; ++step) {
    if (step > 0) {
      const std::size_t l = out.selected.back();
      for (std::size_t j = 0; j < S; ++j) {
        if (chosen[j]) continue;
        const double via_l = dist[j * S + l];
        for (std::size_t i = 0; i < S; ++i) {
          if (!chosen[i] && via_l < dist[j * S + i]) dist[j * S + i] = via_l;
        }
      }
    }
    std::size_t best = S;
    double best_wd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < S; ++i) {
      if (chosen[i]) continue;
      double wd = 0.0;
      for (std::size_t j = 0; j < S; ++j) {
        if (!chosen[j]) wd += pr[j] * dist[j * S + i];
      }
      if (wd < best_wd) {
        best_wd = wd;
        best = i;
      }
    }
    chosen[best] = 1;
    out.selected.push_back(best);
  }

  std::vector<std::size_t> slot(S, S);
  for (std::size_t s = 0; s < out.selected.size(); ++s) slot[out.selected[s]] = s;
  out.probabilities.resize(k);
  out.assignment.resize(S);
  for (std::size_t s = 0; s < k; ++s) out.probabilities[s] = pr[out.selected[s]];
  for (std::size_t j = 0; j < S; ++j) {
    if (chosen[j]) {
      out.assignment[j] = j;
      continue;
    }
    std::size_t nearest = S;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < S; ++i) {  // ascending index keeps the lowest on ties
      if (chosen[i] && base[j * S + i] < nearest_d) {
        nearest_d = base[j * S + i];
        nearest = i;
      }
    }
    out.assignment[j] = nearest;
    out.probabilities[slot[nearest]] += pr[j];
    out.total_weighted_distance += pr[j] * nearest_d;
  }
  return out;
}

ScenarioFan apply(const ScenarioFan& fan, const ReductionResult& result) {
  ScenarioFan out;
  for (std::size_t s = 0; s < result.selected.size(); ++s) {
    out.scenarios.push_back(fan.scenarios.at(result.selected[s]));
    out.probabilities.push_back(result.probabilities[s]);
  }
  return out;
}

nlohmann::json reduction_to_json(const ReductionResult& r) {
  return {{"selected", r.selected},
          {"probabilities", r.probabilities},
          {"assignment", r.assignment},
          {"total_weighted_distance", r.total_weighted_distance}};
}

}  // namespace ccplan::reduce
