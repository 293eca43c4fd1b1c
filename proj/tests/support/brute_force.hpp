#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "ccplan/core.hpp"
#include "ccplan/scenario.hpp"
#include "support/fixtures.hpp"

namespace ccplan::testing {

// Exhaustive search for one product and a horizon of one or two periods:
// integer orders, and loans in steps of 1/p so that loan cash is integral.
// Scenarios sharing period-1 demand share Q2 and g1; everything else is per
// scenario. The search decomposes by period-1 demand once Q1 is fixed, which
// keeps it exact and small.
struct GridOptimum {
  double value = -std::numeric_limits<double>::infinity();
  double first_order = 0.0;
};

namespace detail {

inline bool loan_feasible(const InstanceConfig& c, const LedgerResult& r, const PeriodGrid& d, const PeriodGrid& q,
                          const PeriodGrid& g) {
  double used = 0.0;
  for (int t = 1; t <= c.horizon; ++t) {
    const double before = r.inventory[static_cast<std::size_t>(t - 1)][0] + q(0, t);
    const double sold = std::min(before, d(0, t));
    if (g(0, t) > sold + 1e-12) return false;
    used += c.price[0] * g(0, t);
  }
  return used <= c.loan_limit + 1e-9;
}

inline bool cash_feasible(const InstanceConfig& c, const LedgerResult& r, const PeriodGrid& q) {
  for (int t = 1; t <= c.horizon; ++t) {
    if (c.unit_cost[0] * q(0, t) > r.cash[static_cast<std::size_t>(t - 1)] + 1e-9) return false;
  }
  return true;
}

}  // namespace detail

inline GridOptimum grid_optimum(const InstanceConfig& c, const ScenarioFan& fan, bool loans) {
  const int T = c.horizon;
  double max_total = 0.0;
  for (const auto& s : fan.scenarios) {
    double total = 0.0;
    for (int t = 1; t <= T; ++t) total += s(0, t);
    max_total = std::max(max_total, total);
  }
  const int q_max = static_cast<int>(max_total);
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t s = 0; s < fan.size(); ++s) groups[fan.scenarios[s](0, 1)].push_back(s);

  GridOptimum best;
  for (int q1 = 0; q1 <= q_max; ++q1) {
    if (c.unit_cost[0] * q1 > c.initial_cash + 1e-9) break;
    double total = 0.0;
    bool any = true;
    for (const auto& [d1, members] : groups) {
      const double step = 1.0 / c.price[0];
      const int g1_max = loans ? static_cast<int>(std::lround(std::min<double>(d1, c.initial_inventory[0] + q1) * c.price[0])) : 0;
      const int q2_max = T >= 2 ? q_max : 0;
      double group_best = -std::numeric_limits<double>::infinity();
      for (int g1 = 0; g1 <= g1_max; ++g1) {
        for (int q2 = 0; q2 <= q2_max; ++q2) {
          double value = 0.0;
          bool ok = true;
          for (std::size_t s : members) {
            const auto& d = fan.scenarios[s];
            double scen_best = -std::numeric_limits<double>::infinity();
            const int g2_max = loans && T >= 2 ? static_cast<int>(std::lround(d(0, 2) * c.price[0])) : 0;
            for (int g2 = 0; g2 <= g2_max; ++g2) {
              PeriodGrid q(1, T), g(1, T);
              q(0, 1) = q1;
              g(0, 1) = g1 * step;
              if (T >= 2) {
                q(0, 2) = q2;
                g(0, 2) = g2 * step;
              }
              const auto r = ledger(c, d, q, &g);
              if (!detail::cash_feasible(c, r, q) || !detail::loan_feasible(c, r, d, q, g)) continue;
              scen_best = std::max(scen_best, r.final_cash);
            }
            if (!std::isfinite(scen_best)) {
              ok = false;
              break;
            }
            value += fan.probabilities[s] * scen_best;
          }
          if (ok) group_best = std::max(group_best, value);
        }
      }
      if (!std::isfinite(group_best)) {
        any = false;
        break;
      }
      total += group_best;
    }
    if (any && total > best.value) {
      best.value = total;
      best.first_order = q1;
    }
  }
  return best;
}

// Random one-product instance whose data keep every optimum on the search
// lattice: unit cost 1, integer prices, cash and overheads, no interest or
// discounting, and a loan limit that is a multiple of the price.
inline InstanceConfig integral_instance(std::mt19937_64& rng, int horizon) {
  auto c = small_instance(1, horizon);
  c.initial_cash = static_cast<double>(3 + rng() % 10);
  c.unit_cost[0] = 1.0;
  c.price[0] = static_cast<double>(2 + rng() % 3);
  for (auto& h : c.overhead) h = static_cast<double>(rng() % 3);
  c.receipt_delay = static_cast<int>(rng() % static_cast<unsigned>(horizon + 1));
  c.loan_limit = c.price[0] * static_cast<double>(rng() % 5);
  return c;
}

inline ScenarioFan integral_fan(std::mt19937_64& rng, int horizon, std::size_t scenarios) {
  ScenarioFan fan;
  std::vector<double> weight;
  for (std::size_t s = 0; s < scenarios; ++s) {
    PeriodGrid d(1, horizon);
    for (int t = 1; t <= horizon; ++t) d(0, t) = static_cast<double>(rng() % 7);
    fan.scenarios.push_back(d);
    weight.push_back(static_cast<double>(1 + rng() % 4));
  }
  double total = 0.0;
  for (double w : weight) total += w;
  for (double w : weight) fan.probabilities.push_back(w / total);
  return fan;
}

}  // namespace ccplan::testing
