#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ccplan/core.hpp"
#include "ccplan/scenario.hpp"

namespace ccplan::testing {

// Small instance with round numbers; callers adjust fields.
inline InstanceConfig small_instance(int products, int horizon) {
  InstanceConfig c;
  c.n_products = products;
  c.horizon = horizon;
  c.initial_cash = 100.0;
  c.initial_inventory.assign(static_cast<std::size_t>(products), 0.0);
  c.price.assign(static_cast<std::size_t>(products), 2.0);
  c.unit_cost.assign(static_cast<std::size_t>(products), 1.0);
  c.overhead.assign(static_cast<std::size_t>(horizon), 0.0);
  c.receipt_delay = 0;
  c.discount_rate = 0.0;
  c.loan_rate = 0.0;
  c.loan_limit = 0.0;
  c.demand_pattern.assign(static_cast<std::size_t>(horizon), Regime::Normal);
  c.regime_params.assign(static_cast<std::size_t>(products), {LognormalParams{2.0, 0.5}, LognormalParams{3.0, 0.3}});
  return c;
}

inline InstanceConfig random_instance(std::mt19937_64& rng, int products, int horizon) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto c = small_instance(products, horizon);
  c.initial_cash = 50.0 + 450.0 * u(rng);
  for (int n = 0; n < products; ++n) {
    const auto i = static_cast<std::size_t>(n);
    c.unit_cost[i] = 1.0 + 4.0 * u(rng);
    c.price[i] = c.unit_cost[i] * (1.1 + 0.9 * u(rng));
    c.initial_inventory[i] = u(rng) < 0.3 ? std::round(10.0 * u(rng)) : 0.0;
  }
  for (auto& h : c.overhead) h = std::round(30.0 * u(rng));
  c.receipt_delay = static_cast<int>(rng() % 3);
  c.discount_rate = 0.02 * u(rng);
  c.loan_rate = 0.03 * u(rng);
  c.loan_limit = std::round(200.0 * u(rng));
  return c;
}

inline PeriodGrid grid(const std::vector<std::vector<double>>& rows) {
  PeriodGrid g(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows.front().size()));
  for (std::size_t n = 0; n < rows.size(); ++n) {
    for (std::size_t t = 0; t < rows[n].size(); ++t) g(static_cast<int>(n), static_cast<int>(t) + 1) = rows[n][t];
  }
  return g;
}

// Stage-wise tree with `branches` demand outcomes per period drawn at
// random, flattened to a fan. Branch probabilities are random too.
inline ScenarioFan random_tree_fan(std::mt19937_64& rng, int products, int horizon, int branches) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<std::vector<double>>> outcomes(static_cast<std::size_t>(horizon));
  std::vector<std::vector<double>> probs(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    double total = 0.0;
    for (int b = 0; b < branches; ++b) {
      std::vector<double> d;
      for (int n = 0; n < products; ++n) d.push_back(std::round(40.0 * u(rng)));
      outcomes[static_cast<std::size_t>(t)].push_back(d);
      probs[static_cast<std::size_t>(t)].push_back(0.2 + u(rng));
      total += probs[static_cast<std::size_t>(t)].back();
    }
    for (auto& p : probs[static_cast<std::size_t>(t)]) p /= total;
  }
  ScenarioFan fan;
  std::size_t count = 1;
  for (int t = 0; t < horizon; ++t) count *= static_cast<std::size_t>(branches);
  for (std::size_t leaf = 0; leaf < count; ++leaf) {
    PeriodGrid g(products, horizon);
    double pr = 1.0;
    std::size_t rest = leaf;
    for (int t = horizon; t >= 1; --t) {
      const std::size_t b = rest % static_cast<std::size_t>(branches);
      rest /= static_cast<std::size_t>(branches);
      pr *= probs[static_cast<std::size_t>(t - 1)][b];
      for (int n = 0; n < products; ++n) g(n, t) = outcomes[static_cast<std::size_t>(t - 1)][b][static_cast<std::size_t>(n)];
    }
    fan.scenarios.push_back(g);
    fan.probabilities.push_back(pr);
  }
  double total = 0.0;
  for (double p : fan.probabilities) total += p;
  for (double& p : fan.probabilities) p /= total;
  return fan;
}

// Independent period-by-period bookkeeping of the cash flow: a ledger of
// inflows and outflows, used to cross-check simulate and the MILP.
struct LedgerResult {
  std::vector<std::vector<double>> inventory;  // [t][n], t = 0..T
  std::vector<double> cash;                    // t = 0..T
  double final_cash = 0.0;
};

inline LedgerResult ledger(const InstanceConfig& c, const PeriodGrid& d, const PeriodGrid& q, const PeriodGrid* g) {
  const int N = c.n_products;
  const int T = c.horizon;
  const int L = c.receipt_delay;
  const double interest = std::pow(1.0 + c.loan_rate, L);
  LedgerResult r;
  r.inventory.assign(static_cast<std::size_t>(T) + 1, std::vector<double>(static_cast<std::size_t>(N), 0.0));
  r.inventory[0] = c.initial_inventory;
  std::vector<double> inflow(static_cast<std::size_t>(T + L) + 1, 0.0);
  for (int t = 1; t <= T; ++t) {
    for (int n = 0; n < N; ++n) {
      const auto i = static_cast<std::size_t>(n);
      const double before = r.inventory[static_cast<std::size_t>(t - 1)][i] + q(n, t);
      const double sold = std::min(before, d(n, t));
      r.inventory[static_cast<std::size_t>(t)][i] = before - sold;
      const double loan = g ? (*g)(n, t) : 0.0;
      // The lender pays p*g now. L periods later the customer's payment for
      // unfinanced units arrives; financed units are paid back with interest,
      // and under gross settlement their customer payment goes to the lender.
      inflow[static_cast<std::size_t>(t)] += c.price[i] * loan;
      const double unfinanced = c.loan_settlement == LoanSettlement::Gross ? sold - loan : sold;
      inflow[static_cast<std::size_t>(t + L)] += c.price[i] * (unfinanced - interest * loan);
    }
  }
  r.cash.push_back(c.initial_cash);
  for (int t = 1; t <= T; ++t) {
    double out = c.overhead[static_cast<std::size_t>(t - 1)];
    for (int n = 0; n < N; ++n) out += c.unit_cost[static_cast<std::size_t>(n)] * q(n, t);
    r.cash.push_back(r.cash.back() + inflow[static_cast<std::size_t>(t)] - out);
  }
  r.final_cash = r.cash.back();
  for (int k = 1; k <= L; ++k) r.final_cash += inflow[static_cast<std::size_t>(T + k)] / std::pow(1.0 + c.discount_rate, k);
  return r;
}

}  // namespace ccplan::testing
