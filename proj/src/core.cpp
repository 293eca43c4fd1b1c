#include "ccplan/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ccplan {

namespace {

// Slack allowed before a constraint is reported as violated. Solver outputs
// carry feasibility noise of this order.
constexpr double kViolationSlack = 1e-6;

bool non_negative_finite(double x) { return std::isfinite(x) && x >= 0.0; }

std::string summarize(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  os << "invalid instance:";
  for (const auto& issue : issues) os << " [" << issue.field << ": " << issue.rule << "]";
  return os.str();
}

void check_sized(std::vector<ValidationIssue>& out, const std::string& field, std::size_t got, int want,
                 const char* what) {
  if (got != static_cast<std::size_t>(std::max(want, 0))) {
    std::ostringstream os;
    os << "must have exactly " << want << " entries (one per " << what << "), got " << got;
    out.push_back({field, os.str()});
  }
}

void check_entries(std::vector<ValidationIssue>& out, const std::string& field, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!non_negative_finite(v[i])) {
      out.push_back({field + "[" + std::to_string(i) + "]", "must be finite and >= 0"});
    }
  }
}

}  // namespace

const char* regime_name(Regime r) { return r == Regime::Normal ? "normal" : "booming"; }

Regime regime_from_index(int flag) {
  if (flag == 0) return Regime::Normal;
  if (flag == 1) return Regime::Booming;
  throw std::invalid_argument("regime flag must be 0 (normal) or 1 (booming), got " + std::to_string(flag));
}

double InstanceConfig::loan_repayment_factor() const { return std::pow(1.0 + loan_rate, receipt_delay); }

double InstanceConfig::loan_deduction_factor() const {
  return loan_repayment_factor() + (loan_settlement == LoanSettlement::Gross ? 1.0 : 0.0);
}

const char* loan_settlement_name(LoanSettlement s) { return s == LoanSettlement::Gross ? "gross" : "net"; }

LoanSettlement parse_loan_settlement(const std::string& text) {
  if (text == "gross") return LoanSettlement::Gross;
  if (text == "net") return LoanSettlement::Net;
  throw std::invalid_argument("loan_settlement must be \"gross\" or \"net\", got \"" + text + "\"");
}

ConfigError::ConfigError(std::vector<ValidationIssue> issues)
    : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

std::vector<ValidationIssue> validate(const InstanceConfig& c) {
  std::vector<ValidationIssue> out;
  if (c.n_products < 1) out.push_back({"n_products", "must be >= 1"});
  if (c.horizon < 1) out.push_back({"horizon", "must be >= 1"});
  if (c.receipt_delay < 0 || c.receipt_delay > c.horizon) {
    out.push_back({"receipt_delay", "must satisfy 0 <= L <= horizon"});
  }
  if (!non_negative_finite(c.initial_cash)) out.push_back({"initial_cash", "must be finite and >= 0"});
  if (!non_negative_finite(c.discount_rate)) out.push_back({"discount_rate", "must be finite and >= 0"});
  if (!non_negative_finite(c.loan_rate)) out.push_back({"loan_rate", "must be finite and >= 0"});
  if (!non_negative_finite(c.loan_limit)) out.push_back({"loan_limit", "must be finite and >= 0"});

  check_sized(out, "initial_inventory", c.initial_inventory.size(), c.n_products, "product");
  check_entries(out, "initial_inventory", c.initial_inventory);
  check_sized(out, "price", c.price.size(), c.n_products, "product");
  check_entries(out, "price", c.price);
  check_sized(out, "unit_cost", c.unit_cost.size(), c.n_products, "product");
  check_entries(out, "unit_cost", c.unit_cost);
  check_sized(out, "overhead", c.overhead.size(), c.horizon, "period");
  check_entries(out, "overhead", c.overhead);
  check_sized(out, "demand_pattern", c.demand_pattern.size(), c.horizon, "period");

  check_sized(out, "regime_params", c.regime_params.size(), c.n_products, "product");
  for (std::size_t n = 0; n < c.regime_params.size(); ++n) {
    for (std::size_t r = 0; r < kRegimeCount; ++r) {
      const auto& p = c.regime_params[n][r];
      const std::string field = "regime_params[" + std::to_string(n) + "][" + std::to_string(r) + "]";
      if (!std::isfinite(p.mu)) out.push_back({field + ".mu", "must be finite"});
      if (!(std::isfinite(p.sigma) && p.sigma > 0.0)) out.push_back({field + ".sigma", "must be > 0"});
    }
  }
  return out;
}

void require_valid(const InstanceConfig& config) {
  auto issues = validate(config);
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

const char* violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::CashConstraint: return "cash_constraint";
    case ViolationKind::LoanCap: return "loan_cap";
    case ViolationKind::LoanExceedsSales: return "loan_exceeds_sales";
  }
  return "unknown";
}

double discounted_final_cash(const InstanceConfig& config, double cash_at_horizon, const PeriodGrid& revenue) {
  const int T = config.horizon;
  const int L = config.receipt_delay;
  double fc = cash_at_horizon;
  for (int k = 1; k <= L; ++k) {
    const double factor = std::pow(1.0 + config.discount_rate, -k);
    for (int n = 0; n < config.n_products; ++n) fc += factor * revenue(n, T + k);
  }
  return fc;
}

Trajectory simulate(const InstanceConfig& config, const PeriodGrid& demands, const PeriodGrid& orders,
                    const PeriodGrid& loans, bool loans_enabled) {
  require_valid(config);
  const int N = config.n_products;
  const int T = config.horizon;
  const int L = config.receipt_delay;
  for (const PeriodGrid* g : {&demands, &orders, &loans}) {
    if (g->products() != N || g->last_period() != T) {
      throw std::invalid_argument("simulate: plan and demand grids must be N x T");
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int t = 1; t <= T; ++t) {
      if (!(demands(n, t) >= 0.0 && orders(n, t) >= 0.0 && loans(n, t) >= 0.0)) {
        throw std::invalid_argument("simulate: demands, orders and loans must be non-negative");
      }
      if (!loans_enabled && loans(n, t) != 0.0) {
        throw std::invalid_argument("simulate: loans must be zero when loans are disabled");
      }
    }
  }

  Trajectory tr;
  tr.orders = orders;
  tr.loans = loans;
  tr.inventory = PeriodGrid(N, T);
  tr.sales = PeriodGrid(N, T);
  tr.revenue = PeriodGrid(N, T + L);
  tr.cash.assign(static_cast<std::size_t>(T) + 1, 0.0);

  for (int n = 0; n < N; ++n) {
    tr.inventory(n, 0) = config.initial_inventory[static_cast<std::size_t>(n)];
    for (int t = 1; t <= T; ++t) {
      const double on_hand = tr.inventory(n, t - 1) + orders(n, t);
      tr.inventory(n, t) = std::max(on_hand - demands(n, t), 0.0);
      tr.sales(n, t) = on_hand - tr.inventory(n, t);
    }
  }

  const double repay = config.loan_deduction_factor();
  for (int n = 0; n < N; ++n) {
    const double p = config.price[static_cast<std::size_t>(n)];
    for (int t = 1; t <= T + L; ++t) {
      double r = 0.0;
      if (t <= T) r += loans(n, t);
      if (t > L) r += tr.sales(n, t - L) - repay * loans(n, t - L);
      tr.revenue(n, t) = p * r;
    }
  }

  tr.cash[0] = config.initial_cash;
  for (int t = 1; t <= T; ++t) {
    double spend = 0.0;
    double income = 0.0;
    for (int n = 0; n < N; ++n) {
      spend += config.unit_cost[static_cast<std::size_t>(n)] * orders(n, t);
      income += tr.revenue(n, t);
    }
    const double available = tr.cash[static_cast<std::size_t>(t - 1)];
    if (spend > available + kViolationSlack) {
      tr.violations.push_back({ViolationKind::CashConstraint, t, spend - available});
    }
    tr.cash[static_cast<std::size_t>(t)] = available + income - spend - config.overhead_at(t);
  }
  tr.final_cash = discounted_final_cash(config, tr.cash[static_cast<std::size_t>(T)], tr.revenue);

  if (loans_enabled) {
    double financed = 0.0;
    for (int n = 0; n < N; ++n) {
      for (int t = 1; t <= T; ++t) {
        financed += config.price[static_cast<std::size_t>(n)] * loans(n, t);
        const double excess = loans(n, t) - tr.sales(n, t);
        if (excess > kViolationSlack) tr.violations.push_back({ViolationKind::LoanExceedsSales, t, excess});
      }
    }
    if (financed > config.loan_limit + kViolationSlack) {
      tr.violations.push_back({ViolationKind::LoanCap, 0, financed - config.loan_limit});
    }
  }
  return tr;
}

Trajectory simulate(const InstanceConfig& config, const PeriodGrid& demands, const PeriodGrid& orders) {
  return simulate(config, demands, orders, PeriodGrid(config.n_products, config.horizon), false);
}

}  // namespace ccplan
