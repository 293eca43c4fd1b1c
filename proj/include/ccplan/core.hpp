#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccplan {

// Demand regime of a period. Values match the 0/1 flags used in instance files.
enum class Regime : int { Normal = 0, Booming = 1 };

inline constexpr std::size_t kRegimeCount = 2;

const char* regime_name(Regime r);
Regime regime_from_index(int flag);

struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

// Product x period table. Column t holds period t; column 0 is the initial
// state (I_{n,0}) and is left at zero for flows such as orders or demand.
class PeriodGrid {
 public:
  PeriodGrid() = default;
  PeriodGrid(int products, int last_period, double fill = 0.0)
      : products_(products),
        last_period_(last_period),
        values_(static_cast<std::size_t>(products) * (last_period + 1), fill) {
    if (products < 0 || last_period < 0) throw std::invalid_argument("PeriodGrid: negative extent");
  }

  int products() const { return products_; }
  int last_period() const { return last_period_; }

  double& operator()(int n, int t) { return values_[index(n, t)]; }
  double operator()(int n, int t) const { return values_[index(n, t)]; }

  std::span<const double> raw() const { return values_; }

  bool same_shape(const PeriodGrid& other) const {
    return products_ == other.products_ && last_period_ == other.last_period_;
  }

  friend bool operator==(const PeriodGrid&, const PeriodGrid&) = default;

 private:
  std::size_t index(int n, int t) const {
    return static_cast<std::size_t>(n) * (last_period_ + 1) + static_cast<std::size_t>(t);
  }

  int products_ = 0;
  int last_period_ = 0;
  std::vector<double> values_;
};

// How an order-based loan is settled once the customer's payment is due.
// Gross: the customer's payment for financed units is kept by the lender
// and the retailer still repays principal plus interest, so each financed
// unit is deducted (1 + (1+r_o)^L) times from the delayed receipts.
// Net: the customer's payment settles the principal and only the interest
// is an extra cost, a deduction of (1+r_o)^L.
enum class LoanSettlement { Gross, Net };

const char* loan_settlement_name(LoanSettlement s);  // "gross" / "net"
LoanSettlement parse_loan_settlement(const std::string& text);

struct InstanceConfig {
  int n_products = 1;
  int horizon = 1;
  double initial_cash = 0.0;
  std::vector<double> initial_inventory;  // [n]
  std::vector<double> price;              // [n]
  std::vector<double> unit_cost;          // [n]
  std::vector<double> overhead;           // [t], t = 1..T stored at t-1
  int receipt_delay = 0;
  double discount_rate = 0.0;
  double loan_rate = 0.0;
  double loan_limit = 0.0;
  LoanSettlement loan_settlement = LoanSettlement::Gross;
  std::vector<Regime> demand_pattern;                               // [t], t-1
  std::vector<std::array<LognormalParams, kRegimeCount>> regime_params;  // [n][regime]

  double overhead_at(int t) const { return overhead[static_cast<std::size_t>(t - 1)]; }
  Regime regime_at(int t) const { return demand_pattern[static_cast<std::size_t>(t - 1)]; }
  const LognormalParams& params(int n, Regime r) const {
    return regime_params[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
  }
  // (1 + r_o)^L, the repayment factor applied to each unit of loan.
  double loan_repayment_factor() const;
  // Units of delayed receipts deducted per financed unit.
  double loan_deduction_factor() const;
};

struct ValidationIssue {
  std::string field;
  std::string rule;
};

// Every violated invariant of the instance, in field order. Empty means valid.
std::vector<ValidationIssue> validate(const InstanceConfig& config);

// Throws ConfigError listing every issue when the instance is invalid.
void require_valid(const InstanceConfig& config);

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

enum class ViolationKind { CashConstraint, LoanCap, LoanExceedsSales };

struct Violation {
  ViolationKind kind;
  int period;     // 0 for horizon-wide checks (loan cap)
  double excess;  // amount by which the constraint is exceeded
};

const char* violation_name(ViolationKind kind);

struct Trajectory {
  PeriodGrid orders;     // Q, periods 1..T
  PeriodGrid loans;      // g, periods 1..T
  PeriodGrid inventory;  // I, periods 0..T
  PeriodGrid sales;      // realized sales, periods 1..T
  PeriodGrid revenue;    // R, periods 1..T+L
  std::vector<double> cash;  // C_t, t = 0..T
  double final_cash = 0.0;
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
};

// Forward recursion of inventory, delayed receipts, cash and discounted final
// cash for a fixed plan. Constraint violations are reported on the trajectory
// rather than thrown. `demands`, `orders` and `loans` are N x T grids.
//
// With loans, a unit financed in period t is paid out at t and settled at
// t+L: the customer's payment covers the principal and the retailer pays the
// interest p * ((1+r_o)^L - 1).
Trajectory simulate(const InstanceConfig& config, const PeriodGrid& demands, const PeriodGrid& orders,
                    const PeriodGrid& loans, bool loans_enabled);

// Convenience overload without loans.
Trajectory simulate(const InstanceConfig& config, const PeriodGrid& demands, const PeriodGrid& orders);

// Sum of (1+alpha)^-k weighted tail receipts plus C_T, i.e. the final-cash
// functional applied to an already computed revenue table.
double discounted_final_cash(const InstanceConfig& config, double cash_at_horizon, const PeriodGrid& revenue);

}  // namespace ccplan
