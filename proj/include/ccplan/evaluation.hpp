#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccplan/core.hpp"
#include "ccplan/planner_models.hpp"
#include "ccplan/scenario.hpp"
#include "ccplan/scenario_gen.hpp"

namespace ccplan::eval {

// Self-owned cash only, or with order-based loans.
enum class Family { SelfOwned, Loan };

const char* family_name(Family family);  // "so", "ol"
Family parse_family(std::string_view text);
plan::ModelKind deterministic_kind(Family family);
plan::ModelKind stochastic_kind(Family family);

struct EvalOptions {
  plan::PlanSolveOptions solve;
  std::string solver;    // backend name; empty means PLANNER_SOLVER / default
  unsigned workers = 1;  // concurrent independent solves
};

// Scenarios for a study: a stationary tree laid over the instance's demand
// pattern, optionally reduced by fast forward selection.
struct ScenarioSource {
  gen::ScenarioTree tree;
  std::optional<std::size_t> reduce_to;
};

ScenarioFan materialize(const ScenarioSource& source, const std::vector<Regime>& pattern);

struct RepairRecord {
  int period = 0;
  double scale = 1.0;        // theta applied to the period's orders
  double loan_clipped = 0.0;  // sum of p_n * (g_planned - g_used)
};

// Plays a fixed plan forward against one demand path. Orders that would
// overdraw cash are scaled by a common theta_t = C_{t-1} / sum_n v_n Q_{n,t}
// (0 when C_{t-1} <= 0); loans are clipped to realized sales and to the
// remaining loan limit, products in index order.
Trajectory simulate_with_repair(const InstanceConfig& config, const PeriodGrid& demands, const PeriodGrid& orders,
                                const PeriodGrid& loans, bool loans_enabled, std::vector<RepairRecord>* repairs = nullptr);

struct WaitAndSee {
  double pv = 0.0;
  std::vector<double> per_scenario;  // deterministic optimum with perfect foresight
};

WaitAndSee wait_and_see(const InstanceConfig& config, const ScenarioFan& fan, Family family,
                        const EvalOptions& options = {});

struct DeterministicValue {
  double dv = 0.0;
  double deterministic_objective = 0.0;
  PeriodGrid forecast;
  PeriodGrid orders;
  PeriodGrid loans;
  std::vector<double> per_scenario;  // repaired final cash
  std::size_t repaired_scenarios = 0;
};

// Solves the deterministic model at `forecast` (the probability-weighted fan
// mean when absent) and scores its plan on every scenario with repair.
DeterministicValue expected_value_of_deterministic(const InstanceConfig& config, const ScenarioFan& fan, Family family,
                                                   const EvalOptions& options = {},
                                                   const std::optional<PeriodGrid>& forecast = std::nullopt);

struct ValueReport {
  double dv = 0.0;
  double sv = 0.0;
  double pv = 0.0;
  double evpi = 0.0;  // pv - sv
  double vss = 0.0;   // sv - dv
  std::size_t repaired_scenarios = 0;
};

ValueReport value_report(const InstanceConfig& config, const ScenarioFan& fan, Family family,
                         const EvalOptions& options = {});

struct StabilityMatrix {
  // values[a][b]: period-1 orders of the optimum on fan a, fixed, re-solved on fan b.
  std::vector<std::vector<double>> values;
  double max_relative_gap = 0.0;  // (max - min) / max over all entries
  bool stable = false;            // max_relative_gap < 5%
};

StabilityMatrix stability_matrix(const InstanceConfig& config, const std::vector<ScenarioFan>& fans, Family family,
                                 const EvalOptions& options = {});

struct SweepRow {
  std::size_t size = 0;
  double objective = 0.0;
  double reduction_distance = 0.0;
};

// Reduces `fan` to each size by fast forward selection and solves the
// stochastic model. Selections for different sizes are nested.
std::vector<SweepRow> sample_size_sweep(const InstanceConfig& config, const ScenarioFan& fan,
                                        const std::vector<std::size_t>& sizes, Family family,
                                        const EvalOptions& options = {});

enum class Parameter { InitialCash, ReceiptDelay, Overhead, Pattern, LoanLimit };

const char* parameter_name(Parameter p);  // "initial_cash", "receipt_delay", "overhead", "pattern", "loan_limit"
Parameter parse_parameter(std::string_view text);

struct ParameterValue {
  double number = 0.0;          // all parameters except Pattern
  std::vector<Regime> pattern;  // Pattern only
  std::string label() const;
};

// Copy of `config` with the parameter set (overhead applies to every period).
InstanceConfig with_parameter(const InstanceConfig& config, Parameter parameter, const ParameterValue& value);

struct GapRow {
  ParameterValue value;
  double so_objective = 0.0;
  double ol_objective = 0.0;
  double gap_percent = 0.0;  // 100 * (OL - SO) / |SO|
};

std::vector<GapRow> profit_gap_study(const InstanceConfig& config, const ScenarioSource& source, Parameter parameter,
                                     const std::vector<ParameterValue>& values, const EvalOptions& options = {});

struct ValueRow {
  ParameterValue value;
  Family family = Family::SelfOwned;
  ValueReport report;
};

// DV/SV/PV for each parameter value (the comparison behind VSS and EVPI curves).
std::vector<ValueRow> value_study(const InstanceConfig& config, const ScenarioSource& source, Parameter parameter,
                                  const std::vector<ParameterValue>& values, Family family,
                                  const EvalOptions& options = {});

nlohmann::json to_json(const ValueReport& report);
nlohmann::json to_json(const StabilityMatrix& matrix);
nlohmann::json to_json(const std::vector<SweepRow>& rows);
nlohmann::json to_json(const std::vector<GapRow>& rows, Parameter parameter);
nlohmann::json to_json(const std::vector<ValueRow>& rows, Parameter parameter);

void write_csv(std::ostream& os, const StabilityMatrix& matrix);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_csv(std::ostream& os, const std::vector<GapRow>& rows, Parameter parameter);
void write_csv(std::ostream& os, const std::vector<ValueRow>& rows, Parameter parameter);

}  // namespace ccplan::eval
