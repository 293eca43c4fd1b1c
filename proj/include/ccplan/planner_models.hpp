#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccplan/core.hpp"
#include "ccplan/scenario.hpp"
#include "ccplan/solver_backend.hpp"

namespace ccplan::plan {

// SO = self-owned cash, OL = order-based loans; D = point forecast, S = scenarios.
enum class ModelKind { SoD, OlD, SoS, OlS };

const char* kind_name(ModelKind kind);  // "so-d", "ol-d", "so-s", "ol-s"
ModelKind parse_kind(std::string_view text);
bool is_stochastic(ModelKind kind);
bool uses_loans(ModelKind kind);
ModelKind deterministic_counterpart(ModelKind kind);

// Per-period demand forecast at the log-normal mean of each period's regime.
PeriodGrid mean_forecast(const InstanceConfig& config);

// Linearization constants M[n][t] for the inventory max-recursion.
struct BigMPlan {
  PeriodGrid m;  // N x T
};

// M[n][t] = I_{n,0} + sum_{tau<=t} dmax_{n,tau} + (C_0 + sum_{tau<=t} sum_m p_m dmax_{m,tau}) / v_n
// where dmax is the largest demand any scenario takes. Throws if some v_n = 0.
BigMPlan compute_big_m(const InstanceConfig& config, const ScenarioFan& demands);

// Information structure of a fan: one node per distinct demand history.
// Depth-k nodes carry period-k demand; roots have depth 0.
struct TreeNode {
  int parent = -1;
  int depth = 0;
  std::vector<double> demand;  // [n], empty at depth 0
  double probability = 0.0;    // total probability of scenarios through the node
  std::vector<int> scenarios;  // fan indices passing through the node
};

class DecisionTree {
 public:
  // Scenarios with identical demand prefixes share nodes (exact equality).
  static DecisionTree shared(const ScenarioFan& fan);
  // One independent chain of nodes per scenario; no sharing at all.
  static DecisionTree chains(const ScenarioFan& fan);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  int leaf_of(std::size_t scenario) const { return leaf_of_.at(scenario); }
  std::size_t scenario_count() const { return leaf_of_.size(); }
  int horizon() const { return horizon_; }
  std::vector<int> leaves() const;

  // Node ids on the path from the root (index 0) to `node` (index depth).
  std::vector<int> path(int node) const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<int> leaf_of_;
  int horizon_ = 0;
};

enum class NonanticipativityForm {
  // One variable per tree node; scenarios sharing a history share it.
  NodeVariables,
  // Per-scenario variables tied by probability-weighted averaging rows over
  // each history class.
  ExplicitConstraints,
};

struct BuildOptions {
  NonanticipativityForm form = NonanticipativityForm::NodeVariables;
  double big_m_scale = 1.0;
  // Fixes the period-1 orders (one per product) when set.
  std::optional<std::vector<double>> fixed_first_orders;
};

// Variable handles of one node. Orders are for period depth+1 and exist
// while depth < T; inventory, indicator, loans and cash exist for depth >= 1.
struct NodeVars {
  std::vector<lp::VarId> orders;
  std::vector<lp::VarId> inventory;
  std::vector<lp::VarId> indicator;
  std::vector<lp::VarId> loans;
  std::optional<lp::VarId> cash;
};

class PlanModel {
 public:
  ModelKind kind() const { return kind_; }
  const InstanceConfig& config() const { return config_; }
  const ScenarioFan& fan() const { return fan_; }
  const DecisionTree& tree() const { return tree_; }
  const BigMPlan& big_m() const { return big_m_; }
  const lp::LinearModel& model() const { return model_; }
  const NodeVars& vars(int node) const { return vars_.at(static_cast<std::size_t>(node)); }

  // Expression for final cash C_T + discounted tail receipts at a leaf.
  const lp::LinearExpr& final_cash_expr(int leaf) const;

  void fix_first_period_orders(std::span<const double> orders);

 private:
  friend PlanModel build_model(ModelKind, const InstanceConfig&, const ScenarioFan&, const BuildOptions&);
  friend class ModelBuilder;

  ModelKind kind_ = ModelKind::SoD;
  InstanceConfig config_;
  ScenarioFan fan_;
  DecisionTree tree_;
  BigMPlan big_m_;
  lp::LinearModel model_;
  std::vector<NodeVars> vars_;
  std::vector<std::pair<int, lp::LinearExpr>> final_cash_;
};

// Deterministic kinds require a single-scenario fan; stochastic kinds accept
// any fan whose probabilities sum to 1.
PlanModel build_model(ModelKind kind, const InstanceConfig& config, const ScenarioFan& demands,
                      const BuildOptions& options = {});

PlanModel build_so_d(const InstanceConfig& config, const PeriodGrid& forecast, const BuildOptions& options = {});
PlanModel build_ol_d(const InstanceConfig& config, const PeriodGrid& forecast, const BuildOptions& options = {});
PlanModel build_so_s(const InstanceConfig& config, const ScenarioFan& fan, const BuildOptions& options = {});
PlanModel build_ol_s(const InstanceConfig& config, const ScenarioFan& fan, const BuildOptions& options = {});

struct NodeDecision {
  int parent = -1;
  int depth = 0;
  double probability = 0.0;
  std::vector<double> orders;     // Q for period depth+1
  std::vector<double> inventory;  // I at end of period depth
  std::vector<double> indicator;  // delta
  std::vector<double> loans;      // g
  double cash = 0.0;
};

struct PlanSolution {
  ModelKind kind = ModelKind::SoD;
  lp::SolveStatus status = lp::SolveStatus::Error;
  std::string message;
  double objective = 0.0;
  double relative_gap = 0.0;
  double wall_seconds = 0.0;

  std::vector<double> probabilities;      // per fan scenario
  std::vector<Trajectory> trajectories;   // per fan scenario, replayed through simulate
  std::vector<NodeDecision> nodes;
  std::vector<int> scenario_leaf;

  double max_replay_error = 0.0;          // worst |model - simulate| over I, C and FC
  double objective_reconstruction_error = 0.0;  // relative

  bool optimal() const { return status == lp::SolveStatus::Optimal; }
  std::vector<double> first_period_orders() const;
  double expected_final_cash() const;
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlanSolveOptions {
  lp::SolverOptions solver;
  // Entries may differ from simulate by replay_tolerance * (1 + |value| * 1e-3).
  double replay_tolerance = 1e-6;
};

// Solves, replays every scenario through simulate and checks agreement.
// Throws PlanError when the solver reports infeasibility or an error, or
// when the replay check fails.
PlanSolution solve(const PlanModel& model, const PlanSolveOptions& options, const lp::MilpSolver& solver);
PlanSolution solve(const PlanModel& model, const PlanSolveOptions& options = {});

nlohmann::json solution_to_json(const PlanSolution& solution);

// probability,final_cash,loan_used (sum of p_n g_{n,t})
void write_solution_summary_csv(std::ostream& os, const PlanSolution& solution, const InstanceConfig& config);

}  // namespace ccplan::plan
