#include "ccplan/planner_models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include "ccplan/config_io.hpp"
#include "ccplan/scenario_gen.hpp"
#include "ccplan/text_io.hpp"

namespace ccplan::plan {

const char* kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::SoD: return "so-d";
    case ModelKind::OlD: return "ol-d";
    case ModelKind::SoS: return "so-s";
    case ModelKind::OlS: return "ol-s";
  }
  return "unknown";
}

ModelKind parse_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  for (ModelKind k : {ModelKind::SoD, ModelKind::OlD, ModelKind::SoS, ModelKind::OlS}) {
    if (lower == kind_name(k)) return k;
  }
  throw std::invalid_argument("unknown model kind '" + std::string(text) + "' (expected so-d, ol-d, so-s or ol-s)");
}

bool is_stochastic(ModelKind kind) { return kind == ModelKind::SoS || kind == ModelKind::OlS; }
bool uses_loans(ModelKind kind) { return kind == ModelKind::OlD || kind == ModelKind::OlS; }

ModelKind deterministic_counterpart(ModelKind kind) {
  return uses_loans(kind) ? ModelKind::OlD : ModelKind::SoD;
}

PeriodGrid mean_forecast(const InstanceConfig& config) {
  require_valid(config);
  PeriodGrid out(config.n_products, config.horizon);
  for (int n = 0; n < config.n_products; ++n) {
    for (int t = 1; t <= config.horizon; ++t) {
      const auto& p = config.params(n, config.regime_at(t));
      out(n, t) = gen::lognormal_moments(p.mu, p.sigma).mean;
    }
  }
  return out;
}

BigMPlan compute_big_m(const InstanceConfig& config, const ScenarioFan& demands) {
  const int N = config.n_products;
  const int T = config.horizon;
  for (int n = 0; n < N; ++n) {
    if (config.unit_cost[static_cast<std::size_t>(n)] <= 0.0) {
      throw std::invalid_argument("big-M needs a positive unit cost for product " + std::to_string(n));
    }
  }
  PeriodGrid dmax(N, T);
  for (const auto& s : demands.scenarios) {
    for (int n = 0; n < N; ++n) {
      for (int t = 1; t <= T; ++t) dmax(n, t) = std::max(dmax(n, t), s(n, t));
    }
  }
  BigMPlan plan{PeriodGrid(N, T)};
  std::vector<double> demand_sum(static_cast<std::size_t>(N), 0.0);
  double value_sum = 0.0;
  for (int t = 1; t <= T; ++t) {
    for (int n = 0; n < N; ++n) {
      demand_sum[static_cast<std::size_t>(n)] += dmax(n, t);
      value_sum += config.price[static_cast<std::size_t>(n)] * dmax(n, t);
    }
    for (int n = 0; n < N; ++n) {
      const auto i = static_cast<std::size_t>(n);
      plan.m(n, t) = config.initial_inventory[i] + demand_sum[i] + (config.initial_cash + value_sum) / config.unit_cost[i];
    }
  }
  return plan;
}

DecisionTree DecisionTree::shared(const ScenarioFan& fan) {
  DecisionTree tree;
  tree.horizon_ = fan.horizon();
  const int N = fan.products();
  tree.nodes_.push_back(TreeNode{});
  // children keyed by demand vector; exact comparison is intended.
  std::vector<std::map<std::vector<double>, int>> children(1);
  for (std::size_t s = 0; s < fan.size(); ++s) {
    const double pr = fan.probabilities[s];
    int cur = 0;
    tree.nodes_[0].probability += pr;
    tree.nodes_[0].scenarios.push_back(static_cast<int>(s));
    for (int t = 1; t <= tree.horizon_; ++t) {
      std::vector<double> d(static_cast<std::size_t>(N));
      for (int n = 0; n < N; ++n) d[static_cast<std::size_t>(n)] = fan.scenarios[s](n, t);
      auto& kids = children[static_cast<std::size_t>(cur)];
      auto it = kids.find(d);
      int next;
      if (it == kids.end()) {
        next = static_cast<int>(tree.nodes_.size());
        kids.emplace(d, next);
        tree.nodes_.push_back(TreeNode{cur, t, std::move(d), 0.0, {}});
        children.emplace_back();
      } else {
        next = it->second;
      }
      tree.nodes_[static_cast<std::size_t>(next)].probability += pr;
      tree.nodes_[static_cast<std::size_t>(next)].scenarios.push_back(static_cast<int>(s));
      cur = next;
    }
    tree.leaf_of_.push_back(cur);
  }
  return tree;
}

DecisionTree DecisionTree::chains(const ScenarioFan& fan) {
  DecisionTree tree;
  tree.horizon_ = fan.horizon();
  const int N = fan.products();
  for (std::size_t s = 0; s < fan.size(); ++s) {
    const double pr = fan.probabilities[s];
    const std::vector<int> who{static_cast<int>(s)};
    int cur = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back(TreeNode{-1, 0, {}, pr, who});
    for (int t = 1; t <= tree.horizon_; ++t) {
      std::vector<double> d(static_cast<std::size_t>(N));
      for (int n = 0; n < N; ++n) d[static_cast<std::size_t>(n)] = fan.scenarios[s](n, t);
      tree.nodes_.push_back(TreeNode{cur, t, std::move(d), pr, who});
      cur = static_cast<int>(tree.nodes_.size()) - 1;
    }
    tree.leaf_of_.push_back(cur);
  }
  return tree;
}

std::vector<int> DecisionTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].depth == horizon_) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> DecisionTree::path(int node) const {
  std::vector<int> out(static_cast<std::size_t>(this->node(node).depth) + 1);
  for (int cur = node; cur >= 0; cur = this->node(cur).parent) {
    out[static_cast<std::size_t>(this->node(cur).depth)] = cur;
  }
  return out;
}

const lp::LinearExpr& PlanModel::final_cash_expr(int leaf) const {
  for (const auto& [id, expr] : final_cash_) {
    if (id == leaf) return expr;
  }
  throw std::out_of_range("node " + std::to_string(leaf) + " is not a leaf");
}

void PlanModel::fix_first_period_orders(std::span<const double> orders) {
  if (orders.size() != static_cast<std::size_t>(config_.n_products)) {
    throw std::invalid_argument("fixed first-period orders need one value per product");
  }
  for (std::size_t i = 0; i < tree_.nodes().size(); ++i) {
    if (tree_.nodes()[i].depth != 0) continue;
    for (std::size_t n = 0; n < orders.size(); ++n) {
      if (!(orders[n] >= 0.0)) throw std::invalid_argument("fixed orders must be non-negative");
      model_.set_bounds(vars_[i].orders[n], orders[n], orders[n]);
    }
  }
}

class ModelBuilder {
 public:
  ModelBuilder(PlanModel& m, double big_m_scale) : m_(m), cfg_(m.config_), scale_(big_m_scale) {}

  void build() {
    const auto& nodes = m_.tree_.nodes();
    m_.vars_.resize(nodes.size());
    for (std::size_t u = 0; u < nodes.size(); ++u) declare(static_cast<int>(u));
    for (std::size_t u = 0; u < nodes.size(); ++u) constrain(static_cast<int>(u));
    lp::LinearExpr objective;
    for (int leaf : m_.tree_.leaves()) {
      auto fc = final_cash(leaf);
      objective.add(fc, m_.tree_.node(leaf).probability);
      m_.final_cash_.emplace_back(leaf, std::move(fc));
      if (loans_) loan_cap(leaf);
    }
    m_.model_.set_objective(objective, lp::ObjectiveSense::Maximize);
  }

  // Per-scenario copies agree with their probability-weighted class average.
  void add_nonanticipativity(const DecisionTree& shared) {
    const auto& chains = m_.tree_;
    const int N = cfg_.n_products;
    const auto& fan = m_.fan_;
    for (std::size_t w = 0; w < shared.nodes().size(); ++w) {
      const auto& cls = shared.nodes()[w];
      if (cls.scenarios.size() < 2) continue;
      const int k = cls.depth;
      auto member_node = [&](int s) { return chains.path(chains.leaf_of(static_cast<std::size_t>(s)))[static_cast<std::size_t>(k)]; };
      auto tie = [&](const std::string& tag, auto pick) {
        for (int n = 0; n < N; ++n) {
          lp::LinearExpr avg;
          for (int s : cls.scenarios) avg.add(pick(member_node(s), n), fan.probabilities[static_cast<std::size_t>(s)]);
          for (int s : cls.scenarios) {
            lp::LinearExpr row = avg;
            row.add(pick(member_node(s), n), -cls.probability);
            m_.model_.add_constraint("na_" + tag + "_n" + std::to_string(n) + "_w" + std::to_string(w) + "_s" +
                                         std::to_string(s),
                                     row, lp::RowSense::Equal, 0.0);
          }
        }
      };
      auto var = [&](int node) -> const NodeVars& { return m_.vars_[static_cast<std::size_t>(node)]; };
      if (k < m_.tree_.horizon()) tie("Q", [&](int u, int n) { return var(u).orders[static_cast<std::size_t>(n)]; });
      if (k >= 1) {
        tie("I", [&](int u, int n) { return var(u).inventory[static_cast<std::size_t>(n)]; });
        tie("D", [&](int u, int n) { return var(u).indicator[static_cast<std::size_t>(n)]; });
        if (loans_) tie("G", [&](int u, int n) { return var(u).loans[static_cast<std::size_t>(n)]; });
      }
    }
  }

 private:
  const TreeNode& node(int u) const { return m_.tree_.node(u); }
  NodeVars& vars(int u) { return m_.vars_[static_cast<std::size_t>(u)]; }
  static std::string tag(int n, int u) { return "_n" + std::to_string(n) + "_k" + std::to_string(u); }

  void declare(int u) {
    const int depth = node(u).depth;
    auto& v = vars(u);
    auto& model = m_.model_;
    for (int n = 0; n < cfg_.n_products; ++n) {
      if (depth < cfg_.horizon) v.orders.push_back(model.add_variable("Q" + tag(n, u), 0.0, lp::kInfinity));
      if (depth >= 1) {
        v.inventory.push_back(model.add_variable("I" + tag(n, u), 0.0, lp::kInfinity));
        v.indicator.push_back(model.add_binary("delta" + tag(n, u)));
        if (loans_) v.loans.push_back(model.add_variable("g" + tag(n, u), 0.0, lp::kInfinity));
      }
    }
    if (depth >= 1) v.cash = model.add_variable("C_k" + std::to_string(u), -lp::kInfinity, lp::kInfinity);
  }

  lp::LinearExpr inventory(int u, int n) {
    if (node(u).depth == 0) return lp::LinearExpr(cfg_.initial_inventory[static_cast<std::size_t>(n)]);
    return lp::LinearExpr(vars(u).inventory[static_cast<std::size_t>(n)]);
  }

  lp::LinearExpr cash(int u) {
    if (node(u).depth == 0) return lp::LinearExpr(cfg_.initial_cash);
    return lp::LinearExpr(*vars(u).cash);
  }

  lp::LinearExpr loan(int u, int n) {
    if (!loans_ || node(u).depth == 0) return {};
    return lp::LinearExpr(vars(u).loans[static_cast<std::size_t>(n)]);
  }

  // Units sold in the period ending at node u: I_{t-1} + Q_t - I_t.
  lp::LinearExpr sales(int u, int n) {
    const int a = node(u).parent;
    lp::LinearExpr e = inventory(a, n);
    e += vars(a).orders[static_cast<std::size_t>(n)];
    e -= inventory(u, n);
    return e;
  }

  // Receipts of period t along the path `path` (path[k] = node at depth k).
  lp::LinearExpr revenue(const std::vector<int>& path, int n, int t) {
    const int T = cfg_.horizon;
    const int L = cfg_.receipt_delay;
    const double p = cfg_.price[static_cast<std::size_t>(n)];
    lp::LinearExpr e;
    if (t <= T) e.add(loan(path[static_cast<std::size_t>(t)], n), p);
    const int s = t - L;
    if (s >= 1 && s <= T) {
      const int src = path[static_cast<std::size_t>(s)];
      e.add(sales(src, n), p);
      e.add(loan(src, n), -p * cfg_.loan_deduction_factor());
    }
    return e;
  }

  void constrain(int u) {
    const auto& nd = node(u);
    const int t = nd.depth;
    const std::string id = "_k" + std::to_string(u);
    auto& model = m_.model_;
    if (t < cfg_.horizon) {
      lp::LinearExpr spend;
      for (int n = 0; n < cfg_.n_products; ++n) {
        spend.add(vars(u).orders[static_cast<std::size_t>(n)], cfg_.unit_cost[static_cast<std::size_t>(n)]);
      }
      model.add_constraint("cash" + id, spend - cash(u), lp::RowSense::LessEqual, 0.0);
    }
    if (t == 0) return;
    const int a = nd.parent;
    const auto path = m_.tree_.path(u);
    lp::LinearExpr balance = cash(u) - cash(a);
    for (int n = 0; n < cfg_.n_products; ++n) {
      const auto ni = static_cast<std::size_t>(n);
      const double M = scale_ * m_.big_m_.m(n, t);
      const double d = nd.demand[ni];
      const lp::LinearExpr avail = inventory(a, n) + lp::LinearExpr(vars(a).orders[ni]);
      const lp::VarId I = vars(u).inventory[ni];
      const lp::VarId delta = vars(u).indicator[ni];
      const std::string pn = "_n" + std::to_string(n) + id;
      // I = max(avail - d, 0) via the indicator delta = 1{avail > d}.
      model.add_constraint("inv_lo" + pn, lp::LinearExpr(I) - avail, lp::RowSense::GreaterEqual, -d);
      model.add_constraint("inv_hi" + pn, lp::LinearExpr(I) - avail + M * lp::LinearExpr(delta), lp::RowSense::LessEqual,
                           M - d);
      model.add_constraint("inv_cap" + pn, lp::LinearExpr(I) - M * lp::LinearExpr(delta), lp::RowSense::LessEqual, 0.0);
      model.add_constraint("ind_hi" + pn, avail - M * lp::LinearExpr(delta), lp::RowSense::LessEqual, d);
      model.add_constraint("ind_lo" + pn, avail + M * lp::LinearExpr(1.0 - lp::LinearExpr(delta)), lp::RowSense::GreaterEqual,
                           d);
      if (loans_) model.add_constraint("loan_sales" + pn, loan(u, n) - sales(u, n), lp::RowSense::LessEqual, 0.0);
      balance -= revenue(path, n, t);
      balance.add(vars(a).orders[ni], cfg_.unit_cost[ni]);
    }
    model.add_constraint("balance" + id, balance, lp::RowSense::Equal, -cfg_.overhead_at(t));
  }

  lp::LinearExpr final_cash(int leaf) {
    const auto path = m_.tree_.path(leaf);
    lp::LinearExpr fc = cash(leaf);
    double factor = 1.0;
    for (int k = 1; k <= cfg_.receipt_delay; ++k) {
      factor /= 1.0 + cfg_.discount_rate;
      for (int n = 0; n < cfg_.n_products; ++n) fc.add(revenue(path, n, cfg_.horizon + k), factor);
    }
    return fc;
  }

  void loan_cap(int leaf) {
    lp::LinearExpr used;
    for (int u : m_.tree_.path(leaf)) {
      for (int n = 0; n < cfg_.n_products; ++n) used.add(loan(u, n), cfg_.price[static_cast<std::size_t>(n)]);
    }
    m_.model_.add_constraint("loan_cap_k" + std::to_string(leaf), used, lp::RowSense::LessEqual, cfg_.loan_limit);
  }

  PlanModel& m_;
  const InstanceConfig& cfg_;
  double scale_;
  bool loans_ = uses_loans(m_.kind_);
};

PlanModel build_model(ModelKind kind, const InstanceConfig& config, const ScenarioFan& demands,
                      const BuildOptions& options) {
  require_valid(config);
  demands.check(1e-6);
  if (demands.size() == 0) throw std::invalid_argument("demand fan is empty");
  if (demands.products() != config.n_products || demands.horizon() != config.horizon) {
    throw std::invalid_argument("demand fan shape does not match the instance");
  }
  if (!is_stochastic(kind) && demands.size() != 1) {
    throw std::invalid_argument(std::string(kind_name(kind)) + " takes a single demand forecast");
  }
  if (!(options.big_m_scale >= 1.0)) throw std::invalid_argument("big_m_scale must be at least 1");

  PlanModel m;
  m.kind_ = kind;
  m.config_ = config;
  m.fan_ = demands;
  m.big_m_ = compute_big_m(config, demands);
  const bool explicit_form = options.form == NonanticipativityForm::ExplicitConstraints;
  m.tree_ = explicit_form ? DecisionTree::chains(demands) : DecisionTree::shared(demands);
  ModelBuilder builder(m, options.big_m_scale);
  builder.build();
  if (explicit_form) builder.add_nonanticipativity(DecisionTree::shared(demands));
  if (options.fixed_first_orders) m.fix_first_period_orders(*options.fixed_first_orders);
  return m;
}

PlanModel build_so_d(const InstanceConfig& config, const PeriodGrid& forecast, const BuildOptions& options) {
  return build_model(ModelKind::SoD, config, single_scenario_fan(forecast), options);
}

PlanModel build_ol_d(const InstanceConfig& config, const PeriodGrid& forecast, const BuildOptions& options) {
  return build_model(ModelKind::OlD, config, single_scenario_fan(forecast), options);
}

PlanModel build_so_s(const InstanceConfig& config, const ScenarioFan& fan, const BuildOptions& options) {
  return build_model(ModelKind::SoS, config, fan, options);
}

PlanModel build_ol_s(const InstanceConfig& config, const ScenarioFan& fan, const BuildOptions& options) {
  return build_model(ModelKind::OlS, config, fan, options);
}

std::vector<double> PlanSolution::first_period_orders() const {
  if (nodes.empty()) return {};
  return nodes.front().orders;
}

double PlanSolution::expected_final_cash() const {
  double v = 0.0;
  for (std::size_t s = 0; s < trajectories.size(); ++s) v += probabilities[s] * trajectories[s].final_cash;
  return v;
}

namespace {

// Solver output can carry -1e-12 style noise on non-negative columns.
double clean(double x) { return std::abs(x) < 1e-9 ? 0.0 : x; }

std::vector<double> values_of(const lp::SolveOutcome& out, const std::vector<lp::VarId>& ids) {
  std::vector<double> v;
  v.reserve(ids.size());
  for (auto id : ids) v.push_back(clean(out.value(id)));
  return v;
}

}  // namespace

PlanSolution solve(const PlanModel& model, const PlanSolveOptions& options, const lp::MilpSolver& solver) {
  const auto out = solver.optimize(model.model(), options.solver);
  if (!out.has_solution()) {
    throw PlanError(std::string(kind_name(model.kind())) + " solve ended " + lp::status_name(out.status) +
                    (out.message.empty() ? "" : ": " + out.message));
  }
  const auto& cfg = model.config();
  const auto& tree = model.tree();
  const int N = cfg.n_products;
  const int T = cfg.horizon;
  const bool loans = uses_loans(model.kind());

  PlanSolution sol;
  sol.kind = model.kind();
  sol.status = out.status;
  sol.message = out.message;
  sol.objective = out.objective;
  sol.relative_gap = out.relative_gap;
  sol.wall_seconds = out.wall_seconds;
  sol.probabilities = model.fan().probabilities;

  for (std::size_t u = 0; u < tree.nodes().size(); ++u) {
    const auto& nd = tree.nodes()[u];
    const auto& v = model.vars(static_cast<int>(u));
    NodeDecision d;
    d.parent = nd.parent;
    d.depth = nd.depth;
    d.probability = nd.probability;
    d.orders = values_of(out, v.orders);
    d.inventory = values_of(out, v.inventory);
    d.indicator = values_of(out, v.indicator);
    d.loans = values_of(out, v.loans);
    d.cash = v.cash ? out.value(*v.cash) : cfg.initial_cash;
    sol.nodes.push_back(std::move(d));
  }

  double worst = 0.0;
  auto compare = [&](double model_value, double sim_value) {
    const double err = std::abs(model_value - sim_value);
    worst = std::max(worst, err);
    return err <= options.replay_tolerance * (1.0 + 1e-3 * std::abs(sim_value));
  };
  bool agree = true;
  double reconstructed = 0.0;
  for (std::size_t s = 0; s < model.fan().size(); ++s) {
    const int leaf = tree.leaf_of(s);
    sol.scenario_leaf.push_back(leaf);
    const auto path = tree.path(leaf);
    PeriodGrid q(N, T), g(N, T);
    for (int t = 1; t <= T; ++t) {
      const auto& prev = sol.nodes[static_cast<std::size_t>(path[static_cast<std::size_t>(t - 1)])];
      const auto& cur = sol.nodes[static_cast<std::size_t>(path[static_cast<std::size_t>(t)])];
      for (int n = 0; n < N; ++n) {
        q(n, t) = std::max(prev.orders[static_cast<std::size_t>(n)], 0.0);
        if (loans) g(n, t) = std::max(cur.loans[static_cast<std::size_t>(n)], 0.0);
      }
    }
    auto tr = simulate(cfg, model.fan().scenarios[s], q, g, loans);
    for (int t = 1; t <= T; ++t) {
      const auto& cur = sol.nodes[static_cast<std::size_t>(path[static_cast<std::size_t>(t)])];
      agree = compare(cur.cash, tr.cash[static_cast<std::size_t>(t)]) && agree;
      for (int n = 0; n < N; ++n) agree = compare(cur.inventory[static_cast<std::size_t>(n)], tr.inventory(n, t)) && agree;
    }
    agree = compare(model.final_cash_expr(leaf).evaluate(out.values), tr.final_cash) && agree;
    reconstructed += sol.probabilities[s] * tr.final_cash;
    sol.trajectories.push_back(std::move(tr));
  }
  sol.max_replay_error = worst;
  sol.objective_reconstruction_error = std::abs(reconstructed - out.objective) / std::max(1.0, std::abs(out.objective));
  if (!agree) {
    throw PlanError(std::string(kind_name(model.kind())) + " solution disagrees with simulation (max error " +
                    format_double(worst) + ")");
  }
  return sol;
}

PlanSolution solve(const PlanModel& model, const PlanSolveOptions& options) {
  const auto solver = lp::make_default_solver();
  return solve(model, options, *solver);
}

nlohmann::json solution_to_json(const PlanSolution& solution) {
  nlohmann::json j;
  j["model"] = kind_name(solution.kind);
  j["status"] = lp::status_name(solution.status);
  if (!solution.message.empty()) j["message"] = solution.message;
  j["objective"] = solution.objective;
  j["relative_gap"] = solution.relative_gap;
  j["expected_final_cash"] = solution.expected_final_cash();
  j["max_replay_error"] = solution.max_replay_error;
  j["first_period_orders"] = solution.first_period_orders();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (std::size_t u = 0; u < solution.nodes.size(); ++u) {
    const auto& d = solution.nodes[u];
    nlohmann::json n;
    n["id"] = u;
    n["parent"] = d.parent;
    n["depth"] = d.depth;
    n["probability"] = d.probability;
    if (!d.orders.empty()) n["orders_next"] = d.orders;
    if (d.depth >= 1) {
      n["inventory"] = d.inventory;
      n["indicator"] = d.indicator;
      if (!d.loans.empty()) n["loans"] = d.loans;
      n["cash"] = d.cash;
    }
    nodes.push_back(std::move(n));
  }
  auto& sc = j["scenarios"] = nlohmann::json::array();
  for (std::size_t s = 0; s < solution.trajectories.size(); ++s) {
    nlohmann::json e = trajectory_to_json(solution.trajectories[s]);
    e["probability"] = solution.probabilities[s];
    e["leaf"] = solution.scenario_leaf[s];
    sc.push_back(std::move(e));
  }
  return j;
}

void write_solution_summary_csv(std::ostream& os, const PlanSolution& solution, const InstanceConfig& config) {
  os << "scenario,probability,final_cash,loan_used\n";
  for (std::size_t s = 0; s < solution.trajectories.size(); ++s) {
    const auto& tr = solution.trajectories[s];
    double used = 0.0;
    for (int n = 0; n < config.n_products; ++n) {
      for (int t = 1; t <= config.horizon; ++t) used += config.price[static_cast<std::size_t>(n)] * tr.loans(n, t);
    }
    os << s << ',' << format_double(solution.probabilities[s]) << ',' << format_double(tr.final_cash) << ','
       << format_double(used) << '\n';
  }
}

}  // namespace ccplan::plan
