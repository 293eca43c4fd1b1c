#include "ccplan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "ccplan/parallel.hpp"
#include "ccplan/scenario_reduce.hpp"
#include "ccplan/text_io.hpp"

namespace ccplan::eval {

const char* family_name(Family family) { return family == Family::Loan ? "ol" : "so"; }

Family parse_family(std::string_view text) {
  if (text == "so") return Family::SelfOwned;
  if (text == "ol") return Family::Loan;
  throw std::invalid_argument("unknown model family '" + std::string(text) + "' (expected so or ol)");
}

plan::ModelKind deterministic_kind(Family family) {
  return family == Family::Loan ? plan::ModelKind::OlD : plan::ModelKind::SoD;
}

plan::ModelKind stochastic_kind(Family family) {
  return family == Family::Loan ? plan::ModelKind::OlS : plan::ModelKind::SoS;
}

namespace {

std::unique_ptr<lp::MilpSolver> solver_for(const EvalOptions& options) {
  return options.solver.empty() ? lp::make_default_solver() : lp::make_solver(options.solver);
}

plan::PlanSolution solve_kind(plan::ModelKind kind, const InstanceConfig& config, const ScenarioFan& fan,
                              const EvalOptions& options, const plan::BuildOptions& build = {}) {
  const auto model = plan::build_model(kind, config, fan, build);
  const auto solver = solver_for(options);
  return plan::solve(model, options.solve, *solver);
}

double relative_spread(const std::vector<std::vector<double>>& values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : values) {
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) return 0.0;
  return (hi - lo) / std::max(std::abs(hi), std::abs(lo));
}

}  // namespace

ScenarioFan materialize(const ScenarioSource& source, const std::vector<Regime>& pattern) {
  auto fan = gen::with_pattern(source.tree, pattern).to_fan();
  if (!source.reduce_to || *source.reduce_to >= fan.size()) return fan;
  return reduce::apply(fan, reduce::fast_forward_select(fan, *source.reduce_to));
}

Trajectory simulate_with_repair(const InstanceConfig& config, const PeriodGrid& demands, const PeriodGrid& orders,
                                const PeriodGrid& loans, bool loans_enabled, std::vector<RepairRecord>* repairs) {
  require_valid(config);
  const int N = config.n_products;
  const int T = config.horizon;
  if (!orders.same_shape(PeriodGrid(N, T)) || !loans.same_shape(PeriodGrid(N, T))) {
    throw std::invalid_argument("plan grids must be N x T");
  }
  PeriodGrid q(N, T), g(N, T);
  double loan_left = config.loan_limit;
  for (int t = 1; t <= T; ++t) {
    // Cash at t-1 depends only on decisions before t, so a prefix replay gives it.
    const double cash = simulate(config, demands, q, g, loans_enabled).cash[static_cast<std::size_t>(t - 1)];
    double spend = 0.0;
    for (int n = 0; n < N; ++n) spend += config.unit_cost[static_cast<std::size_t>(n)] * orders(n, t);
    double theta = 1.0;
    if (spend > cash) theta = cash > 0.0 ? cash / spend : 0.0;
    for (int n = 0; n < N; ++n) q(n, t) = theta * orders(n, t);
    RepairRecord record{t, theta, 0.0};
    if (loans_enabled) {
      const auto sales = simulate(config, demands, q, g, true).sales;
      for (int n = 0; n < N; ++n) {
        const double p = config.price[static_cast<std::size_t>(n)];
        const double allowed = std::max(0.0, std::min(sales(n, t), p > 0.0 ? loan_left / p : 0.0));
        g(n, t) = std::min(loans(n, t), allowed);
        record.loan_clipped += p * (loans(n, t) - g(n, t));
        loan_left = std::max(0.0, loan_left - p * g(n, t));
      }
    }
    if (repairs && (theta < 1.0 || record.loan_clipped > 0.0)) repairs->push_back(record);
  }
  return simulate(config, demands, q, g, loans_enabled);
}

WaitAndSee wait_and_see(const InstanceConfig& config, const ScenarioFan& fan, Family family,
                        const EvalOptions& options) {
  fan.check(1e-6);
  WaitAndSee out;
  out.per_scenario.resize(fan.size());
  parallel_for(
      fan.size(),
      [&](std::size_t s) {
        out.per_scenario[s] =
            solve_kind(deterministic_kind(family), config, single_scenario_fan(fan.scenarios[s]), options).objective;
      },
      options.workers);
  for (std::size_t s = 0; s < fan.size(); ++s) out.pv += fan.probabilities[s] * out.per_scenario[s];
  return out;
}

DeterministicValue expected_value_of_deterministic(const InstanceConfig& config, const ScenarioFan& fan, Family family,
                                                   const EvalOptions& options,
                                                   const std::optional<PeriodGrid>& forecast) {
  fan.check(1e-6);
  DeterministicValue out;
  out.forecast = forecast ? *forecast : fan.mean();
  const auto det = solve_kind(deterministic_kind(family), config, single_scenario_fan(out.forecast), options);
  out.deterministic_objective = det.objective;
  out.orders = det.trajectories.front().orders;
  out.loans = det.trajectories.front().loans;
  const bool loans = family == Family::Loan;
  for (std::size_t s = 0; s < fan.size(); ++s) {
    std::vector<RepairRecord> repairs;
    const auto tr = simulate_with_repair(config, fan.scenarios[s], out.orders, out.loans, loans, &repairs);
    out.per_scenario.push_back(tr.final_cash);
    out.dv += fan.probabilities[s] * tr.final_cash;
    if (!repairs.empty()) ++out.repaired_scenarios;
  }
  return out;
}

ValueReport value_report(const InstanceConfig& config, const ScenarioFan& fan, Family family,
                         const EvalOptions& options) {
  ValueReport r;
  r.sv = solve_kind(stochastic_kind(family), config, fan, options).objective;
  r.pv = wait_and_see(config, fan, family, options).pv;
  const auto dv = expected_value_of_deterministic(config, fan, family, options);
  r.dv = dv.dv;
  r.repaired_scenarios = dv.repaired_scenarios;
  r.evpi = r.pv - r.sv;
  r.vss = r.sv - r.dv;
  return r;
}

StabilityMatrix stability_matrix(const InstanceConfig& config, const std::vector<ScenarioFan>& fans, Family family,
                                 const EvalOptions& options) {
  if (fans.size() < 2) throw std::invalid_argument("stability needs at least two scenario sets");
  for (const auto& f : fans) {
    if (f.products() != fans.front().products() || f.horizon() != fans.front().horizon()) {
      throw std::invalid_argument("scenario sets differ in product count or horizon");
    }
  }
  const auto kind = stochastic_kind(family);
  const std::size_t K = fans.size();
  StabilityMatrix m;
  m.values.assign(K, std::vector<double>(K, 0.0));
  std::vector<std::vector<double>> first(K);
  parallel_for(
      K,
      [&](std::size_t a) {
        const auto sol = solve_kind(kind, config, fans[a], options);
        m.values[a][a] = sol.objective;
        first[a] = sol.first_period_orders();
      },
      options.workers);
  parallel_for(
      K * K,
      [&](std::size_t cell) {
        const std::size_t a = cell / K;
        const std::size_t b = cell % K;
        if (a == b) return;
        plan::BuildOptions build;
        build.fixed_first_orders = first[a];
        m.values[a][b] = solve_kind(kind, config, fans[b], options, build).objective;
      },
      options.workers);
  m.max_relative_gap = relative_spread(m.values);
  m.stable = m.max_relative_gap < 0.05;
  return m;
}

std::vector<SweepRow> sample_size_sweep(const InstanceConfig& config, const ScenarioFan& fan,
                                        const std::vector<std::size_t>& sizes, Family family,
                                        const EvalOptions& options) {
  for (auto k : sizes) {
    if (k == 0 || k > fan.size()) {
      throw std::invalid_argument("sample size " + std::to_string(k) + " outside 1.." + std::to_string(fan.size()));
    }
  }
  std::vector<SweepRow> rows(sizes.size());
  parallel_for(
      sizes.size(),
      [&](std::size_t i) {
        const auto red = reduce::fast_forward_select(fan, sizes[i]);
        const auto reduced = reduce::apply(fan, red);
        rows[i] = SweepRow{sizes[i], solve_kind(stochastic_kind(family), config, reduced, options).objective,
                           red.total_weighted_distance};
      },
      options.workers);
  return rows;
}

const char* parameter_name(Parameter p) {
  switch (p) {
    case Parameter::InitialCash: return "initial_cash";
    case Parameter::ReceiptDelay: return "receipt_delay";
    case Parameter::Overhead: return "overhead";
    case Parameter::Pattern: return "pattern";
    case Parameter::LoanLimit: return "loan_limit";
  }
  return "unknown";
}

Parameter parse_parameter(std::string_view text) {
  for (auto p : {Parameter::InitialCash, Parameter::ReceiptDelay, Parameter::Overhead, Parameter::Pattern,
                 Parameter::LoanLimit}) {
    if (text == parameter_name(p)) return p;
  }
  throw std::invalid_argument("unknown parameter '" + std::string(text) +
                              "' (expected initial_cash, receipt_delay, overhead, pattern or loan_limit)");
}

std::string ParameterValue::label() const {
  if (pattern.empty()) return format_double(number);
  std::string s;
  for (auto r : pattern) s += std::to_string(static_cast<int>(r));
  return s;
}

InstanceConfig with_parameter(const InstanceConfig& config, Parameter parameter, const ParameterValue& value) {
  InstanceConfig out = config;
  switch (parameter) {
    case Parameter::InitialCash:
      out.initial_cash = value.number;
      break;
    case Parameter::ReceiptDelay:
      if (value.number != std::floor(value.number)) throw std::invalid_argument("receipt delay must be an integer");
      out.receipt_delay = static_cast<int>(value.number);
      break;
    case Parameter::Overhead:
      std::fill(out.overhead.begin(), out.overhead.end(), value.number);
      break;
    case Parameter::Pattern:
      if (static_cast<int>(value.pattern.size()) != config.horizon) {
        throw std::invalid_argument("demand pattern length must equal the horizon");
      }
      out.demand_pattern = value.pattern;
      break;
    case Parameter::LoanLimit:
      out.loan_limit = value.number;
      break;
  }
  require_valid(out);
  return out;
}

std::vector<GapRow> profit_gap_study(const InstanceConfig& config, const ScenarioSource& source, Parameter parameter,
                                     const std::vector<ParameterValue>& values, const EvalOptions& options) {
  std::vector<GapRow> rows(values.size());
  std::vector<InstanceConfig> configs;
  std::vector<ScenarioFan> fans;
  for (const auto& v : values) {
    configs.push_back(with_parameter(config, parameter, v));
    fans.push_back(materialize(source, configs.back().demand_pattern));
  }
  parallel_for(
      values.size() * 2,
      [&](std::size_t job) {
        const std::size_t i = job / 2;
        const Family fam = job % 2 == 0 ? Family::SelfOwned : Family::Loan;
        const double obj = solve_kind(stochastic_kind(fam), configs[i], fans[i], options).objective;
        (fam == Family::SelfOwned ? rows[i].so_objective : rows[i].ol_objective) = obj;
      },
      options.workers);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& r = rows[i];
    r.value = values[i];
    r.gap_percent = r.so_objective == 0.0 ? 0.0 : 100.0 * (r.ol_objective - r.so_objective) / std::abs(r.so_objective);
  }
  return rows;
}

std::vector<ValueRow> value_study(const InstanceConfig& config, const ScenarioSource& source, Parameter parameter,
                                  const std::vector<ParameterValue>& values, Family family,
                                  const EvalOptions& options) {
  std::vector<ValueRow> rows;
  for (const auto& v : values) {
    const auto cfg = with_parameter(config, parameter, v);
    rows.push_back(ValueRow{v, family, value_report(cfg, materialize(source, cfg.demand_pattern), family, options)});
  }
  return rows;
}

namespace {

nlohmann::json value_json(const ParameterValue& v) {
  if (!v.pattern.empty()) {
    std::vector<int> flags;
    for (auto r : v.pattern) flags.push_back(static_cast<int>(r));
    return flags;
  }
  return v.number;
}

}  // namespace

nlohmann::json to_json(const ValueReport& r) {
  return {{"dv", r.dv},     {"sv", r.sv},   {"pv", r.pv},
          {"evpi", r.evpi}, {"vss", r.vss}, {"repaired_scenarios", r.repaired_scenarios},
          {"dv_repair", "orders scaled by C_{t-1}/sum(v*Q) when short of cash; loans clipped to sales and limit"}};
}

nlohmann::json to_json(const StabilityMatrix& m) {
  return {{"values", m.values},
          {"max_relative_gap", m.max_relative_gap},
          {"stable", m.stable},
          {"fixed_decisions", "period-1 orders"}};
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"size", r.size}, {"objective", r.objective}, {"reduction_distance", r.reduction_distance}});
  }
  return out;
}

nlohmann::json to_json(const std::vector<GapRow>& rows, Parameter parameter) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{parameter_name(parameter), value_json(r.value)},
                   {"so_objective", r.so_objective},
                   {"ol_objective", r.ol_objective},
                   {"gap_percent", r.gap_percent}});
  }
  return out;
}

nlohmann::json to_json(const std::vector<ValueRow>& rows, Parameter parameter) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    auto j = to_json(r.report);
    j[parameter_name(parameter)] = value_json(r.value);
    j["family"] = family_name(r.family);
    out.push_back(std::move(j));
  }
  return out;
}

void write_csv(std::ostream& os, const StabilityMatrix& m) {
  os << "solution_from";
  for (std::size_t b = 0; b < m.values.size(); ++b) os << ",evaluated_on_" << b + 1;
  os << '\n';
  for (std::size_t a = 0; a < m.values.size(); ++a) {
    os << a + 1;
    for (double v : m.values[a]) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "size,objective,reduction_distance\n";
  for (const auto& r : rows) {
    os << r.size << ',' << format_double(r.objective) << ',' << format_double(r.reduction_distance) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<GapRow>& rows, Parameter parameter) {
  os << parameter_name(parameter) << ",so_objective,ol_objective,gap_percent\n";
  for (const auto& r : rows) {
    os << r.value.label() << ',' << format_double(r.so_objective) << ',' << format_double(r.ol_objective) << ','
       << format_double(r.gap_percent) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<ValueRow>& rows, Parameter parameter) {
  os << parameter_name(parameter) << ",family,dv,sv,pv,evpi,vss,repaired_scenarios\n";
  for (const auto& r : rows) {
    const auto& v = r.report;
    os << r.value.label() << ',' << family_name(r.family) << ',' << format_double(v.dv) << ',' << format_double(v.sv)
       << ',' << format_double(v.pv) << ',' << format_double(v.evpi) << ',' << format_double(v.vss) << ','
       << v.repaired_scenarios << '\n';
  }
}

}  // namespace ccplan::eval
