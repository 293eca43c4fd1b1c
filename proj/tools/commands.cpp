#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ccplan/config_io.hpp"
#include "ccplan/demand_fit.hpp"
#include "ccplan/evaluation.hpp"
#include "ccplan/planner_models.hpp"
#include "ccplan/presets.hpp"
#include "ccplan/scenario_gen.hpp"
#include "ccplan/scenario_reduce.hpp"
#include "ccplan/text_io.hpp"
#include "manifest.hpp"

namespace ccplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  double gap = 1e-6;
  double time_limit = 600.0;
  int threads = 1;
  unsigned workers = 1;
  std::string solver;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--gap", f.gap, "Relative MILP gap")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--time-limit", f.time_limit, "Seconds per MILP solve")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--solver-threads", f.threads, "Threads inside each solve")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--workers", f.workers, "Independent solves run concurrently")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--solver", f.solver, "Solver backend (default: $PLANNER_SOLVER or highs)");
}

eval::EvalOptions eval_options(const SolverFlags& f, std::uint64_t seed) {
  eval::EvalOptions o;
  o.solve.solver.relative_gap = f.gap;
  o.solve.solver.time_limit_seconds = f.time_limit;
  o.solve.solver.threads = f.threads;
  o.solve.solver.random_seed = static_cast<int>(seed % 2147483647u);
  o.solver = f.solver;
  o.workers = f.workers;
  return o;
}

json solver_json(const SolverFlags& f) {
  return {{"backend", f.solver.empty() ? lp::make_default_solver()->name() : f.solver},
          {"relative_gap", f.gap},
          {"time_limit_seconds", f.time_limit},
          {"threads", f.threads},
          {"workers", f.workers}};
}

std::string to_text(const auto& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

json read_json_file(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

ScenarioFan load_demand(const fs::path& path, const InstanceConfig& config) {
  if (path.extension() == ".json") {
    return gen::with_pattern(gen::tree_from_json(read_json_file(path)), config.demand_pattern).to_fan();
  }
  std::istringstream is(read_text_file(path));
  return read_fan_csv(is);
}

std::vector<gen::ScenarioTree> load_trees(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::invalid_argument("tree directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with("tree") && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    const auto sa = a.filename().string();
    const auto sb = b.filename().string();
    return sa.size() != sb.size() ? sa.size() < sb.size() : sa < sb;
  });
  if (files.empty()) throw std::invalid_argument("no tree*.json files in " + dir.string());
  std::vector<gen::ScenarioTree> trees;
  for (const auto& f : files) trees.push_back(gen::tree_from_json(read_json_file(f)));
  return trees;
}

std::vector<eval::ParameterValue> parse_values(eval::Parameter parameter, const std::string& text) {
  std::vector<eval::ParameterValue> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    eval::ParameterValue v;
    if (parameter == eval::Parameter::Pattern) {
      for (char c : item) {
        if (c != '0' && c != '1') throw std::invalid_argument("pattern values are strings of 0/1 such as 000011");
        v.pattern.push_back(regime_from_index(c - '0'));
      }
    } else {
      v.number = parse_double(item, "parameter value");
    }
    out.push_back(std::move(v));
  }
  if (out.empty()) throw std::invalid_argument("--values is empty");
  return out;
}

std::vector<eval::ParameterValue> preset_values(eval::Parameter parameter) {
  switch (parameter) {
    case eval::Parameter::InitialCash: return presets::initial_cash_values();
    case eval::Parameter::ReceiptDelay: return presets::receipt_delay_values();
    case eval::Parameter::Overhead: return presets::overhead_values();
    case eval::Parameter::Pattern: return presets::pattern_values();
    case eval::Parameter::LoanLimit: break;
  }
  throw std::invalid_argument("loan_limit has no preset values; pass --values");
}

std::string xy_csv(const std::string& x, const std::string& y, const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = x + "," + y + "\n";
  for (const auto& [a, b] : rows) out += a + "," + format_double(b) + "\n";
  return out;
}

std::vector<eval::Family> families(const std::string& text) {
  if (text == "both") return {eval::Family::SelfOwned, eval::Family::Loan};
  return {eval::parse_family(text)};
}

void log(const std::string& line) { std::clog << "[ccplan] " << line << std::endl; }

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string input;
  std::string output;
  double rate = 0.1;
  int lag = 0;
};

void cmd_fit(const FitArgs& a, RunManifest m) {
  std::istringstream is(read_text_file(a.input));
  const auto rows = fit::read_samples_csv(is);
  if (rows.empty()) throw std::invalid_argument(a.input + ": no sample rows");
  std::vector<std::pair<fit::SampleSet, fit::FitResult>> fits;
  for (auto& set : fit::build_sample_sets(rows, a.rate, a.lag)) {
    auto result = fit::fit_and_test(set);
    fits.emplace_back(std::move(set), result);
  }
  OutputDir out(a.output);
  out.write_json("fits.json", fit::fits_to_json(fits));
  out.finish(std::move(m));
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string config;
  std::string output;
  std::uint64_t seed = 1;
  int moments = 3;
  int branches = 0;
  int trees = 3;
  int starts = 20;
};

void cmd_gen(const GenArgs& a, RunManifest m) {
  const auto config = load_config(a.config);
  const int branches = a.branches > 0 ? a.branches : gen::branching_factor(config.n_products, config.horizon, a.moments);
  gen::MatchOptions opts;
  opts.starts = a.starts;
  OutputDir out(a.output);
  json report = json::array();
  for (int i = 0; i < a.trees; ++i) {
    std::map<Regime, gen::BranchSet> sets;
    json tree_report;
    for (std::size_t r = 0; r < kRegimeCount; ++r) {
      const auto regime = regime_from_index(static_cast<int>(r));
      const std::uint64_t seed = a.seed + 1000u * static_cast<std::uint64_t>(i) + r;
      m.seeds["tree" + std::to_string(i + 1) + "_" + regime_name(regime)] = seed;
      const auto result = gen::match_moments(gen::moment_spec_for(config, regime, a.moments), branches, seed, opts);
      if (!result.converged) {
        log("tree " + std::to_string(i + 1) + " " + regime_name(regime) + ": moment residual " +
            format_double(result.objective) + " above tolerance");
      }
      tree_report[regime_name(regime)] = {{"objective", result.objective},
                                          {"converged", result.converged},
                                          {"underspecified", result.underspecified},
                                          {"accepted_starts", result.accepted_starts}};
      sets.emplace(regime, result.branches);
    }
    const auto tree = gen::build_tree(config, sets);
    const std::string name = "tree" + std::to_string(i + 1);
    out.write_json(name + ".json", gen::tree_to_json(tree));
    out.write(name + "_fan.csv", to_text([&](std::ostream& os) { write_fan_csv(os, tree.to_fan()); }));
    tree_report["tree"] = name;
    tree_report["branches"] = branches;
    report.push_back(std::move(tree_report));
  }
  out.write_json("generation.json", report);
  out.finish(std::move(m));
}

// ---------------------------------------------------------------- reduce

struct ReduceArgs {
  std::string input;
  std::string output;
  std::string config;
  std::size_t k = 140;
};

void cmd_reduce(const ReduceArgs& a, RunManifest m) {
  ScenarioFan fan;
  if (fs::path(a.input).extension() == ".json") {
    auto tree = gen::tree_from_json(read_json_file(a.input));
    if (!a.config.empty()) tree = gen::with_pattern(tree, load_config(a.config).demand_pattern);
    fan = tree.to_fan();
  } else {
    std::istringstream is(read_text_file(a.input));
    fan = read_fan_csv(is);
  }
  const auto result = reduce::fast_forward_select(fan, a.k);
  OutputDir out(a.output);
  out.write("fan.csv", to_text([&](std::ostream& os) { write_fan_csv(os, reduce::apply(fan, result)); }));
  out.write_json("reduction.json", reduce::reduction_to_json(result));
  out.finish(std::move(m));
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string config;
  std::string demand;
  std::string model = "so-s";
  std::string output;
  std::size_t reduce_to = 0;
  bool write_lp = false;
  SolverFlags solver;
  std::uint64_t seed = 0;
};

void cmd_solve(const SolveArgs& a, RunManifest m) {
  const auto config = load_config(a.config);
  const auto kind = plan::parse_kind(a.model);
  ScenarioFan fan;
  if (a.demand.empty()) {
    if (plan::is_stochastic(kind)) throw std::invalid_argument("stochastic models need --demand (tree JSON or fan CSV)");
    fan = single_scenario_fan(plan::mean_forecast(config));
  } else {
    fan = load_demand(a.demand, config);
  }
  if (a.reduce_to > 0 && a.reduce_to < fan.size()) fan = reduce::apply(fan, reduce::fast_forward_select(fan, a.reduce_to));
  const auto model = plan::build_model(kind, config, fan);
  OutputDir out(a.output);
  if (a.write_lp) out.write("model.lp", to_text([&](std::ostream& os) { lp::write_lp(os, model.model()); }));
  const auto opts = eval_options(a.solver, a.seed);
  const auto backend = opts.solver.empty() ? lp::make_default_solver() : lp::make_solver(opts.solver);
  log("solving " + std::string(plan::kind_name(kind)) + " over " + std::to_string(fan.size()) + " scenario(s), " +
      std::to_string(model.model().binary_count()) + " binaries");
  const auto solution = plan::solve(model, opts.solve, *backend);
  if (!solution.optimal()) log("solve stopped before proving the gap: " + solution.message);
  out.write_json("solution.json", plan::solution_to_json(solution));
  out.write("summary.csv", to_text([&](std::ostream& os) { plan::write_solution_summary_csv(os, solution, config); }));
  m.solver = solver_json(a.solver);
  out.finish(std::move(m));
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string config;
  std::string trees;
  std::string study;
  std::string param = "initial_cash";
  std::string values;
  std::string family = "both";
  std::string output;
  std::size_t reduce_to = 140;
  std::size_t tree_index = 1;
  std::vector<std::size_t> sizes;
  SolverFlags solver;
  std::uint64_t seed = 0;
};

struct StudyContext {
  InstanceConfig config;
  std::vector<gen::ScenarioTree> trees;
  std::optional<std::size_t> reduce_to;
  eval::EvalOptions options;
};

eval::ScenarioSource source_of(const StudyContext& c, std::size_t tree) {
  return eval::ScenarioSource{c.trees.at(tree), c.reduce_to};
}

void study_stability(const StudyContext& c, const std::vector<eval::Family>& fams, OutputDir& out, json& bundle) {
  std::vector<ScenarioFan> fans;
  for (std::size_t i = 0; i < c.trees.size(); ++i) fans.push_back(eval::materialize(source_of(c, i), c.config.demand_pattern));
  for (auto fam : fams) {
    log(std::string("stability matrix, ") + eval::family_name(fam));
    const auto m = eval::stability_matrix(c.config, fans, fam, c.options);
    const std::string name = std::string("stability_") + eval::family_name(fam);
    out.write(name + ".csv", to_text([&](std::ostream& os) { eval::write_csv(os, m); }));
    bundle[name] = eval::to_json(m);
  }
}

void study_sweep(const StudyContext& c, std::size_t tree, const std::vector<std::size_t>& sizes,
                 const std::vector<eval::Family>& fams, OutputDir& out, json& bundle) {
  const auto fan = gen::with_pattern(c.trees.at(tree), c.config.demand_pattern).to_fan();
  for (auto fam : fams) {
    log(std::string("sample-size sweep, ") + eval::family_name(fam));
    const auto rows = eval::sample_size_sweep(c.config, fan, sizes, fam, c.options);
    const std::string name = std::string("sweep_") + eval::family_name(fam);
    out.write(name + ".csv", to_text([&](std::ostream& os) { eval::write_csv(os, rows); }));
    std::vector<std::pair<std::string, double>> xy;
    for (const auto& r : rows) xy.emplace_back(std::to_string(r.size), r.objective);
    out.write("plots/sample_size_objective_" + std::string(eval::family_name(fam)) + ".csv",
              xy_csv("sample_size", "objective", xy));
    bundle[name] = eval::to_json(rows);
  }
}

void study_values(const StudyContext& c, std::size_t tree, eval::Parameter p, const std::vector<eval::ParameterValue>& values,
                  const std::vector<eval::Family>& fams, OutputDir& out, json& bundle) {
  std::vector<eval::ValueRow> all;
  for (auto fam : fams) {
    log(std::string("DV/SV/PV over ") + eval::parameter_name(p) + ", " + eval::family_name(fam));
    const auto rows = eval::value_study(c.config, source_of(c, tree), p, values, fam, c.options);
    std::vector<std::pair<std::string, double>> vss, evpi;
    for (const auto& r : rows) {
      vss.emplace_back(r.value.label(), r.report.vss);
      evpi.emplace_back(r.value.label(), r.report.evpi);
    }
    const std::string suffix = std::string(eval::parameter_name(p)) + "_" + eval::family_name(fam) + ".csv";
    out.write("plots/vss_" + suffix, xy_csv(eval::parameter_name(p), "vss", vss));
    out.write("plots/evpi_" + suffix, xy_csv(eval::parameter_name(p), "evpi", evpi));
    all.insert(all.end(), rows.begin(), rows.end());
  }
  const std::string name = std::string("values_") + eval::parameter_name(p);
  out.write(name + ".csv", to_text([&](std::ostream& os) { eval::write_csv(os, all, p); }));
  bundle[name] = eval::to_json(all, p);
}

void study_gap(const StudyContext& c, std::size_t tree, eval::Parameter p, const std::vector<eval::ParameterValue>& values,
               OutputDir& out, json& bundle) {
  log(std::string("loan profit gap over ") + eval::parameter_name(p));
  const auto rows = eval::profit_gap_study(c.config, source_of(c, tree), p, values, c.options);
  const std::string name = std::string("gap_") + eval::parameter_name(p);
  out.write(name + ".csv", to_text([&](std::ostream& os) { eval::write_csv(os, rows, p); }));
  std::vector<std::pair<std::string, double>> xy;
  for (const auto& r : rows) xy.emplace_back(r.value.label(), r.gap_percent);
  out.write("plots/profit_gap_" + std::string(eval::parameter_name(p)) + ".csv",
            xy_csv(eval::parameter_name(p), "gap_percent", xy));
  bundle[name] = eval::to_json(rows, p);
}

void cmd_eval(const EvalArgs& a, RunManifest m) {
  StudyContext c{load_config(a.config), load_trees(a.trees),
                 a.reduce_to > 0 ? std::optional<std::size_t>(a.reduce_to) : std::nullopt, eval_options(a.solver, a.seed)};
  if (a.tree_index == 0 || a.tree_index > c.trees.size()) throw std::invalid_argument("--tree out of range");
  const std::size_t tree = a.tree_index - 1;
  const auto fams = families(a.family);
  OutputDir out(a.output);
  json bundle = json::object();
  if (a.study == "stability") {
    study_stability(c, fams, out, bundle);
  } else if (a.study == "sweep") {
    study_sweep(c, tree, a.sizes.empty() ? presets::sweep_sizes() : a.sizes, fams, out, bundle);
  } else {
    const auto p = eval::parse_parameter(a.param);
    const auto values = a.values.empty() ? preset_values(p) : parse_values(p, a.values);
    if (a.study == "vss-evpi") {
      study_values(c, tree, p, values, fams, out, bundle);
    } else {
      study_gap(c, tree, p, values, out, bundle);
    }
  }
  out.write_json("report.json", bundle);
  m.solver = solver_json(a.solver);
  out.finish(std::move(m));
}

// ---------------------------------------------------------------- repro-paper

struct ReproArgs {
  std::string output;
  std::string profile = "full";
  SolverFlags solver;
  std::uint64_t seed = 0;
};

struct Profile {
  std::size_t reduce_to;
  std::vector<std::size_t> sweep_sizes;
  std::size_t values_per_parameter;  // 0 = all preset values
};

Profile profile_named(const std::string& name) {
  if (name == "full") return {140, presets::sweep_sizes(), 0};
  if (name == "smoke") return {8, {4, 8}, 2};
  throw UsageError("unknown profile '" + name + "' (expected full or smoke)");
}

void cmd_repro(const ReproArgs& a, RunManifest m) {
  const auto prof = profile_named(a.profile);
  StudyContext c{presets::retail_instance(), presets::retail_trees(), prof.reduce_to, eval_options(a.solver, a.seed)};
  OutputDir out(a.output);
  out.write_json("instance.json", to_json(c.config));
  for (std::size_t i = 0; i < c.trees.size(); ++i) {
    const std::string name = "tree" + std::to_string(i + 1);
    out.write_json("trees/" + name + ".json", gen::tree_to_json(c.trees[i]));
    const auto fan = eval::materialize(source_of(c, i), c.config.demand_pattern);
    out.write("fans/" + name + "_reduced.csv", to_text([&](std::ostream& os) { write_fan_csv(os, fan); }));
  }
  const auto both = families("both");
  auto trim = [&](std::vector<eval::ParameterValue> v) {
    if (prof.values_per_parameter > 0 && v.size() > prof.values_per_parameter) v.resize(prof.values_per_parameter);
    return v;
  };
  json bundle = {{"profile", a.profile}, {"reduce_to", prof.reduce_to}};
  study_stability(c, both, out, bundle);
  study_sweep(c, 0, prof.sweep_sizes, {eval::Family::SelfOwned}, out, bundle);
  for (auto p : {eval::Parameter::InitialCash, eval::Parameter::Overhead, eval::Parameter::ReceiptDelay}) {
    study_values(c, 0, p, trim(preset_values(p)), both, out, bundle);
  }
  for (auto p : {eval::Parameter::InitialCash, eval::Parameter::ReceiptDelay, eval::Parameter::Overhead,
                 eval::Parameter::Pattern}) {
    study_gap(c, 0, p, trim(preset_values(p)), out, bundle);
  }
  out.write_json("report.json", bundle);
  m.solver = solver_json(a.solver);
  out.finish(std::move(m));
}

// ---------------------------------------------------------------- errors

int report_error(const std::string& kind, const std::string& message, json extra = json::object()) {
  json err = {{"kind", kind}, {"message", message}};
  for (auto& [k, v] : extra.items()) err[k] = v;
  std::cerr << json{{"error", err}}.dump(2) << std::endl;
  return kind == "usage" ? 2 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Cash-constrained multi-product inventory planning with scenario trees and order-based loans", "ccplan"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ccplan 1.0.0");
  std::string timestamp_override;

  auto hidden_timestamp = [&](CLI::App* cmd) { cmd->add_option("--timestamp", timestamp_override)->group(""); };

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit log-normal demand per product and regime from comment counts");
  fit_cmd->add_option("--input", fit_args.input, "CSV: product_id,period_start_date,regime,observation")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--output", fit_args.output, "Output directory")->required();
  fit_cmd->add_option("--rate", fit_args.rate, "Share of customers who leave a comment")->capture_default_str();
  fit_cmd->add_option("--lag", fit_args.lag, "Periods between purchase and comment")->capture_default_str()->check(CLI::NonNegativeNumber);
  hidden_timestamp(fit_cmd);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate moment-matched scenario trees");
  gen_cmd->add_option("--config", gen_args.config, "Instance JSON")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--output", gen_args.output, "Output directory")->required();
  gen_cmd->add_option("--seed", gen_args.seed, "Base random seed")->capture_default_str();
  gen_cmd->add_option("--moments", gen_args.moments, "Moments matched: 1 mean, 2 +variance, 3 +skewness")->capture_default_str()->check(CLI::Range(1, 3));
  gen_cmd->add_option("--branches", gen_args.branches, "Branches per period (0: smallest count that fits the moment specifications)")->capture_default_str()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--trees", gen_args.trees, "Number of trees")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--starts", gen_args.starts, "Multi-start count per match")->capture_default_str()->check(CLI::PositiveNumber);
  hidden_timestamp(gen_cmd);

  ReduceArgs red_args;
  auto* red_cmd = app.add_subcommand("reduce", "Reduce a scenario fan by fast forward selection");
  red_cmd->add_option("--input", red_args.input, "Fan CSV or tree JSON")->required()->check(CLI::ExistingFile);
  red_cmd->add_option("--k", red_args.k, "Scenarios kept")->capture_default_str()->check(CLI::PositiveNumber);
  red_cmd->add_option("--config", red_args.config, "Instance JSON whose demand pattern a tree is laid over")->check(CLI::ExistingFile);
  red_cmd->add_option("--output", red_args.output, "Output directory")->required();
  hidden_timestamp(red_cmd);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one planning model");
  solve_cmd->add_option("--config", solve_args.config, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--demand", solve_args.demand, "Tree JSON or fan CSV (deterministic default: regime means)")->check(CLI::ExistingFile);
  solve_cmd->add_option("--model", solve_args.model, "so-d, ol-d, so-s or ol-s")->capture_default_str();
  solve_cmd->add_option("--reduce-to", solve_args.reduce_to, "Reduce the scenarios first (0: keep all)")->capture_default_str();
  solve_cmd->add_flag("--write-lp", solve_args.write_lp, "Also write the model in LP text format");
  solve_cmd->add_option("--seed", solve_args.seed, "Solver random seed")->capture_default_str();
  solve_cmd->add_option("--output", solve_args.output, "Output directory")->required();
  add_solver_flags(solve_cmd, solve_args.solver);
  hidden_timestamp(solve_cmd);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Run an evaluation study over scenario trees");
  eval_cmd->add_option("--config", eval_args.config, "Instance JSON")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--trees", eval_args.trees, "Directory with tree*.json")->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--study", eval_args.study, "vss-evpi, stability, sweep or profit-gap")->required()
      ->check(CLI::IsMember({"vss-evpi", "stability", "sweep", "profit-gap"}));
  eval_cmd->add_option("--param", eval_args.param, "initial_cash, receipt_delay, overhead, pattern or loan_limit")->capture_default_str();
  eval_cmd->add_option("--values", eval_args.values, "Comma-separated values (patterns as 000011); default: preset grid");
  eval_cmd->add_option("--family", eval_args.family, "so, ol or both")->capture_default_str()->check(CLI::IsMember({"so", "ol", "both"}));
  eval_cmd->add_option("--reduce-to", eval_args.reduce_to, "Scenarios kept per tree (0: keep all)")->capture_default_str();
  eval_cmd->add_option("--tree", eval_args.tree_index, "Tree (1-based) for sweep, vss-evpi and profit-gap")->capture_default_str();
  eval_cmd->add_option("--sizes", eval_args.sizes, "Sample sizes for sweep (default 20..180 step 20)")->delimiter(',');
  eval_cmd->add_option("--seed", eval_args.seed, "Solver random seed")->capture_default_str();
  eval_cmd->add_option("--output", eval_args.output, "Output directory")->required();
  add_solver_flags(eval_cmd, eval_args.solver);
  hidden_timestamp(eval_cmd);

  ReproArgs repro_args;
  auto* repro_cmd = app.add_subcommand("repro-paper", "Run the full study battery on the built-in retail instance and trees");
  repro_cmd->add_option("--output", repro_args.output, "Output directory")->required();
  repro_cmd->add_option("--profile", repro_args.profile, "full (140 scenarios per tree) or smoke (8)")->capture_default_str()
      ->check(CLI::IsMember({"full", "smoke"}));
  repro_cmd->add_option("--seed", repro_args.seed, "Solver random seed")->capture_default_str();
  add_solver_flags(repro_cmd, repro_args.solver);
  hidden_timestamp(repro_cmd);

  std::string replay_manifest;
  std::string replay_output;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", replay_manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--output", replay_output, "Output directory (default: the recorded one)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what());
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd == replay_cmd) {
      const auto recorded = RunManifest::from_json(read_json_file(replay_manifest));
      std::vector<std::string> again;
      for (std::size_t i = 0; i < recorded.arguments.size(); ++i) {
        const auto& s = recorded.arguments[i];
        if (s == "--output" || s == "--timestamp") {
          ++i;
          continue;
        }
        if (s.starts_with("--output=") || s.starts_with("--timestamp=")) continue;
        again.push_back(s);
      }
      again.insert(again.end(), {"--output", replay_output.empty() ? recorded.output_dir : replay_output});
      again.insert(again.end(), {"--timestamp", recorded.timestamp});
      return run(again);
    }

    RunManifest m;
    m.command = cmd->get_name();
    for (const auto& s : args) {
      if (s == "--timestamp" || s.starts_with("--timestamp=")) break;
      m.arguments.push_back(s);
    }
    m.timestamp = timestamp_override.empty() ? run_timestamp() : timestamp_override;
    if (cmd == fit_cmd) {
      m.output_dir = fit_args.output;
      cmd_fit(fit_args, m);
    } else if (cmd == gen_cmd) {
      m.output_dir = gen_args.output;
      m.config_path = gen_args.config;
      cmd_gen(gen_args, m);
    } else if (cmd == red_cmd) {
      m.output_dir = red_args.output;
      m.config_path = red_args.config;
      cmd_reduce(red_args, m);
    } else if (cmd == solve_cmd) {
      m.output_dir = solve_args.output;
      m.config_path = solve_args.config;
      m.seeds["solver"] = solve_args.seed;
      cmd_solve(solve_args, m);
    } else if (cmd == eval_cmd) {
      m.output_dir = eval_args.output;
      m.config_path = eval_args.config;
      m.seeds["solver"] = eval_args.seed;
      cmd_eval(eval_args, m);
    } else if (cmd == repro_cmd) {
      m.output_dir = repro_args.output;
      m.config_path = "built-in retail instance";
      m.seeds["solver"] = repro_args.seed;
      cmd_repro(repro_args, m);
    }
    return 0;
  } catch (const UsageError& e) {
    return report_error("usage", e.what());
  } catch (const ConfigError& e) {
    json issues = json::array();
    for (const auto& i : e.issues()) issues.push_back({{"field", i.field}, {"rule", i.rule}});
    return report_error("invalid_config", e.what(), {{"issues", issues}});
  } catch (const plan::PlanError& e) {
    return report_error("solve_failed", e.what());
  } catch (const std::invalid_argument& e) {
    return report_error("invalid_input", e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
}

}  // namespace ccplan::cli
