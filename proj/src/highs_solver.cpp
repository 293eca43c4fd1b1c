#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "Highs.h"
#include "ccplan/solver_backend.hpp"

namespace ccplan::lp {

namespace {

void configure(Highs& highs, const SolverOptions& options) {
  highs.setOptionValue("output_flag", options.verbose);
  highs.setOptionValue("mip_rel_gap", options.relative_gap);
  highs.setOptionValue("time_limit", options.time_limit_seconds);
  highs.setOptionValue("threads", static_cast<HighsInt>(std::max(options.threads, 1)));
  highs.setOptionValue("random_seed", static_cast<HighsInt>(options.random_seed));
}

HighsModel to_highs(const LinearModel& model) {
  HighsLp lp;
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  lp.num_col_ = static_cast<HighsInt>(vars.size());
  lp.num_row_ = static_cast<HighsInt>(rows.size());
  lp.sense_ = model.objective_sense() == ObjectiveSense::Maximize ? ObjSense::kMaximize : ObjSense::kMinimize;
  lp.offset_ = model.objective_constant();
  lp.col_cost_.assign(vars.size(), 0.0);
  for (const auto& t : model.objective_terms()) lp.col_cost_[static_cast<std::size_t>(t.var.index)] = t.coef;
  bool any_integer = false;
  for (const auto& v : vars) {
    lp.col_lower_.push_back(v.lower == -kInfinity ? -kHighsInf : v.lower);
    lp.col_upper_.push_back(v.upper == kInfinity ? kHighsInf : v.upper);
    lp.integrality_.push_back(v.type == VarType::Binary ? HighsVarType::kInteger : HighsVarType::kContinuous);
    any_integer = any_integer || v.type == VarType::Binary;
    lp.col_names_.push_back(v.name);
  }
  if (!any_integer) lp.integrality_.clear();
  for (const auto& c : rows) {
    lp.row_lower_.push_back(c.sense == RowSense::LessEqual ? -kHighsInf : c.rhs);
    lp.row_upper_.push_back(c.sense == RowSense::GreaterEqual ? kHighsInf : c.rhs);
    lp.row_names_.push_back(c.name);
  }
  auto& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kRowwise;
  a.num_col_ = lp.num_col_;
  a.num_row_ = lp.num_row_;
  a.start_.assign(1, 0);
  for (const auto& c : rows) {
    for (const auto& t : c.terms) {
      a.index_.push_back(static_cast<HighsInt>(t.var.index));
      a.value_.push_back(t.coef);
    }
    a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
  }
  a.ensureColwise();
  HighsModel out;
  out.lp_ = std::move(lp);
  return out;
}

SolveOutcome collect(Highs& highs, const SolverOptions& options, bool is_mip) {
  SolveOutcome out;
  const HighsModelStatus status = highs.getModelStatus();
  const HighsInfo& info = highs.getInfo();
  const bool has_primal = info.primal_solution_status == kSolutionStatusFeasible;
  switch (status) {
    case HighsModelStatus::kOptimal:
      out.status = SolveStatus::Optimal;
      break;
    case HighsModelStatus::kInfeasible:
      out.status = SolveStatus::Infeasible;
      out.message = "model is infeasible";
      break;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt:
      out.status = has_primal ? SolveStatus::FeasibleIncumbent : SolveStatus::Error;
      out.message = highs.modelStatusToString(status);
      break;
    default:
      out.status = SolveStatus::Error;
      out.message = highs.modelStatusToString(status);
      break;
  }
  if (out.has_solution()) {
    out.values = highs.getSolution().col_value;
    out.objective = info.objective_function_value;
    out.relative_gap = is_mip ? std::max(info.mip_gap, 0.0) : 0.0;
    if (out.status == SolveStatus::Optimal && is_mip && out.relative_gap > options.relative_gap) {
      // HiGHS reports the gap it proved; treat an unproven gap as an incumbent.
      out.status = SolveStatus::FeasibleIncumbent;
    }
  }
  return out;
}

// Fix integer columns at their rounded incumbent values and re-solve the
// remaining LP with tight feasibility tolerances.
void polish(Highs& highs, const LinearModel& model, SolveOutcome& out) {
  const auto& vars = model.variables();
  std::vector<HighsInt> idx;
  std::vector<double> fixed;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].type != VarType::Binary) continue;
    idx.push_back(static_cast<HighsInt>(j));
    fixed.push_back(std::round(out.values[j]));
  }
  if (idx.empty()) return;
  std::vector<HighsVarType> continuous(idx.size(), HighsVarType::kContinuous);
  const auto n = static_cast<HighsInt>(idx.size());
  highs.changeColsIntegrality(n, idx.data(), continuous.data());
  highs.changeColsBounds(n, idx.data(), fixed.data(), fixed.data());
  highs.setOptionValue("primal_feasibility_tolerance", 1e-9);
  highs.setOptionValue("dual_feasibility_tolerance", 1e-9);
  if (highs.run() == HighsStatus::kError || highs.getModelStatus() != HighsModelStatus::kOptimal) return;
  out.values = highs.getSolution().col_value;
  out.objective = highs.getInfo().objective_function_value;
}

class HighsSolver final : public MilpSolver {
 public:
  std::string name() const override { return "highs"; }

  SolveOutcome optimize(const LinearModel& model, const SolverOptions& options) const override {
    model.check();
    const auto started = std::chrono::steady_clock::now();
    Highs highs;
    configure(highs, options);
    if (highs.passModel(to_highs(model)) == HighsStatus::kError) {
      SolveOutcome out;
      out.message = "HiGHS rejected the model";
      return out;
    }
    const bool is_mip = model.binary_count() > 0;
    SolveOutcome out;
    if (highs.run() == HighsStatus::kError) {
      out.message = "HiGHS run failed: " + highs.modelStatusToString(highs.getModelStatus());
    } else {
      out = collect(highs, options, is_mip);
      if (is_mip && options.polish && out.has_solution()) polish(highs, model, out);
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
  }

  SolveOutcome optimize_lp_file(const std::filesystem::path& path, const SolverOptions& options) const override {
    const auto started = std::chrono::steady_clock::now();
    Highs highs;
    configure(highs, options);
    SolveOutcome out;
    if (highs.readModel(path.string()) == HighsStatus::kError) {
      out.message = "HiGHS could not read " + path.string();
      return out;
    }
    const auto& integrality = highs.getLp().integrality_;
    const bool is_mip = std::any_of(integrality.begin(), integrality.end(),
                                    [](HighsVarType t) { return t != HighsVarType::kContinuous; });
    if (highs.run() == HighsStatus::kError) {
      out.message = "HiGHS run failed";
    } else {
      out = collect(highs, options, is_mip);
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
  }
};

}  // namespace

std::unique_ptr<MilpSolver> make_highs_solver() { return std::make_unique<HighsSolver>(); }

}  // namespace ccplan::lp
