#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

#include "ccplan/solver_backend.hpp"
#include "ccplan/text_io.hpp"

namespace ccplan::lp {

double LinearExpr::evaluate(const std::vector<double>& values) const {
  double v = constant_;
  for (const auto& t : terms_) v += t.coef * values.at(static_cast<std::size_t>(t.var.index));
  return v;
}

LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a.add(b, 1.0); }
LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a.add(b, -1.0); }
LinearExpr operator*(double s, LinearExpr a) {
  LinearExpr out;
  out.add(a, s);
  return out;
}

namespace {

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(),
                     [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

}  // namespace

VarId LinearModel::add_variable(std::string name, double lower, double upper, VarType type) {
  if (!valid_name(name)) throw std::invalid_argument("invalid variable name '" + name + "'");
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw std::invalid_argument("variable " + name + ": bounds must satisfy lower <= upper");
  }
  variables_.push_back(Variable{std::move(name), lower, upper, type});
  return VarId{static_cast<int>(variables_.size()) - 1};
}

std::vector<Term> LinearModel::merge(const LinearExpr& expr) const {
  std::vector<Term> terms = expr.terms();
  for (const auto& t : terms) {
    if (t.var.index < 0 || static_cast<std::size_t>(t.var.index) >= variables_.size()) {
      throw std::invalid_argument("expression references an undeclared variable");
    }
    if (!std::isfinite(t.coef)) throw std::invalid_argument("expression has a non-finite coefficient");
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var.index < b.var.index; });
  std::vector<Term> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  return merged;
}

void LinearModel::add_constraint(std::string name, const LinearExpr& expr, RowSense sense, double rhs) {
  if (!valid_name(name)) throw std::invalid_argument("invalid constraint name '" + name + "'");
  if (!std::isfinite(rhs) || !std::isfinite(expr.constant())) {
    throw std::invalid_argument("constraint " + name + ": right-hand side must be finite");
  }
  auto terms = merge(expr);
  const double adjusted = rhs - expr.constant();
  if (terms.empty()) {
    constexpr double tol = 1e-9;
    const bool ok = (sense == RowSense::LessEqual && 0.0 <= adjusted + tol) ||
                    (sense == RowSense::GreaterEqual && 0.0 >= adjusted - tol) ||
                    (sense == RowSense::Equal && std::abs(adjusted) <= tol);
    if (!ok) throw std::invalid_argument("constraint " + name + " has no variables and cannot hold");
    return;
  }
  constraints_.push_back(Constraint{std::move(name), std::move(terms), sense, adjusted});
}

void LinearModel::set_objective(const LinearExpr& expr, ObjectiveSense sense) {
  objective_ = merge(expr);
  objective_constant_ = expr.constant();
  sense_ = sense;
}

void LinearModel::set_bounds(VarId var, double lower, double upper) {
  auto& v = variables_.at(static_cast<std::size_t>(var.index));
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw std::invalid_argument("variable " + v.name + ": bounds must satisfy lower <= upper");
  }
  v.lower = lower;
  v.upper = upper;
}

std::size_t LinearModel::binary_count() const {
  return static_cast<std::size_t>(
      std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) { return v.type == VarType::Binary; }));
}

void LinearModel::check() const {
  std::unordered_set<std::string_view> seen;
  for (const auto& v : variables_) {
    if (!seen.insert(v.name).second) throw std::invalid_argument("duplicate variable name '" + v.name + "'");
  }
  seen.clear();
  for (const auto& c : constraints_) {
    if (!seen.insert(c.name).second) throw std::invalid_argument("duplicate constraint name '" + c.name + "'");
  }
  for (const auto& c : constraints_) {
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint " + c.name + ": non-finite rhs");
    for (const auto& t : c.terms) {
      if (t.var.index < 0 || static_cast<std::size_t>(t.var.index) >= variables_.size()) {
        throw std::invalid_argument("constraint " + c.name + " references an undeclared variable");
      }
      if (!std::isfinite(t.coef)) throw std::invalid_argument("constraint " + c.name + ": non-finite coefficient");
    }
  }
  if (!std::isfinite(objective_constant_)) throw std::invalid_argument("objective constant must be finite");
}

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleIncumbent: return "feasible-incumbent";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Error: return "error";
  }
  return "unknown";
}

namespace {

void write_terms(std::ostream& os, const std::vector<Term>& terms, const LinearModel& model) {
  int on_line = 0;
  bool first = true;
  for (const auto& t : terms) {
    if (on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
    const double mag = std::abs(t.coef);
    if (first) {
      os << (t.coef < 0 ? "- " : "");
    } else {
      os << (t.coef < 0 ? " - " : " + ");
    }
    if (mag != 1.0) os << format_double(mag) << ' ';
    os << model.variable(t.var).name;
    first = false;
    ++on_line;
  }
}

}  // namespace

void write_lp(std::ostream& os, const LinearModel& model) {
  model.check();
  os << "\\ ccplan LP model: " << model.variable_count() << " variables, " << model.constraint_count()
     << " constraints\n";
  os << (model.objective_sense() == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n");
  os << " obj: ";
  write_terms(os, model.objective_terms(), model);
  if (model.objective_constant() != 0.0) {
    os << (model.objective_terms().empty() ? "" : " ") << (model.objective_constant() < 0 ? "- " : "+ ")
       << format_double(std::abs(model.objective_constant()));
  } else if (model.objective_terms().empty()) {
    os << "0";
  }
  os << "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    os << ' ' << c.name << ": ";
    write_terms(os, c.terms, model);
    os << (c.sense == RowSense::LessEqual ? " <= " : c.sense == RowSense::GreaterEqual ? " >= " : " = ")
       << format_double(c.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : model.variables()) {
    const bool lo_inf = v.lower == -kInfinity;
    const bool up_inf = v.upper == kInfinity;
    os << ' ';
    if (lo_inf && up_inf) {
      os << v.name << " free";
    } else if (v.lower == v.upper) {
      os << v.name << " = " << format_double(v.lower);
    } else if (lo_inf) {
      os << "-inf <= " << v.name << " <= " << format_double(v.upper);
    } else if (up_inf) {
      os << v.name << " >= " << format_double(v.lower);
    } else {
      os << format_double(v.lower) << " <= " << v.name << " <= " << format_double(v.upper);
    }
    os << '\n';
  }
  if (model.binary_count() > 0) {
    os << "Binaries\n";
    int on_line = 0;
    for (const auto& v : model.variables()) {
      if (v.type != VarType::Binary) continue;
      os << (on_line == 0 ? " " : " ") << v.name;
      if (++on_line == 10) {
        os << '\n';
        on_line = 0;
      }
    }
    if (on_line != 0) os << '\n';
  }
  os << "End\n";
}

std::vector<std::string> available_solvers() { return {"highs"}; }

std::unique_ptr<MilpSolver> make_highs_solver();

std::unique_ptr<MilpSolver> make_solver(std::string_view name) {
  if (name == "highs") return make_highs_solver();
  throw std::invalid_argument("unknown solver backend '" + std::string(name) + "' (available: highs)");
}

std::unique_ptr<MilpSolver> make_default_solver() {
  const char* env = std::getenv("PLANNER_SOLVER");
  return make_solver(env && *env ? std::string_view(env) : std::string_view("highs"));
}

}  // namespace ccplan::lp
