#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ccplan::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
};

enum class VarType { Continuous, Binary };
enum class RowSense { LessEqual, GreaterEqual, Equal };
enum class ObjectiveSense { Maximize, Minimize };

struct Term {
  VarId var;
  double coef = 0.0;
};

// Affine expression sum(coef * var) + constant. Terms on the same variable
// are kept separate until the expression is added to a model.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(double constant) : constant_(constant) {}  // NOLINT(google-explicit-constructor)
  LinearExpr(VarId var, double coef = 1.0) { add(var, coef); }  // NOLINT(google-explicit-constructor)

  LinearExpr& add(VarId var, double coef) {
    if (coef != 0.0) terms_.push_back({var, coef});
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, double scale = 1.0) {
    for (const auto& t : other.terms_) add(t.var, scale * t.coef);
    constant_ += scale * other.constant_;
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& other) { return add(other, 1.0); }
  LinearExpr& operator-=(const LinearExpr& other) { return add(other, -1.0); }

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

  // Value under a full assignment of model variables.
  double evaluate(const std::vector<double>& values) const;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinearExpr operator+(LinearExpr a, const LinearExpr& b);
LinearExpr operator-(LinearExpr a, const LinearExpr& b);
LinearExpr operator*(double s, LinearExpr a);

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  VarType type = VarType::Continuous;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // merged, one entry per variable, sorted by index
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

// Mixed-integer linear model. Names must be unique, non-empty and consist of
// letters, digits and '_' so the model can be written in LP text form.
class LinearModel {
 public:
  VarId add_variable(std::string name, double lower, double upper, VarType type = VarType::Continuous);
  VarId add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarType::Binary); }

  // Adds `expr (sense) rhs`; the expression constant moves to the right-hand side.
  void add_constraint(std::string name, const LinearExpr& expr, RowSense sense, double rhs);

  void set_objective(const LinearExpr& expr, ObjectiveSense sense = ObjectiveSense::Maximize);
  void set_bounds(VarId var, double lower, double upper);

  std::size_t variable_count() const { return variables_.size(); }
  std::size_t constraint_count() const { return constraints_.size(); }
  std::size_t binary_count() const;
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective_terms() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  ObjectiveSense objective_sense() const { return sense_; }
  const Variable& variable(VarId id) const { return variables_.at(static_cast<std::size_t>(id.index)); }

  // Throws std::invalid_argument if a term references an unknown variable or
  // any coefficient, bound or right-hand side is not finite where required.
  void check() const;

 private:
  std::vector<Term> merge(const LinearExpr& expr) const;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  double objective_constant_ = 0.0;
  ObjectiveSense sense_ = ObjectiveSense::Maximize;
};

enum class SolveStatus { Optimal, FeasibleIncumbent, Infeasible, Error };

const char* status_name(SolveStatus status);

struct SolverOptions {
  double relative_gap = 1e-6;
  double time_limit_seconds = 600.0;
  int threads = 1;
  int random_seed = 0;
  bool verbose = false;
  // Re-solve the continuous part with integers fixed, to remove big-M
  // leakage from integrality tolerances.
  bool polish = true;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  std::vector<double> values;
  double relative_gap = 0.0;
  double wall_seconds = 0.0;
  std::string message;  // backend diagnostics, verbatim

  bool has_solution() const { return status == SolveStatus::Optimal || status == SolveStatus::FeasibleIncumbent; }
  double value(VarId id) const { return values.at(static_cast<std::size_t>(id.index)); }
};

class MilpSolver {
 public:
  virtual ~MilpSolver() = default;
  virtual std::string name() const = 0;
  virtual SolveOutcome optimize(const LinearModel& model, const SolverOptions& options) const = 0;
  // Solves a model read from an LP text file with the backend's own reader.
  virtual SolveOutcome optimize_lp_file(const std::filesystem::path& path, const SolverOptions& options) const = 0;
};

// Backend by name ("highs"). Throws std::invalid_argument for unknown names.
std::unique_ptr<MilpSolver> make_solver(std::string_view name);

// Backend named by PLANNER_SOLVER, defaulting to "highs".
std::unique_ptr<MilpSolver> make_default_solver();

std::vector<std::string> available_solvers();

// CPLEX-style LP text. See docs/lp_format.md for the exact layout.
void write_lp(std::ostream& os, const LinearModel& model);

}  // namespace ccplan::lp
