#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccplan/core.hpp"
#include "ccplan/scenario.hpp"

namespace ccplan::gen {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;  // standardized third central moment
};

Moments lognormal_moments(double mu, double sigma);

// Targets for one product. Weights h are applied per (product, moment).
struct MomentTarget {
  Moments value;
  std::array<double, 3> weight{1.0, 1.0, 1.0};
};

struct MomentSpec {
  std::vector<MomentTarget> products;
  int moments = 3;  // 1 = mean, 2 = + variance, 3 = + skewness

  std::size_t specification_count() const { return products.size() * static_cast<std::size_t>(moments); }
};

// Targets from the closed-form moments of each product's regime distribution.
MomentSpec moment_spec_for(const InstanceConfig& config, Regime regime, int moments = 3);

struct BranchSet {
  std::vector<std::vector<double>> realizations;  // [branch][product]
  std::vector<double> probabilities;              // [branch]

  std::size_t branches() const { return probabilities.size(); }
  int products() const { return realizations.empty() ? 0 : static_cast<int>(realizations.front().size()); }
};

// Per-product moments implied by a discrete distribution.
std::vector<Moments> implied_moments(const BranchSet& set);

// Sum of h (f - V)^2 over the first `spec.moments` moments of every product.
double matching_objective(const MomentSpec& spec, const std::vector<Moments>& achieved);

// Smallest y with (D+1) y - 1 >= D m, where D = N T.
int branching_factor(int n_products, int horizon, int n_moments);

struct MatchOptions {
  int starts = 20;
  int max_iterations = 3000;
  double tolerance = 1e-6;  // objective accepted as a match
};

struct MatchResult {
  BranchSet branches;
  std::vector<Moments> achieved;
  double objective = 0.0;
  bool converged = false;       // objective <= tolerance
  bool underspecified = false;  // y (N+1) - 1 < number of specifications
  int accepted_starts = 0;
};

// Minimizes the weighted squared moment distance over realizations and
// probabilities with multi-start BFGS. Deterministic for a fixed seed.
MatchResult match_moments(const MomentSpec& spec, int branches, std::uint64_t seed, const MatchOptions& options = {});

// Objective value and gradient of the unconstrained parameterization used by
// match_moments: realization (b, n) = scale_n * exp(z[b*N+n]), probability b
// = w_b^2 / sum w^2 with w = x[B*N + b]. Exposed for gradient checks.
double matching_objective_and_gradient(const MomentSpec& spec, int branches, const std::vector<double>& x,
                                       std::vector<double>* gradient);

// Stage-wise stationary tree: period t uses the branch set of its regime.
struct ScenarioTree {
  std::vector<Regime> pattern;
  std::map<Regime, BranchSet> branch_sets;

  int horizon() const { return static_cast<int>(pattern.size()); }
  int products() const;
  std::size_t path_count() const;

  // Leaves in lexicographic branch order, period 1 most significant.
  ScenarioFan to_fan() const;
};

ScenarioTree build_tree(const InstanceConfig& config, const std::map<Regime, BranchSet>& branch_sets);

// Same branch sets laid over another demand pattern.
ScenarioTree with_pattern(const ScenarioTree& tree, const std::vector<Regime>& pattern);

// {"regimes": {"normal": {"probabilities": [...], "realizations": [[...]]}}, "pattern": [0, ...]}
nlohmann::json tree_to_json(const ScenarioTree& tree);
ScenarioTree tree_from_json(const nlohmann::json& doc);

// Realizations rounded to whole units, for display only.
BranchSet rounded_for_display(const BranchSet& set);

}  // namespace ccplan::gen
