#include "ccplan/scenario_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ccplan::gen {

Moments lognormal_moments(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("lognormal_moments: sigma must be > 0");
  const double s2 = sigma * sigma;
  const double e = std::expm1(s2);  // exp(sigma^2) - 1
  return Moments{std::exp(mu + 0.5 * s2), e * std::exp(2.0 * mu + s2), (e + 3.0) * std::sqrt(e)};
}

MomentSpec moment_spec_for(const InstanceConfig& config, Regime regime, int moments) {
  MomentSpec spec;
  spec.moments = moments;
  for (int n = 0; n < config.n_products; ++n) {
    const auto& p = config.params(n, regime);
    spec.products.push_back(MomentTarget{lognormal_moments(p.mu, p.sigma), {1.0, 1.0, 1.0}});
  }
  return spec;
}

std::vector<Moments> implied_moments(const BranchSet& set) {
  const int N = set.products();
  std::vector<Moments> out(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    double m = 0.0;
    for (std::size_t b = 0; b < set.branches(); ++b) m += set.probabilities[b] * set.realizations[b][n];
    double c2 = 0.0;
    double c3 = 0.0;
    for (std::size_t b = 0; b < set.branches(); ++b) {
      const double d = set.realizations[b][n] - m;
      c2 += set.probabilities[b] * d * d;
      c3 += set.probabilities[b] * d * d * d;
    }
    out[static_cast<std::size_t>(n)] = Moments{m, c2, c2 > 0.0 ? c3 / std::pow(c2, 1.5) : 0.0};
  }
  return out;
}

double matching_objective(const MomentSpec& spec, const std::vector<Moments>& achieved) {
  if (achieved.size() != spec.products.size()) throw std::invalid_argument("matching_objective: product count mismatch");
  double f = 0.0;
  for (std::size_t n = 0; n < achieved.size(); ++n) {
    const auto& tgt = spec.products[n];
    const std::array<double, 3> got{achieved[n].mean, achieved[n].variance, achieved[n].skewness};
    const std::array<double, 3> want{tgt.value.mean, tgt.value.variance, tgt.value.skewness};
    for (int k = 0; k < spec.moments; ++k) {
      const double r = got[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)];
      f += tgt.weight[static_cast<std::size_t>(k)] * r * r;
    }
  }
  return f;
}

int branching_factor(int n_products, int horizon, int n_moments) {
  if (n_products < 1 || horizon < 1 || n_moments < 1) {
    throw std::invalid_argument("branching_factor: all arguments must be >= 1");
  }
  const long long D = static_cast<long long>(n_products) * horizon;
  const long long specs = D * n_moments;
  long long y = 1;
  while ((D + 1) * y - 1 < specs) ++y;
  return static_cast<int>(y);
}

namespace {

void check_spec(const MomentSpec& spec, int branches) {
  if (branches < 1) throw std::invalid_argument("match_moments: need at least one branch");
  if (spec.products.empty()) throw std::invalid_argument("match_moments: no products");
  if (spec.moments < 1 || spec.moments > 3) throw std::invalid_argument("match_moments: moments must be 1, 2 or 3");
  for (const auto& p : spec.products) {
    if (spec.moments >= 2 && !(p.value.variance > 0.0)) {
      throw std::invalid_argument("match_moments: target variance must be > 0");
    }
    for (int k = 0; k < spec.moments; ++k) {
      if (!(p.weight[static_cast<std::size_t>(k)] >= 0.0)) {
        throw std::invalid_argument("match_moments: weights must be >= 0");
      }
    }
  }
}

double product_scale(const MomentTarget& t) { return t.value.mean > 0.0 ? t.value.mean : 1.0; }

BranchSet decode(const MomentSpec& spec, int B, const std::vector<double>& x) {
  const int N = static_cast<int>(spec.products.size());
  BranchSet set;
  set.realizations.assign(static_cast<std::size_t>(B), std::vector<double>(static_cast<std::size_t>(N)));
  set.probabilities.assign(static_cast<std::size_t>(B), 0.0);
  double w2 = 0.0;
  for (int b = 0; b < B; ++b) w2 += x[static_cast<std::size_t>(B * N + b)] * x[static_cast<std::size_t>(B * N + b)];
  for (int b = 0; b < B; ++b) {
    const double w = x[static_cast<std::size_t>(B * N + b)];
    set.probabilities[static_cast<std::size_t>(b)] = w * w / w2;
    for (int n = 0; n < N; ++n) {
      set.realizations[static_cast<std::size_t>(b)][static_cast<std::size_t>(n)] =
          product_scale(spec.products[static_cast<std::size_t>(n)]) * std::exp(x[static_cast<std::size_t>(b * N + n)]);
    }
  }
  return set;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct StartResult {
  std::vector<double> x;
  double objective = std::numeric_limits<double>::infinity();
};

// BFGS on the inverse Hessian with Armijo backtracking.
StartResult minimize_bfgs(const MomentSpec& spec, int B, std::vector<double> x, const MatchOptions& opt) {
  const std::size_t dim = x.size();
  std::vector<double> g(dim);
  double f = matching_objective_and_gradient(spec, B, x, &g);
  std::vector<double> H(dim * dim, 0.0);
  auto reset = [&](double scale) {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) H[i * dim + i] = scale;
  };
  const double gnorm0 = std::sqrt(dot(g, g));
  reset(gnorm0 > 0.0 ? 1.0 / gnorm0 : 1.0);
  bool fresh = true;

  std::vector<double> p(dim), x_new(dim), g_new(dim), s(dim), y(dim), Hy(dim);
  const double target = opt.tolerance * 1e-6;
  for (int iter = 0; iter < opt.max_iterations && f > target; ++iter) {
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc -= H[i * dim + j] * g[j];
      p[i] = acc;
    }
    double slope = dot(g, p);
    if (!(slope < 0.0)) {
      const double gn = std::sqrt(dot(g, g));
      if (gn == 0.0) break;
      reset(1.0 / gn);
      fresh = true;
      for (std::size_t i = 0; i < dim; ++i) p[i] = -g[i] / gn;
      slope = dot(g, p);
    }

    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      for (std::size_t i = 0; i < dim; ++i) x_new[i] = x[i] + step * p[i];
      f_new = matching_objective_and_gradient(spec, B, x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;  // steepest descent made no progress either
      reset(1.0 / std::max(std::sqrt(dot(g, g)), 1e-300));
      fresh = true;
      continue;
    }

    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-14 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (fresh) {
        reset(sy / dot(y, y));
        fresh = false;
      }
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += H[i * dim + j] * y[j];
        Hy[i] = acc;
      }
      const double yHy = dot(y, Hy);
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          H[i * dim + j] += rho * ((1.0 + rho * yHy) * s[i] * s[j] - Hy[i] * s[j] - s[i] * Hy[j]);
        }
      }
    }
    const double improvement = f - f_new;
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    if (improvement <= 1e-15 * std::max(1.0, std::abs(f)) && std::sqrt(dot(s, s)) < 1e-14) break;
  }
  return StartResult{std::move(x), f};
}

}  // namespace

double matching_objective_and_gradient(const MomentSpec& spec, int B, const std::vector<double>& x,
                                       std::vector<double>* gradient) {
  const int N = static_cast<int>(spec.products.size());
  if (x.size() != static_cast<std::size_t>(B * N + B)) {
    throw std::invalid_argument("matching objective: parameter vector has wrong size");
  }
  const BranchSet set = decode(spec, B, x);
  const auto& P = set.probabilities;
  double w2 = 0.0;
  for (int b = 0; b < B; ++b) w2 += x[static_cast<std::size_t>(B * N + b)] * x[static_cast<std::size_t>(B * N + b)];

  double f = 0.0;
  std::vector<double> dfdP(static_cast<std::size_t>(B), 0.0);
  if (gradient) gradient->assign(x.size(), 0.0);

  for (int n = 0; n < N; ++n) {
    const auto& tgt = spec.products[static_cast<std::size_t>(n)];
    auto xs = [&](int b) { return set.realizations[static_cast<std::size_t>(b)][static_cast<std::size_t>(n)]; };
    double m = 0.0;
    for (int b = 0; b < B; ++b) m += P[static_cast<std::size_t>(b)] * xs(b);
    double var = 0.0;
    double c3 = 0.0;
    for (int b = 0; b < B; ++b) {
      const double d = xs(b) - m;
      var += P[static_cast<std::size_t>(b)] * d * d;
      c3 += P[static_cast<std::size_t>(b)] * d * d * d;
    }
    const bool has_spread = var > 1e-300;
    const double skew = has_spread ? c3 / std::pow(var, 1.5) : 0.0;

    const double rm = m - tgt.value.mean;
    const double rv = var - tgt.value.variance;
    const double rs = skew - tgt.value.skewness;
    const double hm = tgt.weight[0];
    const double hv = spec.moments >= 2 ? tgt.weight[1] : 0.0;
    const double hs = spec.moments >= 3 ? tgt.weight[2] : 0.0;
    f += hm * rm * rm + hv * rv * rv + hs * rs * rs;
    if (!gradient) continue;

    // Coefficients of d(skew) = a * d(c3) + c * d(var).
    const double a = has_spread ? 1.0 / std::pow(var, 1.5) : 0.0;
    const double c = has_spread ? -1.5 * c3 / std::pow(var, 2.5) : 0.0;
    for (int b = 0; b < B; ++b) {
      const double pb = P[static_cast<std::size_t>(b)];
      const double d = xs(b) - m;
      // Partials w.r.t. the realization x_b (P fixed).
      const double dm_dx = pb;
      const double dv_dx = 2.0 * pb * d;
      const double dc3_dx = 3.0 * pb * (d * d - var);
      const double ds_dx = a * dc3_dx + c * dv_dx;
      const double df_dx = 2.0 * (hm * rm * dm_dx + hv * rv * dv_dx + hs * rs * ds_dx);
      (*gradient)[static_cast<std::size_t>(b * N + n)] += df_dx * xs(b);  // dx/dz = x
      // Partials w.r.t. P_b (x fixed, P treated as free).
      const double dm_dp = xs(b);
      const double dv_dp = d * d;
      const double dc3_dp = d * d * d - 3.0 * var * xs(b);
      const double ds_dp = a * dc3_dp + c * dv_dp;
      dfdP[static_cast<std::size_t>(b)] += 2.0 * (hm * rm * dm_dp + hv * rv * dv_dp + hs * rs * ds_dp);
    }
  }

  if (gradient) {
    double mean_g = 0.0;
    for (int b = 0; b < B; ++b) mean_g += P[static_cast<std::size_t>(b)] * dfdP[static_cast<std::size_t>(b)];
    for (int b = 0; b < B; ++b) {
      const double w = x[static_cast<std::size_t>(B * N + b)];
      (*gradient)[static_cast<std::size_t>(B * N + b)] = 2.0 * w / w2 * (dfdP[static_cast<std::size_t>(b)] - mean_g);
    }
  }
  return f;
}

MatchResult match_moments(const MomentSpec& spec, int branches, std::uint64_t seed, const MatchOptions& options) {
  check_spec(spec, branches);
  const int N = static_cast<int>(spec.products.size());
  const int B = branches;

  StartResult best;
  int accepted = 0;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 master(seq);
  for (int start = 0; start < std::max(options.starts, 1); ++start) {
    std::mt19937_64 rng(master());
    std::normal_distribution<double> spread(0.0, 0.6);
    std::uniform_real_distribution<double> weight(0.5, 1.5);
    std::vector<double> x(static_cast<std::size_t>(B * N + B));
    for (int i = 0; i < B * N; ++i) x[static_cast<std::size_t>(i)] = spread(rng);
    for (int b = 0; b < B; ++b) x[static_cast<std::size_t>(B * N + b)] = weight(rng);

    StartResult r = minimize_bfgs(spec, B, std::move(x), options);
    if (r.objective <= options.tolerance) ++accepted;
    if (r.objective < best.objective) best = std::move(r);
  }

  MatchResult out;
  out.branches = decode(spec, B, best.x);
  double total = 0.0;
  for (double p : out.branches.probabilities) total += p;
  for (double& p : out.branches.probabilities) p /= total;
  out.achieved = implied_moments(out.branches);
  out.objective = matching_objective(spec, out.achieved);
  out.converged = out.objective <= options.tolerance;
  out.underspecified = static_cast<std::size_t>(B * (N + 1) - 1) < spec.specification_count();
  out.accepted_starts = accepted;
  return out;
}

int ScenarioTree::products() const { return branch_sets.empty() ? 0 : branch_sets.begin()->second.products(); }

std::size_t ScenarioTree::path_count() const {
  std::size_t count = 1;
  for (Regime r : pattern) count *= branch_sets.at(r).branches();
  return count;
}

ScenarioFan ScenarioTree::to_fan() const {
  const int T = horizon();
  const int N = products();
  std::vector<const BranchSet*> stage;
  for (Regime r : pattern) {
    auto it = branch_sets.find(r);
    if (it == branch_sets.end()) throw std::invalid_argument(std::string("scenario tree: no branch set for regime ") + regime_name(r));
    stage.push_back(&it->second);
  }
  ScenarioFan fan;
  const std::size_t paths = path_count();
  fan.scenarios.reserve(paths);
  fan.probabilities.reserve(paths);
  std::vector<std::size_t> digit(static_cast<std::size_t>(T), 0);
  for (std::size_t path = 0; path < paths; ++path) {
    PeriodGrid grid(N, T);
    double prob = 1.0;
    for (int t = 1; t <= T; ++t) {
      const BranchSet& set = *stage[static_cast<std::size_t>(t - 1)];
      const std::size_t b = digit[static_cast<std::size_t>(t - 1)];
      prob *= set.probabilities[b];
      for (int n = 0; n < N; ++n) grid(n, t) = set.realizations[b][static_cast<std::size_t>(n)];
    }
    fan.scenarios.push_back(std::move(grid));
    fan.probabilities.push_back(prob);
    for (int t = T - 1; t >= 0; --t) {
      if (++digit[static_cast<std::size_t>(t)] < stage[static_cast<std::size_t>(t)]->branches()) break;
      digit[static_cast<std::size_t>(t)] = 0;
    }
  }
  return fan;
}

namespace {

void check_branch_set(const BranchSet& set, int products) {
  if (set.branches() == 0 || set.realizations.size() != set.branches()) {
    throw std::invalid_argument("branch set: one realization per probability required");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < set.branches(); ++b) {
    if (static_cast<int>(set.realizations[b].size()) != products) {
      throw std::invalid_argument("branch set: realization size must equal product count");
    }
    for (double d : set.realizations[b]) {
      if (!(d >= 0.0)) throw std::invalid_argument("branch set: demands must be >= 0");
    }
    if (!(set.probabilities[b] >= 0.0)) throw std::invalid_argument("branch set: probabilities must be >= 0");
    total += set.probabilities[b];
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("branch set: probabilities must sum to 1");
}

}  // namespace

ScenarioTree build_tree(const InstanceConfig& config, const std::map<Regime, BranchSet>& branch_sets) {
  require_valid(config);
  ScenarioTree tree;
  tree.pattern = config.demand_pattern;
  for (Regime r : tree.pattern) {
    auto it = branch_sets.find(r);
    if (it == branch_sets.end()) {
      throw std::invalid_argument(std::string("build_tree: missing branch set for regime ") + regime_name(r));
    }
    check_branch_set(it->second, config.n_products);
    tree.branch_sets.emplace(r, it->second);
  }
  return tree;
}

ScenarioTree with_pattern(const ScenarioTree& tree, const std::vector<Regime>& pattern) {
  ScenarioTree out = tree;
  out.pattern = pattern;
  for (Regime r : pattern) {
    if (!out.branch_sets.contains(r)) {
      throw std::invalid_argument(std::string("with_pattern: tree has no branch set for regime ") + regime_name(r));
    }
  }
  return out;
}

nlohmann::json tree_to_json(const ScenarioTree& tree) {
  nlohmann::json regimes = nlohmann::json::object();
  for (const auto& [regime, set] : tree.branch_sets) {
    regimes[regime_name(regime)] = {{"probabilities", set.probabilities}, {"realizations", set.realizations}};
  }
  nlohmann::json pattern = nlohmann::json::array();
  for (Regime r : tree.pattern) pattern.push_back(static_cast<int>(r));
  return {{"regimes", std::move(regimes)}, {"pattern", std::move(pattern)}};
}

ScenarioTree tree_from_json(const nlohmann::json& doc) {
  ScenarioTree tree;
  for (int flag : doc.at("pattern").get<std::vector<int>>()) tree.pattern.push_back(regime_from_index(flag));
  int products = -1;
  for (const auto& [name, body] : doc.at("regimes").items()) {
    Regime r;
    if (name == "normal" || name == "0") {
      r = Regime::Normal;
    } else if (name == "booming" || name == "1") {
      r = Regime::Booming;
    } else {
      throw std::invalid_argument("scenario tree: unknown regime '" + name + "'");
    }
    BranchSet set;
    set.probabilities = body.at("probabilities").get<std::vector<double>>();
    set.realizations = body.at("realizations").get<std::vector<std::vector<double>>>();
    if (products < 0) products = set.products();
    check_branch_set(set, products);
    tree.branch_sets.emplace(r, std::move(set));
  }
  for (Regime r : tree.pattern) {
    if (!tree.branch_sets.contains(r)) {
      throw std::invalid_argument(std::string("scenario tree: pattern uses regime without branch set: ") + regime_name(r));
    }
  }
  return tree;
}

BranchSet rounded_for_display(const BranchSet& set) {
  BranchSet out = set;
  for (auto& row : out.realizations) {
    for (double& d : row) d = std::round(d);
  }
  return out;
}

}  // namespace ccplan::gen
