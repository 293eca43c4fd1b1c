#include "ccplan/presets.hpp"

namespace ccplan::presets {

InstanceConfig retail_instance() {
  InstanceConfig c;
  c.n_products = 3;
  c.horizon = 6;
  c.initial_cash = 20000.0;
  c.initial_inventory = {0.0, 0.0, 0.0};
  c.price = {189.0, 144.0, 239.0};
  c.unit_cost = {120.0, 70.0, 150.0};
  c.overhead.assign(6, 2000.0);
  c.receipt_delay = 2;
  c.discount_rate = 0.01;
  c.loan_rate = 0.015;
  c.loan_limit = 10000.0;
  c.demand_pattern = {Regime::Normal, Regime::Normal, Regime::Normal,
                      Regime::Normal, Regime::Booming, Regime::Booming};
  c.regime_params = {
      {{{3.66, 0.60}, {5.79, 0.26}}},
      {{{4.13, 0.66}, {5.91, 0.33}}},
      {{{3.54, 0.46}, {4.96, 0.18}}},
  };
  return c;
}

namespace {

gen::BranchSet branches(std::vector<double> probabilities, std::vector<std::vector<double>> realizations) {
  return gen::BranchSet{std::move(realizations), std::move(probabilities)};
}

}  // namespace

std::vector<gen::ScenarioTree> retail_trees() {
  const auto config = retail_instance();
  std::vector<std::map<Regime, gen::BranchSet>> sets = {
      {{Regime::Normal, branches({0.1, 0.598, 0.302}, {{133, 246, 87}, {30, 58, 39}, {49, 57, 20}})},
       {Regime::Booming, branches({0.286, 0.318, 0.396}, {{291, 597, 123}, {468, 322, 124}, {268, 293, 177}})}},
      {{Regime::Normal, branches({0.102, 0.694, 0.204}, {{134, 246, 88}, {32, 59, 37}, {54, 56, 17}})},
       {Regime::Booming, branches({0.185, 0.556, 0.259}, {{345, 341, 156}, {269, 302, 123}, {481, 611, 184}})}},
      {{Regime::Normal, branches({0.103, 0.476, 0.421}, {{134, 246, 87}, {28, 58, 24}, {46, 58, 43}})},
       {Regime::Booming, branches({0.266, 0.34, 0.394}, {{481, 608, 134}, {317, 311, 181}, {259, 309, 121}})}},
  };
  std::vector<gen::ScenarioTree> out;
  for (const auto& s : sets) out.push_back(gen::build_tree(config, s));
  return out;
}

namespace {

std::vector<eval::ParameterValue> numbers(double first, double last, double step) {
  std::vector<eval::ParameterValue> out;
  for (double v = first; v <= last + 1e-9; v += step) out.push_back({v, {}});
  return out;
}

}  // namespace

std::vector<eval::ParameterValue> initial_cash_values() { return numbers(10000, 40000, 5000); }
std::vector<eval::ParameterValue> receipt_delay_values() { return numbers(0, 4, 1); }

std::vector<eval::ParameterValue> overhead_values() {
  auto out = numbers(1000, 4500, 500);
  out.insert(out.begin(), eval::ParameterValue{0.0, {}});
  return out;
}

std::vector<eval::ParameterValue> pattern_values() {
  const auto N = Regime::Normal;
  const auto B = Regime::Booming;
  return {{0.0, {N, N, N, N, N, N}}, {0.0, {N, N, N, N, B, B}}, {0.0, {B, B, N, N, N, N}}, {0.0, {B, B, B, B, B, B}}};
}

std::vector<std::size_t> sweep_sizes() {
  std::vector<std::size_t> out;
  for (std::size_t k = 20; k <= 180; k += 20) out.push_back(k);
  return out;
}

}  // namespace ccplan::presets
