#include "ccplan/config_io.hpp"

#include <set>
#include <stdexcept>

#include "ccplan/text_io.hpp"

namespace ccplan {

using nlohmann::json;

namespace {

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields{
      "n_products",     "horizon",       "initial_cash", "initial_inventory", "price",
      "unit_cost",      "overhead",      "receipt_delay", "discount_rate",    "loan_rate",
      "loan_limit",     "loan_settlement", "demand_pattern", "regime_params"};
  return fields;
}

template <typename T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw std::invalid_argument(std::string("instance: missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance: field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const InstanceConfig& c) {
  json pattern = json::array();
  for (Regime r : c.demand_pattern) pattern.push_back(static_cast<int>(r));
  json params = json::array();
  for (const auto& per_product : c.regime_params) {
    json row = json::array();
    for (const auto& p : per_product) row.push_back({{"mu", p.mu}, {"sigma", p.sigma}});
    params.push_back(std::move(row));
  }
  return json{{"n_products", c.n_products},
              {"horizon", c.horizon},
              {"initial_cash", c.initial_cash},
              {"initial_inventory", c.initial_inventory},
              {"price", c.price},
              {"unit_cost", c.unit_cost},
              {"overhead", c.overhead},
              {"receipt_delay", c.receipt_delay},
              {"discount_rate", c.discount_rate},
              {"loan_rate", c.loan_rate},
              {"loan_limit", c.loan_limit},
              {"loan_settlement", loan_settlement_name(c.loan_settlement)},
              {"demand_pattern", std::move(pattern)},
              {"regime_params", std::move(params)}};
}

InstanceConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("instance: document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_fields().contains(key)) throw std::invalid_argument("instance: unknown field '" + key + "'");
  }
  InstanceConfig c;
  c.n_products = required<int>(doc, "n_products");
  c.horizon = required<int>(doc, "horizon");
  c.initial_cash = required<double>(doc, "initial_cash");
  c.initial_inventory = required<std::vector<double>>(doc, "initial_inventory");
  c.price = required<std::vector<double>>(doc, "price");
  c.unit_cost = required<std::vector<double>>(doc, "unit_cost");
  c.overhead = required<std::vector<double>>(doc, "overhead");
  c.receipt_delay = required<int>(doc, "receipt_delay");
  c.discount_rate = required<double>(doc, "discount_rate");
  c.loan_rate = required<double>(doc, "loan_rate");
  c.loan_limit = required<double>(doc, "loan_limit");
  if (doc.contains("loan_settlement")) c.loan_settlement = parse_loan_settlement(required<std::string>(doc, "loan_settlement"));
  for (int flag : required<std::vector<int>>(doc, "demand_pattern")) c.demand_pattern.push_back(regime_from_index(flag));

  const json& params = doc.at("regime_params");
  if (!params.is_array()) throw std::invalid_argument("instance: regime_params must be an array");
  for (const json& row : params) {
    if (!row.is_array() || row.size() != kRegimeCount) {
      throw std::invalid_argument("instance: regime_params rows need one {mu, sigma} per regime");
    }
    std::array<LognormalParams, kRegimeCount> entry{};
    for (std::size_t r = 0; r < kRegimeCount; ++r) {
      entry[r].mu = row[r].at("mu").get<double>();
      entry[r].sigma = row[r].at("sigma").get<double>();
    }
    c.regime_params.push_back(entry);
  }
  return c;
}

InstanceConfig load_config(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("instance " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void save_config(const std::filesystem::path& path, const InstanceConfig& config) {
  write_text_file(path, dump_json(to_json(config)));
}

json grid_to_json(const PeriodGrid& grid, int first_period) {
  json rows = json::array();
  for (int n = 0; n < grid.products(); ++n) {
    json row = json::array();
    for (int t = first_period; t <= grid.last_period(); ++t) row.push_back(grid(n, t));
    rows.push_back(std::move(row));
  }
  return rows;
}

PeriodGrid grid_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
    throw std::invalid_argument("demand grid must be a non-empty array of per-product arrays");
  }
  const int N = static_cast<int>(rows.size());
  const int T = static_cast<int>(rows[0].size());
  PeriodGrid grid(N, T);
  for (int n = 0; n < N; ++n) {
    if (!rows[static_cast<std::size_t>(n)].is_array() || rows[static_cast<std::size_t>(n)].size() != static_cast<std::size_t>(T)) {
      throw std::invalid_argument("demand grid rows must all have the same length");
    }
    for (int t = 1; t <= T; ++t) grid(n, t) = rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(t - 1)].get<double>();
  }
  return grid;
}

json trajectory_to_json(const Trajectory& tr) {
  json violations = json::array();
  for (const auto& v : tr.violations) {
    violations.push_back({{"kind", violation_name(v.kind)}, {"period", v.period}, {"excess", v.excess}});
  }
  return json{{"orders", grid_to_json(tr.orders)},
              {"loans", grid_to_json(tr.loans)},
              {"inventory", grid_to_json(tr.inventory, 0)},
              {"sales", grid_to_json(tr.sales)},
              {"revenue", grid_to_json(tr.revenue)},
              {"cash", tr.cash},
              {"final_cash", tr.final_cash},
              {"violations", std::move(violations)}};
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace ccplan
