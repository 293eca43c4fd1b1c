#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "ccplan/core.hpp"

namespace ccplan {

// Instance documents use the InstanceConfig field names verbatim. Regime
// parameters are [[{"mu":..,"sigma":..} normal, {..} booming], ...] per
// product and demand_pattern holds 0/1 flags. See docs/instance.schema.json.
nlohmann::json to_json(const InstanceConfig& config);
InstanceConfig config_from_json(const nlohmann::json& doc);

InstanceConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const InstanceConfig& config);

// N x T grid as a nested array, one inner array of T values per product.
nlohmann::json grid_to_json(const PeriodGrid& grid, int first_period = 1);
PeriodGrid grid_from_json(const nlohmann::json& rows);

nlohmann::json trajectory_to_json(const Trajectory& tr);

// Stable text form used for every JSON artifact we write.
std::string dump_json(const nlohmann::json& doc);

}  // namespace ccplan
