#pragma once

#include <vector>

#include "ccplan/core.hpp"
#include "ccplan/evaluation.hpp"
#include "ccplan/scenario_gen.hpp"

namespace ccplan::presets {

// Three-product online retail instance: keyboard, mouse, headset over six
// periods with booming demand in the last two.
InstanceConfig retail_instance();

// The three published stationary trees (three branches per regime),
// laid over the retail instance's pattern.
std::vector<gen::ScenarioTree> retail_trees();

// Parameter grids used by the reproduction battery.
std::vector<eval::ParameterValue> initial_cash_values();   // 10000..40000 step 5000
std::vector<eval::ParameterValue> receipt_delay_values();  // 0..4
std::vector<eval::ParameterValue> overhead_values();       // 0, 1000..4500 step 500
std::vector<eval::ParameterValue> pattern_values();        // four demand patterns
std::vector<std::size_t> sweep_sizes();                     // 20..180 step 20

}  // namespace ccplan::presets
