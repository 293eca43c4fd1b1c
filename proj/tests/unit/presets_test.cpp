#include <gtest/gtest.h>
#include <fstream>

#include "ccplan/config_io.hpp"
#include "ccplan/presets.hpp"

namespace ccplan::presets {
namespace {

TEST(Presets, RetailInstanceValues) {
  const auto c = retail_instance();
  EXPECT_TRUE(validate(c).empty());
  EXPECT_EQ(c.n_products, 3);
  EXPECT_EQ(c.horizon, 6);
  EXPECT_EQ(c.price, (std::vector<double>{189, 144, 239}));
  EXPECT_EQ(c.unit_cost, (std::vector<double>{120, 70, 150}));
  EXPECT_EQ(c.initial_cash, 20000.0);
  EXPECT_EQ(c.receipt_delay, 2);
  EXPECT_EQ(c.discount_rate, 0.01);
  EXPECT_EQ(c.loan_rate, 0.015);
  EXPECT_EQ(c.loan_limit, 10000.0);
  EXPECT_EQ(c.overhead, std::vector<double>(6, 2000.0));
  const std::vector<Regime> pattern{Regime::Normal, Regime::Normal, Regime::Normal,
                                    Regime::Normal, Regime::Booming, Regime::Booming};
  EXPECT_EQ(c.demand_pattern, pattern);
  EXPECT_EQ(c.params(0, Regime::Normal).mu, 3.66);
  EXPECT_EQ(c.params(0, Regime::Normal).sigma, 0.60);
}

TEST(Presets, ShippedInstanceFileMatches) {
  const auto shipped = load_config(std::filesystem::path(CCPLAN_SOURCE_DIR) / "data" / "paper_instance.json");
  EXPECT_EQ(to_json(shipped), to_json(retail_instance()));
}

TEST(Presets, ShippedTreesMatch) {
  const auto trees = retail_trees();
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto path = std::filesystem::path(CCPLAN_SOURCE_DIR) / "data" / "trees" / ("tree" + std::to_string(i + 1) + ".json");
    std::ifstream in(path);
    ASSERT_TRUE(in) << path;
    const auto doc = nlohmann::json::parse(in);
    EXPECT_EQ(gen::tree_to_json(gen::tree_from_json(doc)), gen::tree_to_json(trees[i]));
  }
}

TEST(Presets, ParameterGrids) {
  EXPECT_EQ(initial_cash_values().size(), 7u);
  EXPECT_EQ(initial_cash_values().front().number, 10000.0);
  EXPECT_EQ(initial_cash_values().back().number, 40000.0);
  EXPECT_EQ(receipt_delay_values().size(), 5u);
  EXPECT_EQ(overhead_values().front().number, 0.0);
  EXPECT_EQ(overhead_values().back().number, 4500.0);
  EXPECT_EQ(pattern_values().size(), 4u);
  EXPECT_EQ(pattern_values()[1].label(), "000011");
  EXPECT_EQ(sweep_sizes(), (std::vector<std::size_t>{20, 40, 60, 80, 100, 120, 140, 160, 180}));
}

}  // namespace
}  // namespace ccplan::presets
