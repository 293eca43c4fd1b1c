#include <gtest/gtest.h>

#include <sstream>

#include "ccplan/config_io.hpp"
#include "ccplan/presets.hpp"
#include "ccplan/scenario.hpp"
#include "support/fixtures.hpp"

namespace ccplan {
namespace {

TEST(ConfigIo, RoundTripsRetailInstance) {
  const auto c = presets::retail_instance();
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_TRUE(validate(back).empty());
}

TEST(ConfigIo, SettlementDefaultsToGrossWhenAbsent) {
  auto doc = to_json(testing::small_instance(1, 2));
  doc.erase("loan_settlement");
  EXPECT_EQ(config_from_json(doc).loan_settlement, LoanSettlement::Gross);
  doc["loan_settlement"] = "net";
  EXPECT_EQ(config_from_json(doc).loan_settlement, LoanSettlement::Net);
  doc["loan_settlement"] = "half";
  EXPECT_THROW(config_from_json(doc), std::invalid_argument);
}

TEST(ConfigIo, RejectsUnknownAndMissingFields) {
  auto doc = to_json(testing::small_instance(1, 2));
  doc["lead_time"] = 1;
  EXPECT_THROW(config_from_json(doc), std::invalid_argument);
  doc.erase("lead_time");
  doc.erase("price");
  EXPECT_THROW(config_from_json(doc), std::invalid_argument);
}

TEST(ConfigIo, RejectsBadRegimeFlag) {
  auto doc = to_json(testing::small_instance(1, 2));
  doc["demand_pattern"] = {0, 2};
  EXPECT_THROW(config_from_json(doc), std::invalid_argument);
}

TEST(FanCsv, RoundTripsExactly) {
  std::mt19937_64 rng(5);
  const auto fan = testing::random_tree_fan(rng, 2, 3, 2);
  std::stringstream ss;
  write_fan_csv(ss, fan);
  const auto back = read_fan_csv(ss);
  ASSERT_EQ(back.size(), fan.size());
  for (std::size_t s = 0; s < fan.size(); ++s) {
    EXPECT_EQ(back.scenarios[s], fan.scenarios[s]);
    EXPECT_EQ(back.probabilities[s], fan.probabilities[s]);
  }
}

TEST(Fan, CheckFlagsBadProbabilities) {
  ScenarioFan fan = single_scenario_fan(testing::grid({{1, 2}}));
  EXPECT_NO_THROW(fan.check());
  fan.probabilities[0] = 0.5;
  EXPECT_THROW(fan.check(), std::invalid_argument);
}

TEST(Fan, DuplicatesAreReported) {
  ScenarioFan fan;
  fan.scenarios = {testing::grid({{1}}), testing::grid({{2}}), testing::grid({{1}})};
  fan.probabilities = {0.2, 0.3, 0.5};
  EXPECT_EQ(fan.duplicates(), std::vector<std::size_t>{2});
  EXPECT_DOUBLE_EQ(fan.mean()(0, 1), 0.2 + 0.6 + 0.5);
}

}  // namespace
}  // namespace ccplan
