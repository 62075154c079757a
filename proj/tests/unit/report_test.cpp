#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "basketflex/report.hpp"
#include "error_helpers.hpp"
#include "scenario_fixture.hpp"

using namespace basketflex;

namespace {

ScenarioResult bundled_result(std::optional<Month> fixed = {}) {
  auto b = bftest::load_bundled_scenario();
  b.config.fixed_weight_month = fixed;
  return fixed ? run_fixed_weight(b.config, b.weights, b.prices, b.panel, b.crosswalk)
               : run_scenario(b.config, b.weights, b.prices, b.panel, b.crosswalk);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

template <typename Writer>
std::string render(Writer writer, const ScenarioResult& r) {
  std::ostringstream out;
  writer(out, r);
  return out.str();
}

}  // namespace

TEST(ScenarioJson, RoundTripIsLossless) {
  for (auto fixed : {std::optional<Month>{}, std::optional<Month>{Month(2020, 4)}}) {
    const auto r = bundled_result(fixed);
    const auto text = scenario_to_json(r);
    const auto back = scenario_from_json(text, "r.json");
    EXPECT_EQ(scenario_to_json(back), text);
    ASSERT_EQ(back.periods, r.periods);
    for (std::size_t k = 0; k < r.periods.size(); ++k) {
      EXPECT_EQ(back.bias[k].monthly_pp, r.bias[k].monthly_pp);
      EXPECT_EQ(back.adjusted_weights[k].shares(), r.adjusted_weights[k].shares());
      EXPECT_EQ(back.adjusted[k].contributions, r.adjusted[k].contributions);
    }
    EXPECT_EQ(back.config.country_label, r.config.country_label);
    EXPECT_EQ(back.config.fixed_weight_month, r.config.fixed_weight_month);
  }
}

TEST(ScenarioJson, MetadataAndAnnotations) {
  const auto doc = nlohmann::json::parse(scenario_to_json(bundled_result(Month(2020, 4))));
  EXPECT_EQ(doc["schema"], "basketflex.scenario/1");
  EXPECT_EQ(doc["metadata"]["variant"], "fixed-weight:2020-04");
  EXPECT_EQ(doc["metadata"]["fixed_weight_month"], "2020-04");
  EXPECT_EQ(doc["metadata"]["lockdown_windows"].size(), 3u);
  EXPECT_EQ(doc["metadata"]["lockdown_windows"][0]["start"], "2020-03-14");
  EXPECT_EQ(doc["periods"].size(), doc["in_lockdown"].size());
}

TEST(ScenarioJson, RejectsMalformedDocuments) {
  EXPECT_EQ(bftest::code_of([] { scenario_from_json("{", "x.json"); }), ErrorCode::SchemaError);
  EXPECT_EQ(bftest::code_of([] { scenario_from_json("{\"schema\":\"other\"}", "x.json"); }), ErrorCode::SchemaError);
  EXPECT_EQ(bftest::code_of([] { scenario_from_json("[]", "x.json"); }), ErrorCode::SchemaError);
}

TEST(TidyCsv, HeadersAndRowCounts) {
  const auto r = bundled_result();
  const auto n = r.periods.size();
  const auto items = r.official_weights.size();

  auto inflation = lines(render(write_inflation_csv, r));
  EXPECT_EQ(inflation[0], "variant,period,series,monthly_pct,annual_pct,lockdown");
  EXPECT_EQ(inflation.size(), 1 + 4 * n);

  auto weights = lines(render(write_weights_csv, r));
  EXPECT_EQ(weights[0], "variant,period,basket,item,weight,lockdown");
  EXPECT_EQ(weights.size(), 1 + 2 * n * items);

  auto contributions = lines(render(write_contributions_csv, r));
  EXPECT_EQ(contributions[0], "variant,period,series,item,contribution_pp");
  EXPECT_EQ(contributions.size(), 1 + n * (2 * items + 2 * (items - 3)));

  auto bias = lines(render(write_bias_csv, r));
  EXPECT_EQ(bias[0], "variant,period,measure,monthly_bias_pp,annual_bias_pp,lockdown");
  EXPECT_EQ(bias.size(), 1 + 2 * n);
  // Headline then core per period; 2020-02 is outside every window, 2020-03
  // inside the first.
  EXPECT_EQ(bias[1].substr(0, 24), "dynamic,2020-02,headline");
  EXPECT_EQ(bias[1].back(), '0');
  EXPECT_EQ(bias[3].back(), '1');
}

TEST(TidyCsv, FixedVariantTagsEveryRow) {
  const auto r = bundled_result(Month(2020, 4));
  for (const auto& text : {render(write_inflation_csv, r), render(write_weights_csv, r),
                           render(write_contributions_csv, r), render(write_bias_csv, r)}) {
    auto rows = lines(text);
    for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(rows[k].rfind("fixed-weight:2020-04,", 0), 0u);
  }
}

TEST(Comparison, CsvAndJson) {
  std::vector<ScenarioResult> results{bundled_result()};
  const auto table = compare_countries(results, Month(2020, 4));
  auto csv = lines(comparison_to_csv(table));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], "period,country,monthly_bias_pp,annual_bias_pp,sign");
  EXPECT_EQ(csv[1].rfind("2020-04,Israel (synthetic),-", 0), 0u);
  EXPECT_EQ(csv[1].substr(csv[1].size() - 10), ",,negative");
  const auto doc = nlohmann::json::parse(comparison_to_json(table));
  EXPECT_EQ(doc["period"], "2020-04");
  EXPECT_EQ(doc["rows"][0]["sign"], "negative");
  EXPECT_TRUE(doc["rows"][0]["annual_bias_pp"].is_null());
}
