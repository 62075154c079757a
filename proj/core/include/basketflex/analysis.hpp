#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "basketflex/basket.hpp"
#include "basketflex/crosswalk.hpp"
#include "basketflex/ingest.hpp"

namespace basketflex {

struct DateRange {
  std::chrono::year_month_day start;
  std::chrono::year_month_day end;  // inclusive

  bool overlaps(Month m) const;
};

enum class AnnualMethod {
  // Compound the trailing twelve monthly rates.
  Chained,
  // Re-price the basket in force twelve months earlier.
  FixedBase,
};

std::string_view to_string(AnnualMethod method);
std::optional<AnnualMethod> parse_annual_method(std::string_view text);

struct ScenarioConfig {
  std::vector<Month> base_months;
  std::set<ItemId> core_exclusions;
  std::optional<Month> fixed_weight_month;
  // Annotations only; never change results.
  std::vector<DateRange> lockdown_windows;
  std::string country_label;
  AnnualMethod annual_method = AnnualMethod::Chained;
  ApplyOptions apply_options;

  // Throws InvalidConfig.
  void validate() const;
};

struct ScenarioResult {
  ScenarioConfig config;
  std::vector<Month> periods;
  std::vector<bool> in_lockdown;  // aligned with periods

  WeightVector official_weights;
  std::vector<WeightVector> adjusted_weights;  // aligned with periods

  std::vector<InflationPoint> official;
  std::vector<InflationPoint> adjusted;
  std::vector<InflationPoint> core_official;
  std::vector<InflationPoint> core_adjusted;

  std::vector<BiasPoint> bias;
  std::vector<BiasPoint> core_bias;

  bool fixed_weight() const { return config.fixed_weight_month.has_value(); }
  // "dynamic", or "fixed-weight:YYYY-MM" for the robustness variant.
  std::string variant() const;
  // Position of `m` on the period axis.
  std::optional<std::size_t> index_of(Month m) const;
};

// Adjusted basket re-derived every month from expenditure data. Any
// fixed_weight_month in the config is ignored. Throws NoOverlappingPeriods
// plus errors from ingest, crosswalk and basket operations.
ScenarioResult run_scenario(const ScenarioConfig& config, const WeightVector& official, const PriceSet& prices,
                            const ExpenditurePanel& panel, const CrosswalkSpec& spec);

// Adjusted basket frozen at config.fixed_weight_month. Throws
// FixedMonthOutOfRange when that month is missing or outside the panel.
ScenarioResult run_fixed_weight(const ScenarioConfig& config, const WeightVector& official, const PriceSet& prices,
                                const ExpenditurePanel& panel, const CrosswalkSpec& spec);

struct ComparisonRow {
  std::string country;
  double monthly_bias_pp = 0.0;
  std::optional<double> annual_bias_pp;
  // Sign of the monthly bias: "positive", "negative" or "zero".
  std::string sign;
};

struct ComparisonTable {
  Month period;
  std::vector<ComparisonRow> rows;  // ascending monthly bias, ties by country
};

// Headline bias of each scenario at `period`. Throws PeriodNotCovered(country).
ComparisonTable compare_countries(std::span<const ScenarioResult> results, Month period);

}  // namespace basketflex
