#include "basketflex/analysis.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "basketflex/error.hpp"

namespace basketflex {

bool DateRange::overlaps(Month m) const {
  return std::chrono::sys_days{start} <= std::chrono::sys_days{m.last_day()} &&
         std::chrono::sys_days{end} >= std::chrono::sys_days{m.first_day()};
}

std::string_view to_string(AnnualMethod method) {
  return method == AnnualMethod::Chained ? "chained" : "fixed-base";
}

std::optional<AnnualMethod> parse_annual_method(std::string_view text) {
  if (text == "chained") return AnnualMethod::Chained;
  if (text == "fixed-base") return AnnualMethod::FixedBase;
  return std::nullopt;
}

void ScenarioConfig::validate() const {
  if (base_months.empty()) throw Error(ErrorCode::InvalidConfig, "at least one base month is required");
  for (std::size_t k = 0; k < lockdown_windows.size(); ++k) {
    const auto& w = lockdown_windows[k];
    if (std::chrono::sys_days{w.start} > std::chrono::sys_days{w.end}) {
      throw Error(ErrorCode::InvalidConfig,
                  fmt::format("lockdown window {}..{} ends before it starts", format_date(w.start), format_date(w.end)));
    }
    if (k > 0 && std::chrono::sys_days{w.start} <= std::chrono::sys_days{lockdown_windows[k - 1].end}) {
      throw Error(ErrorCode::InvalidConfig,
                  fmt::format("lockdown window starting {} overlaps or precedes the previous one",
                              format_date(w.start)));
    }
  }
}

std::string ScenarioResult::variant() const {
  return config.fixed_weight_month ? "fixed-weight:" + config.fixed_weight_month->to_string() : "dynamic";
}

std::optional<std::size_t> ScenarioResult::index_of(Month m) const {
  auto it = std::find(periods.begin(), periods.end(), m);
  if (it == periods.end()) return std::nullopt;
  return static_cast<std::size_t>(it - periods.begin());
}

namespace {

// Months at which the panel and every weighted item's price series overlap.
std::vector<Month> period_axis(const WeightVector& official, const PriceSet& prices, const ExpenditurePanel& panel) {
  if (panel.months().empty()) throw Error(ErrorCode::NoOverlappingPeriods, "expenditure panel is empty");
  Month lo = panel.months().front();
  Month hi = panel.months().back();
  for (const auto& [item, _] : official.shares()) {
    auto it = prices.find(item);
    if (it == prices.end()) {
      throw Error(ErrorCode::MissingPriceRelative, fmt::format("no price series for item '{}'", item.id()),
                  {item.id()});
    }
    lo = std::max(lo, it->second.first());
    hi = std::min(hi, it->second.last());
  }
  if (lo > hi) {
    throw Error(ErrorCode::NoOverlappingPeriods, "price series and expenditure panel share no month");
  }
  std::vector<Month> axis;
  for (Month m = lo; m <= hi; m = m.next()) axis.push_back(m);
  return axis;
}

std::vector<InflationPoint> annualize(std::vector<InflationPoint> series, AnnualMethod method,
                                      const std::vector<WeightVector>& baskets, const PriceSet& prices) {
  if (method == AnnualMethod::Chained) return chain_annual(std::move(series));
  for (std::size_t k = 0; k < series.size(); ++k) {
    series[k].annual_pct.reset();
    if (k >= 11) series[k].annual_pct = fixed_base_annual_pct(baskets[k - 11], prices, series[k].period);
  }
  return series;
}

ScenarioResult run(const ScenarioConfig& config, const WeightVector& official, const PriceSet& prices,
                   const ExpenditurePanel& panel, const CrosswalkSpec& spec, std::optional<Month> freeze) {
  config.validate();

  const auto report = validate(spec, official.items(), panel.categories());
  if (!report.ok()) {
    std::vector<std::string> parts;
    std::vector<std::string> subjects;
    for (const auto& issue : report.issues) {
      parts.push_back(fmt::format("{}: {}", to_string(issue.kind), issue.message));
      subjects.emplace_back(to_string(issue.kind));
    }
    throw Error(ErrorCode::SpecInvalid, fmt::format("crosswalk spec is not usable: {}", fmt::join(parts, "; ")),
                subjects);
  }

  const auto base = base_period(panel, config.base_months);
  const auto relatives = apply(spec, panel, base, config.apply_options);
  std::map<Month, const ExpenditureRelativeVector*> relatives_by_month;
  for (const auto& r : relatives) relatives_by_month.emplace(r.period, &r);

  const WeightVector official_core = exclude_items(official, config.core_exclusions);
  const auto axis = period_axis(official, prices, panel);

  std::optional<WeightVector> frozen;
  if (freeze) {
    auto it = relatives_by_month.find(*freeze);
    if (it == relatives_by_month.end()) {
      throw Error(ErrorCode::FixedMonthOutOfRange,
                  fmt::format("fixed-weight month {} is outside the expenditure panel ({}..{})", freeze->to_string(),
                              panel.months().front().to_string(), panel.months().back().to_string()),
                  {freeze->to_string()});
    }
    frozen = adjusted_weights(official, *it->second);
  }

  std::vector<WeightVector> adjusted_path;
  std::vector<WeightVector> official_core_path;
  std::vector<WeightVector> adjusted_core_path;
  std::vector<WeightVector> official_path;
  std::vector<InflationPoint> official_series;
  std::vector<InflationPoint> adjusted_series;
  std::vector<InflationPoint> core_official_series;
  std::vector<InflationPoint> core_adjusted_series;
  std::vector<bool> in_lockdown;

  PriceSet core_prices;
  for (const auto& [item, series] : prices) {
    if (!config.core_exclusions.contains(item)) core_prices.emplace(item, series);
  }

  for (Month m : axis) {
    WeightVector adjusted =
        frozen ? frozen->with_period(m) : adjusted_weights(official, *relatives_by_month.at(m));
    WeightVector adjusted_core = exclude_items(adjusted, config.core_exclusions);

    official_series.push_back(monthly_inflation(official, prices, m));
    adjusted_series.push_back(monthly_inflation(adjusted, prices, m));

    core_official_series.push_back(monthly_inflation(official_core, core_prices, m));
    core_adjusted_series.push_back(monthly_inflation(adjusted_core, core_prices, m));

    in_lockdown.push_back(std::any_of(config.lockdown_windows.begin(), config.lockdown_windows.end(),
                                      [m](const DateRange& w) { return w.overlaps(m); }));
    official_path.push_back(official.with_period(m));
    official_core_path.push_back(official_core.with_period(m));
    adjusted_core_path.push_back(std::move(adjusted_core));
    adjusted_path.push_back(std::move(adjusted));
  }

  const auto method = config.annual_method;
  official_series = annualize(std::move(official_series), method, official_path, prices);
  adjusted_series = annualize(std::move(adjusted_series), method, adjusted_path, prices);
  core_official_series = annualize(std::move(core_official_series), method, official_core_path, prices);
  core_adjusted_series = annualize(std::move(core_adjusted_series), method, adjusted_core_path, prices);

  auto bias = weighting_bias(official_series, adjusted_series);
  auto core_bias = weighting_bias(core_official_series, core_adjusted_series);

  ScenarioConfig echoed = config;
  echoed.fixed_weight_month = freeze;
  return ScenarioResult{std::move(echoed),
                        axis,
                        std::move(in_lockdown),
                        official,
                        std::move(adjusted_path),
                        std::move(official_series),
                        std::move(adjusted_series),
                        std::move(core_official_series),
                        std::move(core_adjusted_series),
                        std::move(bias),
                        std::move(core_bias)};
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, const WeightVector& official, const PriceSet& prices,
                            const ExpenditurePanel& panel, const CrosswalkSpec& spec) {
  return run(config, official, prices, panel, spec, std::nullopt);
}

ScenarioResult run_fixed_weight(const ScenarioConfig& config, const WeightVector& official, const PriceSet& prices,
                                const ExpenditurePanel& panel, const CrosswalkSpec& spec) {
  if (!config.fixed_weight_month) {
    throw Error(ErrorCode::FixedMonthOutOfRange, "no fixed-weight month configured");
  }
  return run(config, official, prices, panel, spec, config.fixed_weight_month);
}

ComparisonTable compare_countries(std::span<const ScenarioResult> results, Month period) {
  ComparisonTable table;
  table.period = period;
  for (const auto& result : results) {
    const auto k = result.index_of(period);
    if (!k) {
      throw Error(ErrorCode::PeriodNotCovered,
                  fmt::format("scenario '{}' does not cover {}", result.config.country_label, period.to_string()),
                  {result.config.country_label, period.to_string()});
    }
    const auto& b = result.bias[*k];
    ComparisonRow row;
    row.country = result.config.country_label;
    row.monthly_bias_pp = b.monthly_pp;
    row.annual_bias_pp = b.annual_pp;
    row.sign = b.monthly_pp > 0.0 ? "positive" : (b.monthly_pp < 0.0 ? "negative" : "zero");
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.monthly_bias_pp != b.monthly_bias_pp) return a.monthly_bias_pp < b.monthly_bias_pp;
    return a.country < b.country;
  });
  return table;
}

}  // namespace basketflex
