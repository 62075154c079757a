#include "basketflex/basket.hpp"

#include <cmath>

#include <fmt/format.h>

#include "basketflex/error.hpp"

namespace basketflex {

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  return fmt::format("{}", fmt::join(ids, ", "));
}

template <typename MapA, typename MapB>
void require_same_items(const MapA& expected, const MapB& actual, std::string_view what) {
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  for (const auto& [item, _] : expected) {
    if (!actual.contains(item)) missing.push_back(item.id());
  }
  for (const auto& [item, _] : actual) {
    if (!expected.contains(item)) extra.push_back(item.id());
  }
  if (missing.empty() && extra.empty()) return;
  std::vector<std::string> subjects;
  for (const auto& m : missing) subjects.push_back("missing:" + m);
  for (const auto& e : extra) subjects.push_back("extra:" + e);
  throw Error(ErrorCode::ItemSetMismatch,
              fmt::format("{}: item sets differ (missing: [{}]; extra: [{}])", what, join_ids(missing),
                          join_ids(extra)),
              std::move(subjects));
}

}  // namespace

ItemId::ItemId(std::string id, std::string label) : id_(std::move(id)), label_(std::move(label)) {
  if (id_.empty()) throw Error(ErrorCode::EmptyIdentifier, "item identifier must be non-empty");
}

WeightVector WeightVector::normalize(const std::map<ItemId, double>& raw, std::optional<Month> period) {
  if (raw.empty()) throw Error(ErrorCode::EmptyInput, "weight vector has no entries");
  double total = 0.0;
  for (const auto& [item, value] : raw) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFiniteValue, fmt::format("weight of '{}' is not finite", item.id()), {item.id()});
    }
    if (value < 0.0) {
      throw Error(ErrorCode::NegativeWeight, fmt::format("weight of '{}' is negative ({})", item.id(), value),
                  {item.id()});
    }
    total += value;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotal, "weights sum to zero");

  WeightVector out;
  out.period_ = period;
  out.raw_sum_ = total;
  for (const auto& [item, value] : raw) out.shares_.emplace(item, value / total);
  return out;
}

WeightVector WeightVector::from_shares(const std::map<ItemId, double>& shares, std::optional<Month> period) {
  WeightVector out = normalize(shares, period);
  if (std::abs(out.raw_sum_ - 1.0) > kIngestTolerance) {
    throw Error(ErrorCode::WeightSumOutOfRange, fmt::format("shares sum to {}, not one", out.raw_sum_));
  }
  out.shares_ = shares;
  return out;
}

double WeightVector::at(const ItemId& item) const {
  auto it = shares_.find(item);
  if (it == shares_.end()) {
    throw Error(ErrorCode::UnknownItem, fmt::format("no weight for item '{}'", item.id()), {item.id()});
  }
  return it->second;
}

std::set<ItemId> WeightVector::items() const {
  std::set<ItemId> out;
  for (const auto& [item, _] : shares_) out.insert(item);
  return out;
}

WeightVector WeightVector::with_period(std::optional<Month> period) const {
  WeightVector copy = *this;
  copy.period_ = period;
  return copy;
}

PriceRelativeSeries::PriceRelativeSeries(ItemId item, std::vector<std::pair<Month, double>> points)
    : item_(std::move(item)) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyInput, fmt::format("price series for '{}' is empty", item_.id()), {item_.id()});
  }
  first_ = points.front().first;
  relatives_.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& [month, relative] = points[k];
    if (month != first_ + static_cast<int>(k)) {
      throw Error(ErrorCode::GapInSeries,
                  fmt::format("price series for '{}' is not consecutive at {} (expected {})", item_.id(),
                              month.to_string(), (first_ + static_cast<int>(k)).to_string()),
                  {item_.id(), month.to_string()});
    }
    if (!std::isfinite(relative) || relative <= 0.0) {
      throw Error(ErrorCode::NonPositivePrice,
                  fmt::format("price relative for '{}' at {} must be positive (got {})", item_.id(),
                              month.to_string(), relative),
                  {item_.id(), month.to_string()});
    }
    relatives_.push_back(relative);
  }
}

std::optional<double> PriceRelativeSeries::at(Month m) const {
  if (!covers(m)) return std::nullopt;
  return relatives_[static_cast<std::size_t>(m - first_)];
}

WeightVector adjusted_weights(const WeightVector& official, const ExpenditureRelativeVector& relatives) {
  require_same_items(official.shares(), relatives.relatives, "adjusted_weights");
  std::map<ItemId, double> scaled;
  for (const auto& [item, w] : official.shares()) {
    const double de = relatives.relatives.at(item);
    if (!std::isfinite(de) || de <= 0.0) {
      throw Error(ErrorCode::NonPositiveRelative,
                  fmt::format("expenditure relative for '{}' at {} must be positive (got {})", item.id(),
                              relatives.period.to_string(), de),
                  {item.id(), relatives.period.to_string()});
    }
    scaled.emplace(item, w * de);
  }
  return WeightVector::normalize(scaled, relatives.period);
}

InflationPoint monthly_inflation(const WeightVector& weights, const PriceSet& prices, Month period) {
  InflationPoint point;
  point.period = period;
  for (const auto& [item, w] : weights.shares()) {
    auto series = prices.find(item);
    std::optional<double> relative;
    if (series != prices.end()) relative = series->second.at(period);
    if (!relative) {
      throw Error(ErrorCode::MissingPriceRelative,
                  fmt::format("no price relative for '{}' at {}", item.id(), period.to_string()),
                  {item.id(), period.to_string()});
    }
    const double contribution = w * (*relative - 1.0) * 100.0;
    point.contributions.emplace(item, contribution);
    point.monthly_pct += contribution;
  }
  for (const auto& [item, series] : prices) {
    if (series.covers(period) && !weights.contains(item)) {
      throw Error(ErrorCode::ItemSetMismatch,
                  fmt::format("item '{}' is priced at {} but has no weight", item.id(), period.to_string()),
                  {"extra:" + item.id()});
    }
  }
  return point;
}

std::vector<InflationPoint> chain_annual(std::vector<InflationPoint> monthly) {
  for (std::size_t k = 1; k < monthly.size(); ++k) {
    if (monthly[k].period != monthly[k - 1].period.next()) {
      throw Error(ErrorCode::GapInSeries,
                  fmt::format("monthly series jumps from {} to {}", monthly[k - 1].period.to_string(),
                              monthly[k].period.to_string()),
                  {monthly[k].period.to_string()});
    }
  }
  for (std::size_t k = 0; k < monthly.size(); ++k) {
    if (k < 11) {
      monthly[k].annual_pct.reset();
      continue;
    }
    double factor = 1.0;
    for (std::size_t j = k - 11; j <= k; ++j) factor *= 1.0 + monthly[j].monthly_pct / 100.0;
    monthly[k].annual_pct = (factor - 1.0) * 100.0;
  }
  return monthly;
}

std::optional<double> fixed_base_annual_pct(const WeightVector& basket, const PriceSet& prices, Month end) {
  const Month start = end - 11;
  double level = 0.0;
  for (const auto& [item, w] : basket.shares()) {
    auto series = prices.find(item);
    if (series == prices.end() || !series->second.covers(start) || !series->second.covers(end)) {
      return std::nullopt;
    }
    double factor = 1.0;
    for (Month m = start; m <= end; m = m.next()) factor *= *series->second.at(m);
    level += w * factor;
  }
  return (level - 1.0) * 100.0;
}

WeightVector exclude_items(const WeightVector& weights, const std::set<ItemId>& excluded) {
  for (const auto& item : excluded) {
    if (!weights.contains(item)) {
      throw Error(ErrorCode::UnknownItem, fmt::format("cannot exclude unknown item '{}'", item.id()),
                  {item.id()});
    }
  }
  std::map<ItemId, double> kept;
  for (const auto& [item, w] : weights.shares()) {
    if (!excluded.contains(item)) kept.emplace(item, w);
  }
  if (kept.empty()) throw Error(ErrorCode::AllItemsExcluded, "exclusion set removes every item");
  return WeightVector::normalize(kept, weights.period());
}

std::vector<BiasPoint> weighting_bias(std::span<const InflationPoint> official,
                                      std::span<const InflationPoint> adjusted) {
  if (official.size() != adjusted.size()) {
    throw Error(ErrorCode::PeriodMismatch,
                fmt::format("series lengths differ ({} vs {})", official.size(), adjusted.size()));
  }
  std::vector<BiasPoint> out;
  out.reserve(official.size());
  for (std::size_t k = 0; k < official.size(); ++k) {
    const auto& o = official[k];
    const auto& a = adjusted[k];
    if (o.period != a.period) {
      throw Error(ErrorCode::PeriodMismatch,
                  fmt::format("periods differ at position {} ({} vs {})", k, o.period.to_string(),
                              a.period.to_string()),
                  {o.period.to_string(), a.period.to_string()});
    }
    BiasPoint b;
    b.period = o.period;
    b.monthly_pp = o.monthly_pct - a.monthly_pct;
    if (o.annual_pct && a.annual_pct) b.annual_pp = *o.annual_pct - *a.annual_pct;
    out.push_back(b);
  }
  return out;
}

}  // namespace basketflex
