#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "basketflex/calendar.hpp"

namespace basketflex {

// Identifier of a CPI item. Identity (ordering, equality) is the id alone;
// the label is display-only.
class ItemId {
 public:
  ItemId() = default;
  explicit ItemId(std::string id, std::string label = {});

  const std::string& id() const { return id_; }
  const std::string& label() const { return label_.empty() ? id_ : label_; }

  friend bool operator==(const ItemId& a, const ItemId& b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(const ItemId& a, const ItemId& b) { return a.id_ <=> b.id_; }

 private:
  std::string id_;
  std::string label_;
};

// Basket shares summing to one. Only constructible through the factories.
class WeightVector {
 public:
  // Tolerance on the sum of shares of a vector built from external input.
  static constexpr double kIngestTolerance = 1e-9;
  // Tolerance on the sum of shares of an internally computed vector.
  static constexpr double kInternalTolerance = 1e-12;

  // share_i = raw_i / sum(raw). Throws EmptyInput, NegativeWeight(item),
  // NonFiniteValue(item) or ZeroTotal.
  static WeightVector normalize(const std::map<ItemId, double>& raw, std::optional<Month> period = {});
  // Shares kept bit for bit, for reloading serialized results. Same checks as
  // normalize, plus WeightSumOutOfRange when the sum is off by more than
  // kIngestTolerance.
  static WeightVector from_shares(const std::map<ItemId, double>& shares, std::optional<Month> period = {});

  const std::map<ItemId, double>& shares() const { return shares_; }
  std::optional<Month> period() const { return period_; }
  // Sum of the raw inputs before normalization.
  double raw_sum() const { return raw_sum_; }

  std::size_t size() const { return shares_.size(); }
  bool contains(const ItemId& item) const { return shares_.contains(item); }
  double at(const ItemId& item) const;
  std::set<ItemId> items() const;

  WeightVector with_period(std::optional<Month> period) const;

 private:
  WeightVector() = default;

  std::optional<Month> period_;
  std::map<ItemId, double> shares_;
  double raw_sum_ = 0.0;
};

inline WeightVector normalize_weights(const std::map<ItemId, double>& raw) {
  return WeightVector::normalize(raw);
}

// Ratio of an item's spending in `period` to its base-period spending.
struct ExpenditureRelativeVector {
  Month period;
  std::map<ItemId, double> relatives;
};

// Month-over-month price factors of one item over consecutive months.
class PriceRelativeSeries {
 public:
  // Throws EmptyInput, GapInSeries (unordered or non-consecutive months) or
  // NonPositivePrice.
  PriceRelativeSeries(ItemId item, std::vector<std::pair<Month, double>> points);

  const ItemId& item() const { return item_; }
  Month first() const { return first_; }
  Month last() const { return first_ + static_cast<int>(relatives_.size()) - 1; }
  bool covers(Month m) const { return m >= first() && m <= last(); }
  std::optional<double> at(Month m) const;
  std::span<const double> relatives() const { return relatives_; }

 private:
  ItemId item_;
  Month first_;
  std::vector<double> relatives_;
};

using PriceSet = std::map<ItemId, PriceRelativeSeries>;

struct InflationPoint {
  Month period;
  double monthly_pct = 0.0;
  std::optional<double> annual_pct;
  std::map<ItemId, double> contributions;  // percentage points
};

// official - adjusted, in percentage points. Negative means the official rate
// understates inflation of the expenditure-adjusted basket.
struct BiasPoint {
  Month period;
  double monthly_pp = 0.0;
  std::optional<double> annual_pp;
};

// w_adj(i) = w(i) * de(i) / sum_j w(j) * de(j), dated at relatives.period.
// Throws ItemSetMismatch or NonPositiveRelative(item).
WeightVector adjusted_weights(const WeightVector& official, const ExpenditureRelativeVector& relatives);

// Arithmetic (Laspeyres-style) aggregation: contribution(i) = w(i) * (r_i - 1) * 100.
// Throws MissingPriceRelative(item, period) or ItemSetMismatch when a priced
// item has no weight.
InflationPoint monthly_inflation(const WeightVector& weights, const PriceSet& prices, Month period);

// Fills annual_pct from a trailing 12-month chain of monthly rates.
// Throws GapInSeries.
std::vector<InflationPoint> chain_annual(std::vector<InflationPoint> monthly);

// 12-month change of a basket held fixed over the window ending at `end`:
// (sum_i w(i) * prod_k r_i,k - 1) * 100. Empty when prices do not cover the window.
std::optional<double> fixed_base_annual_pct(const WeightVector& basket, const PriceSet& prices, Month end);

// Removes items and renormalizes the remainder. Throws UnknownItem or
// AllItemsExcluded.
WeightVector exclude_items(const WeightVector& weights, const std::set<ItemId>& excluded);

// Throws PeriodMismatch when the two series are not aligned.
std::vector<BiasPoint> weighting_bias(std::span<const InflationPoint> official,
                                      std::span<const InflationPoint> adjusted);

}  // namespace basketflex
