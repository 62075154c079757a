#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "basketflex/basket.hpp"
#include "basketflex/calendar.hpp"
#include "basketflex/crosswalk.hpp"
#include "basketflex/decimal.hpp"
#include "basketflex/ingest.hpp"

namespace basketflex {

struct CategoryShare {
  CategoryId category;
  std::uint32_t parts = 1;
};

struct SyntheticItem {
  ItemId id;
  Decimal base_price;
  Decimal base_quantity;
  // Monthly price growth outside shock windows, as a fraction (0.002 = 0.2%).
  Decimal monthly_drift;
  // Card categories receiving this item's spending, split by integer parts.
  // Empty means the item is invisible in the expenditure data.
  std::vector<CategoryShare> categories;
};

struct ShockWindow {
  Month first;
  Month last;
  std::map<ItemId, Decimal> quantity_multipliers;
  // Replaces the item's monthly drift inside the window.
  std::map<ItemId, Decimal> price_drifts;

  bool contains(Month m) const { return m >= first && m <= last; }
};

struct SyntheticEconomySpec {
  std::vector<SyntheticItem> items;
  std::vector<ShockWindow> shocks;
  Month start;
  int months = 13;
  // Leading months whose average spending defines the official basket.
  int base_months = 2;
  std::uint64_t seed = 0;
  // Relative amplitude of uniform quantity noise, in [0, 1).
  Decimal quantity_noise;
  int max_records_per_month = 4;

  // Throws InvalidSpec(reason).
  void validate() const;
  std::vector<Month> horizon() const;
  std::vector<Month> base_period() const;
};

// Price and quantity paths. Prices and quantities are rounded to four
// decimals each month, so spending P*Q is an exact decimal.
struct EconomyPaths {
  std::vector<Month> months;
  std::map<ItemId, std::vector<Decimal>> prices;
  std::map<ItemId, std::vector<Decimal>> quantities;
};

inline constexpr int kSyntheticPriceDigits = 4;
inline constexpr int kSyntheticQuantityDigits = 4;

EconomyPaths simulate(const SyntheticEconomySpec& spec);

struct GeneratedData {
  std::string weights_csv;
  std::string prices_csv;
  std::string expenditures_csv;
};

// Deterministic in the spec (including its seed). Official weights are the
// base-period spending shares; price relatives start in the second month.
GeneratedData generate(const SyntheticEconomySpec& spec);

// Spending shares P_t*Q_t / sum P_t*Q_t straight from the simulated paths.
// Throws MonthOutOfRange.
WeightVector oracle_adjusted_weights(const SyntheticEconomySpec& spec, Month month);

// Direct rule per tracked single-category item.
CrosswalkSpec direct_crosswalk(const SyntheticEconomySpec& spec);

// YAML text format (see docs/synthetic.md).
SyntheticEconomySpec parse_economy(const std::string& yaml_text, const std::string& source = "<economy>");
SyntheticEconomySpec load_economy(const std::filesystem::path& path);

}  // namespace basketflex
