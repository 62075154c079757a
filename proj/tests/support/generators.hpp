#pragma once

// Hand-rolled random input generators shared by the unit and acceptance
// tests. All draws go through a seeded mt19937_64 so failures reproduce.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "basketflex/analysis.hpp"
#include "basketflex/basket.hpp"
#include "basketflex/crosswalk.hpp"
#include "basketflex/decimal.hpp"
#include "basketflex/ingest.hpp"
#include "basketflex/synth.hpp"

namespace bftest {

using namespace basketflex;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Decimal with `digits` fractional digits, uniform on [lo, hi].
inline Decimal uniform_decimal(Rng& rng, double lo, double hi, int digits) {
  const double scale = std::pow(10.0, digits);
  const auto steps = static_cast<std::int64_t>(std::llround(uniform(rng, lo, hi) * scale));
  return Decimal::from_units(static_cast<__int128>(steps) * (Decimal::kScale / static_cast<std::int64_t>(scale)));
}

inline std::vector<ItemId> item_ids(int n, const std::string& prefix = "i") {
  std::vector<ItemId> out;
  for (int k = 0; k < n; ++k) out.emplace_back(fmt::format("{}{:02}", prefix, k));
  return out;
}

inline WeightVector random_weights(Rng& rng, int n) {
  std::map<ItemId, double> raw;
  for (const auto& id : item_ids(n)) raw[id] = uniform(rng, 0.01, 1.0);
  return WeightVector::normalize(raw);
}

inline ExpenditureRelativeVector random_relatives(Rng& rng, const WeightVector& w, Month period, double lo = 0.2,
                                                  double hi = 3.0) {
  ExpenditureRelativeVector out{period, {}};
  for (const auto& [id, share] : w.shares()) out.relatives[id] = uniform(rng, lo, hi);
  return out;
}

inline ExpenditureRelativeVector constant_relatives(const WeightVector& w, Month period, double c) {
  ExpenditureRelativeVector out{period, {}};
  for (const auto& [id, share] : w.shares()) out.relatives[id] = c;
  return out;
}

inline PriceSet random_prices(Rng& rng, const std::set<ItemId>& items, Month first, int count, double lo = 0.9,
                              double hi = 1.1) {
  PriceSet out;
  for (const auto& id : items) {
    std::vector<std::pair<Month, double>> points;
    for (int k = 0; k < count; ++k) points.emplace_back(first + k, uniform(rng, lo, hi));
    out.emplace(id, PriceRelativeSeries(id, std::move(points)));
  }
  return out;
}

inline double max_abs_diff(const WeightVector& a, const WeightVector& b) {
  double worst = 0.0;
  for (const auto& [id, share] : a.shares()) worst = std::max(worst, std::abs(share - b.at(id)));
  if (a.size() != b.size()) return INFINITY;
  return worst;
}

// Random economy whose items each feed exactly one card category, so the
// direct crosswalk covers every item.
inline SyntheticEconomySpec random_economy(Rng& rng, int max_items = 10, int min_months = 13, int max_months = 24) {
  SyntheticEconomySpec spec;
  spec.start = Month(2019 + uniform_int(rng, 0, 3), static_cast<unsigned>(uniform_int(rng, 1, 12)));
  spec.months = uniform_int(rng, min_months, max_months);
  spec.base_months = uniform_int(rng, 1, 3);
  spec.seed = rng();
  spec.quantity_noise = uniform_decimal(rng, 0.0, 0.05, 4);
  spec.max_records_per_month = uniform_int(rng, 1, 5);

  const int n = uniform_int(rng, 1, max_items);
  for (int k = 0; k < n; ++k) {
    SyntheticItem item;
    item.id = ItemId(fmt::format("item{:02}", k));
    item.base_price = uniform_decimal(rng, 0.5, 20.0, 4);
    item.base_quantity = uniform_decimal(rng, 1.0, 1000.0, 4);
    item.monthly_drift = uniform_decimal(rng, -0.01, 0.01, 4);
    item.categories.push_back({CategoryId(fmt::format("cat{:02}", k)), 1});
    spec.items.push_back(std::move(item));
  }

  // Up to two disjoint shock windows after the base period.
  const int shocks = uniform_int(rng, 0, 2);
  int cursor = spec.base_months;
  for (int s = 0; s < shocks && cursor < spec.months - 1; ++s) {
    const int first = uniform_int(rng, cursor, spec.months - 2);
    const int last = uniform_int(rng, first, std::min(first + 3, spec.months - 1));
    ShockWindow w{spec.start + first, spec.start + last, {}, {}};
    for (const auto& item : spec.items) {
      if (uniform(rng, 0, 1) < 0.6) w.quantity_multipliers[item.id] = uniform_decimal(rng, 0.3, 1.8, 4);
      if (uniform(rng, 0, 1) < 0.4) w.price_drifts[item.id] = uniform_decimal(rng, -0.05, 0.05, 4);
    }
    spec.shocks.push_back(std::move(w));
    cursor = last + 1;
  }
  return spec;
}

struct LoadedEconomy {
  WeightVector weights;
  PriceSet prices;
  ExpenditurePanel panel;
};

// Generated CSV text pushed back through the public loaders.
inline LoadedEconomy load_generated(const GeneratedData& data) {
  std::istringstream w(data.weights_csv), p(data.prices_csv), e(data.expenditures_csv);
  return {load_weights(w, "weights.csv"), load_prices(p, "prices.csv"), load_expenditures(e, "expenditures.csv")};
}

// Full production path: generate, parse, crosswalk with direct rules, and
// run the scenario. Returns adjusted weights per period.
inline ScenarioResult pipeline_run(const SyntheticEconomySpec& spec) {
  const LoadedEconomy in = load_generated(generate(spec));
  ScenarioConfig config;
  config.base_months = spec.base_period();
  config.country_label = "synthetic";
  return run_scenario(config, in.weights, in.prices, in.panel, direct_crosswalk(spec));
}

// Category list of the bundled default crosswalk.
inline std::vector<CategoryId> bundled_categories() {
  std::vector<CategoryId> out;
  for (const char* id : {"appliances", "clothing", "communication", "electricity", "food_retail", "fuel",
                         "furniture", "health_pharma", "household_services", "leisure", "renovation",
                         "restaurants", "transport"}) {
    out.emplace_back(id);
  }
  return out;
}

// Monthly totals with up to 9 fractional digits; zero cells allowed with
// probability `zero_share`.
inline std::map<CategoryId, Decimal> random_amounts(Rng& rng, const std::vector<CategoryId>& categories,
                                                    double zero_share = 0.0) {
  std::map<CategoryId, Decimal> out;
  for (const auto& c : categories) {
    out[c] = uniform(rng, 0, 1) < zero_share ? Decimal{} : uniform_decimal(rng, 0.0, 1e7, 9);
  }
  return out;
}

inline ExpenditurePanel random_panel(Rng& rng, const std::vector<CategoryId>& categories, Month first, int months,
                                     double lo = 1.0, double hi = 1e6) {
  ExpenditurePanel panel(first, first + (months - 1));
  for (int k = 0; k < months; ++k) {
    for (const auto& c : categories) panel.set(c, first + k, uniform_decimal(rng, lo, hi, 2));
  }
  return panel;
}

}  // namespace bftest
