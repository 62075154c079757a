#include "basketflex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "basketflex/error.hpp"
#include "csv.hpp"

namespace basketflex {

namespace {

[[noreturn]] void invalid(const std::string& reason) { throw Error(ErrorCode::InvalidSpec, reason, {reason}); }

// std::mt19937_64 is fully specified by the standard, so its raw output is
// identical on every platform. Distributions are derived by hand because the
// standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint64_t kSplitStream = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::vector<Month> SyntheticEconomySpec::horizon() const {
  std::vector<Month> out;
  for (int k = 0; k < months; ++k) out.push_back(start + k);
  return out;
}

std::vector<Month> SyntheticEconomySpec::base_period() const {
  std::vector<Month> out;
  for (int k = 0; k < base_months; ++k) out.push_back(start + k);
  return out;
}

void SyntheticEconomySpec::validate() const {
  if (items.empty()) invalid("economy has no items");
  if (months < 13) invalid(fmt::format("horizon of {} months is shorter than 13", months));
  if (base_months < 1 || base_months >= months) invalid("base_months must be between 1 and months - 1");
  if (quantity_noise.is_negative() || quantity_noise >= Decimal::from_int(1)) {
    invalid("quantity_noise must lie in [0, 1)");
  }
  if (max_records_per_month < 1) invalid("max_records_per_month must be at least 1");

  std::set<ItemId> ids;
  std::set<CategoryId> categories;
  bool tracked = false;
  for (const auto& item : items) {
    if (!ids.insert(item.id).second) invalid(fmt::format("item '{}' listed twice", item.id.id()));
    if (!(item.base_price > Decimal{})) invalid(fmt::format("item '{}' needs a positive price", item.id.id()));
    if (!(item.base_quantity > Decimal{})) invalid(fmt::format("item '{}' needs a positive quantity", item.id.id()));
    if (!(item.monthly_drift > Decimal::from_int(-1))) {
      invalid(fmt::format("item '{}' drift must exceed -1", item.id.id()));
    }
    for (const auto& share : item.categories) {
      if (share.parts == 0) invalid(fmt::format("category '{}' has zero parts", share.category.id()));
      if (!categories.insert(share.category).second) {
        invalid(fmt::format("category '{}' assigned to more than one item", share.category.id()));
      }
    }
    tracked = tracked || !item.categories.empty();
  }
  if (!tracked) invalid("no item is visible in the expenditure data");

  const Month end = start + (months - 1);
  for (std::size_t k = 0; k < shocks.size(); ++k) {
    const auto& w = shocks[k];
    if (w.first > w.last) invalid(fmt::format("shock window {}..{} is reversed", w.first.to_string(), w.last.to_string()));
    if (w.first < start || w.last > end) {
      invalid(fmt::format("shock window {}..{} leaves the horizon", w.first.to_string(), w.last.to_string()));
    }
    if (k > 0 && w.first <= shocks[k - 1].last) invalid("shock windows must be ordered and disjoint");
    for (const auto& [id, mult] : w.quantity_multipliers) {
      if (!ids.contains(id)) invalid(fmt::format("shock refers to unknown item '{}'", id.id()));
      if (!(mult > Decimal{})) invalid(fmt::format("quantity multiplier for '{}' must be positive", id.id()));
    }
    for (const auto& [id, drift] : w.price_drifts) {
      if (!ids.contains(id)) invalid(fmt::format("shock refers to unknown item '{}'", id.id()));
      if (!(drift > Decimal::from_int(-1))) invalid(fmt::format("price drift for '{}' must exceed -1", id.id()));
    }
  }
}

EconomyPaths simulate(const SyntheticEconomySpec& spec) {
  spec.validate();
  Rng noise_rng(spec.seed);
  EconomyPaths paths;
  paths.months = spec.horizon();
  const Decimal one = Decimal::from_int(1);

  for (const auto& item : spec.items) {
    paths.prices[item.id].reserve(paths.months.size());
    paths.quantities[item.id].reserve(paths.months.size());
  }
  for (std::size_t k = 0; k < paths.months.size(); ++k) {
    const Month m = paths.months[k];
    const ShockWindow* shock = nullptr;
    for (const auto& w : spec.shocks) {
      if (w.contains(m)) shock = &w;
    }
    for (const auto& item : spec.items) {
      auto& prices = paths.prices[item.id];
      if (k == 0) {
        prices.push_back(item.base_price.round(kSyntheticPriceDigits));
      } else {
        Decimal drift = item.monthly_drift;
        if (shock) {
          auto it = shock->price_drifts.find(item.id);
          if (it != shock->price_drifts.end()) drift = it->second;
        }
        prices.push_back(prices.back().multiply(one + drift, kSyntheticPriceDigits));
      }
      if (!(prices.back() > Decimal{})) {
        invalid(fmt::format("price of '{}' reaches zero at {}", item.id.id(), m.to_string()));
      }

      Decimal quantity = item.base_quantity;
      if (shock) {
        auto it = shock->quantity_multipliers.find(item.id);
        if (it != shock->quantity_multipliers.end()) quantity = quantity.multiply(it->second);
      }
      const double u = 2.0 * noise_rng.unit() - 1.0;
      const Decimal u_dec = Decimal::from_units(static_cast<__int128>(std::llround(u * 1e6)) * 1000);
      quantity = quantity.multiply(one + spec.quantity_noise.multiply(u_dec), kSyntheticQuantityDigits);
      if (!(quantity > Decimal{})) {
        invalid(fmt::format("quantity of '{}' reaches zero at {}", item.id.id(), m.to_string()));
      }
      paths.quantities[item.id].push_back(quantity);
    }
  }
  return paths;
}

GeneratedData generate(const SyntheticEconomySpec& spec) {
  const auto paths = simulate(spec);
  GeneratedData out;

  // Official weights: base-period spending shares.
  std::map<ItemId, Decimal> base_spend;
  Decimal base_total;
  for (const auto& item : spec.items) {
    Decimal sum;
    for (int k = 0; k < spec.base_months; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      sum += paths.prices.at(item.id)[kk].multiply(paths.quantities.at(item.id)[kk]);
    }
    base_spend[item.id] = sum;
    base_total += sum;
  }
  const bool labelled = std::any_of(spec.items.begin(), spec.items.end(),
                                    [](const SyntheticItem& i) { return i.id.label() != i.id.id(); });
  std::string weights = labelled ? "item,weight,label\n" : "item,weight\n";
  for (const auto& item : spec.items) {
    const double share = base_spend.at(item.id).to_double() / base_total.to_double();
    weights += fmt::format("{},{}", item.id.id(), share);
    if (labelled) weights += "," + detail::csv_escape(item.id.label());
    weights += "\n";
  }
  out.weights_csv = std::move(weights);

  std::string prices = "item,period,relative\n";
  for (const auto& item : spec.items) {
    const auto& path = paths.prices.at(item.id);
    for (std::size_t k = 1; k < paths.months.size(); ++k) {
      const double relative = path[k].to_double() / path[k - 1].to_double();
      prices += fmt::format("{},{},{}\n", item.id.id(), paths.months[k].to_string(), relative);
    }
  }
  out.prices_csv = std::move(prices);

  struct Record {
    std::chrono::year_month_day date;
    std::string category;
    Decimal amount;
  };
  Rng split_rng(spec.seed ^ kSplitStream);
  std::vector<Record> records;
  for (std::size_t k = 0; k < paths.months.size(); ++k) {
    const Month m = paths.months[k];
    for (const auto& item : spec.items) {
      if (item.categories.empty()) continue;
      const Decimal spend = paths.prices.at(item.id)[k].multiply(paths.quantities.at(item.id)[k]);
      std::uint64_t total_parts = 0;
      for (const auto& share : item.categories) total_parts += share.parts;

      __int128 allocated = 0;
      for (std::size_t c = 0; c < item.categories.size(); ++c) {
        const auto& share = item.categories[c];
        const __int128 units = c + 1 == item.categories.size()
                                   ? spend.units() - allocated
                                   : spend.units() * share.parts / static_cast<__int128>(total_parts);
        allocated += units;

        // Random partition of the month's amount into daily records.
        const auto pieces = 1 + split_rng.below(static_cast<std::uint64_t>(spec.max_records_per_month));
        std::vector<__int128> cuts{0, units};
        for (std::uint64_t p = 1; p < pieces; ++p) {
          cuts.push_back(static_cast<__int128>(split_rng.below(static_cast<std::uint64_t>(units) + 1)));
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t p = 1; p < cuts.size(); ++p) {
          const auto day = 1 + split_rng.below(m.days());
          const std::chrono::year_month_day date{std::chrono::year{m.year()}, std::chrono::month{m.month()},
                                                 std::chrono::day{static_cast<unsigned>(day)}};
          records.push_back({date, share.category.id(), Decimal::from_units(cuts[p] - cuts[p - 1])});
        }
      }
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    if (a.date != b.date) return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
    return a.category < b.category;
  });
  std::string expenditures = "date,category,amount\n";
  for (const auto& r : records) {
    expenditures += fmt::format("{},{},{}\n", format_date(r.date), r.category, r.amount.to_string());
  }
  out.expenditures_csv = std::move(expenditures);
  return out;
}

WeightVector oracle_adjusted_weights(const SyntheticEconomySpec& spec, Month month) {
  if (month < spec.start || month >= spec.start + spec.months) {
    throw Error(ErrorCode::MonthOutOfRange, fmt::format("{} is outside the simulated horizon", month.to_string()),
                {month.to_string()});
  }
  const auto paths = simulate(spec);
  const auto k = static_cast<std::size_t>(month - spec.start);
  std::map<ItemId, double> spending;
  for (const auto& item : spec.items) {
    spending[item.id] = paths.prices.at(item.id)[k].to_double() * paths.quantities.at(item.id)[k].to_double();
  }
  return WeightVector::normalize(spending, month);
}

CrosswalkSpec direct_crosswalk(const SyntheticEconomySpec& spec) {
  CrosswalkSpec out;
  out.version = "synthetic-direct";
  for (const auto& item : spec.items) {
    if (item.categories.size() != 1) {
      invalid(fmt::format("item '{}' does not map to exactly one category", item.id.id()));
    }
    out.rules.push_back({item.id, DirectRule{item.categories.front().category}, ""});
  }
  return out;
}

// ---------------------------------------------------------------------------
// YAML

namespace {

[[noreturn]] void yaml_error(const std::string& source, const YAML::Node& node, const std::string& message) {
  const auto line = node.Mark().is_null() ? 0 : static_cast<std::size_t>(node.Mark().line + 1);
  throw Error(ErrorCode::SchemaError, message).at(source, line);
}

Decimal decimal_of(const std::string& source, const YAML::Node& node, const char* what) {
  if (!node || !node.IsScalar()) yaml_error(source, node, fmt::format("'{}' must be a number", what));
  auto d = Decimal::parse(node.Scalar());
  if (!d) yaml_error(source, node, fmt::format("'{}' is not a plain decimal: '{}'", what, node.Scalar()));
  return *d;
}

Month month_of(const std::string& source, const YAML::Node& node, const char* what) {
  if (!node || !node.IsScalar()) yaml_error(source, node, fmt::format("'{}' must be a month (YYYY-MM)", what));
  auto m = Month::parse(node.Scalar());
  if (!m) yaml_error(source, node, fmt::format("'{}' is not a month: '{}'", what, node.Scalar()));
  return *m;
}

std::map<ItemId, Decimal> decimal_map(const std::string& source, const YAML::Node& node, const char* what) {
  std::map<ItemId, Decimal> out;
  if (!node) return out;
  if (!node.IsMap()) yaml_error(source, node, fmt::format("'{}' must map items to numbers", what));
  for (const auto& kv : node) out.emplace(ItemId(kv.first.as<std::string>()), decimal_of(source, kv.second, what));
  return out;
}

}  // namespace

SyntheticEconomySpec parse_economy(const std::string& yaml_text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::SchemaError, e.what()).at(source, static_cast<std::size_t>(e.mark.line + 1));
  }
  if (!root.IsMap()) yaml_error(source, root, "economy spec must be a mapping");

  try {
    SyntheticEconomySpec spec;
    spec.start = month_of(source, root["start"], "start");
    if (root["months"]) spec.months = root["months"].as<int>();
    if (root["base_months"]) spec.base_months = root["base_months"].as<int>();
    if (root["seed"]) spec.seed = root["seed"].as<std::uint64_t>();
    if (root["quantity_noise"]) spec.quantity_noise = decimal_of(source, root["quantity_noise"], "quantity_noise");
    if (root["max_records_per_month"]) spec.max_records_per_month = root["max_records_per_month"].as<int>();

    const auto items = root["items"];
    if (!items || !items.IsSequence()) yaml_error(source, root, "economy spec needs an 'items' list");
    for (const auto& node : items) {
      SyntheticItem item;
      const auto id = node["id"].as<std::string>();
      item.id = ItemId(id, node["label"] ? node["label"].as<std::string>() : "");
      item.base_price = decimal_of(source, node["price"], "price");
      item.base_quantity = decimal_of(source, node["quantity"], "quantity");
      if (node["drift"]) item.monthly_drift = decimal_of(source, node["drift"], "drift");
      const bool tracked = !node["tracked"] || node["tracked"].as<bool>();
      if (node["categories"]) {
        for (const auto& c : node["categories"]) {
          if (c.IsScalar()) {
            item.categories.push_back({CategoryId(c.as<std::string>()), 1});
          } else {
            item.categories.push_back({CategoryId(c["id"].as<std::string>()),
                                       c["parts"] ? c["parts"].as<std::uint32_t>() : 1U});
          }
        }
      } else if (tracked) {
        item.categories.push_back({CategoryId(id), 1});
      }
      if (!tracked) item.categories.clear();
      spec.items.push_back(std::move(item));
    }

    if (const auto shocks = root["shocks"]) {
      for (const auto& node : shocks) {
        ShockWindow w;
        w.first = month_of(source, node["from"], "from");
        w.last = node["to"] ? month_of(source, node["to"], "to") : w.first;
        w.quantity_multipliers = decimal_map(source, node["quantity"], "quantity");
        w.price_drifts = decimal_map(source, node["price_drift"], "price_drift");
        spec.shocks.push_back(std::move(w));
      }
    }
    return spec;
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::SchemaError, e.what()).at(source, static_cast<std::size_t>(e.mark.line + 1));
  }
}

SyntheticEconomySpec load_economy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()), {path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_economy(buffer.str(), path.string());
}

}  // namespace basketflex
