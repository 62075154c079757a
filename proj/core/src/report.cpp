#include "basketflex/report.hpp"

#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "basketflex/error.hpp"
#include "csv.hpp"

namespace basketflex {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "basketflex.scenario/1";

std::string num(double v) { return fmt::format("{}", v); }
std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json point_json(const InflationPoint& p) {
  json contributions = json::object();
  for (const auto& [item, c] : p.contributions) contributions[item.id()] = c;
  return json{{"period", p.period.to_string()},
              {"monthly_pct", p.monthly_pct},
              {"annual_pct", optional_json(p.annual_pct)},
              {"contributions", std::move(contributions)}};
}

json bias_json(const BiasPoint& b) {
  return json{{"period", b.period.to_string()}, {"monthly_pp", b.monthly_pp}, {"annual_pp", optional_json(b.annual_pp)}};
}

json shares_json(const WeightVector& w) {
  json out = json::object();
  for (const auto& [item, share] : w.shares()) out[item.id()] = share;
  return out;
}

struct SeriesRef {
  const char* name;
  const std::vector<InflationPoint>* points;
};

std::vector<SeriesRef> all_series(const ScenarioResult& r) {
  return {{"official", &r.official},
          {"adjusted", &r.adjusted},
          {"core_official", &r.core_official},
          {"core_adjusted", &r.core_adjusted}};
}

[[noreturn]] void bad(const std::string& source, const std::string& what) {
  throw Error(ErrorCode::SchemaError, "scenario JSON: " + what).at(source);
}

Month month_from(const json& j, const std::string& source) {
  if (!j.is_string()) bad(source, "period must be a string");
  auto m = Month::parse(j.get<std::string>());
  if (!m) bad(source, "invalid period '" + j.get<std::string>() + "'");
  return *m;
}

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

InflationPoint point_from(const json& j, const std::string& source) {
  InflationPoint p;
  p.period = month_from(j.at("period"), source);
  p.monthly_pct = j.at("monthly_pct").get<double>();
  p.annual_pct = optional_from(j.at("annual_pct"));
  for (const auto& [id, c] : j.at("contributions").items()) p.contributions.emplace(ItemId(id), c.get<double>());
  return p;
}

BiasPoint bias_from(const json& j, const std::string& source) {
  BiasPoint b;
  b.period = month_from(j.at("period"), source);
  b.monthly_pp = j.at("monthly_pp").get<double>();
  b.annual_pp = optional_from(j.at("annual_pp"));
  return b;
}

WeightVector shares_from(const json& j, const std::map<std::string, std::string>& labels, std::optional<Month> period) {
  std::map<ItemId, double> raw;
  for (const auto& [id, share] : j.items()) {
    auto label = labels.find(id);
    raw.emplace(ItemId(id, label == labels.end() ? "" : label->second), share.get<double>());
  }
  return WeightVector::from_shares(raw, period);
}

}  // namespace

std::string scenario_to_json(const ScenarioResult& r) {
  json items = json::array();
  for (const auto& [item, _] : r.official_weights.shares()) {
    items.push_back(json{{"id", item.id()}, {"label", item.label()}});
  }
  json windows = json::array();
  for (const auto& w : r.config.lockdown_windows) {
    windows.push_back(json{{"start", format_date(w.start)}, {"end", format_date(w.end)}});
  }
  json base_months = json::array();
  for (Month m : r.config.base_months) base_months.push_back(m.to_string());
  json exclusions = json::array();
  for (const auto& item : r.config.core_exclusions) exclusions.push_back(item.id());

  json metadata{
      {"country", r.config.country_label},
      {"variant", r.variant()},
      {"fixed_weight_month",
       r.config.fixed_weight_month ? json(r.config.fixed_weight_month->to_string()) : json(nullptr)},
      {"base_months", std::move(base_months)},
      {"core_exclusions", std::move(exclusions)},
      {"annual_method", std::string(to_string(r.config.annual_method))},
      {"per_day_base", r.config.apply_options.per_day},
      {"lockdown_windows", std::move(windows)},
      {"bias_convention", "official minus adjusted, percentage points; negative = official understates"},
  };

  json periods = json::array();
  for (Month m : r.periods) periods.push_back(m.to_string());
  json lockdown = json::array();
  for (bool b : r.in_lockdown) lockdown.push_back(b);

  json adjusted = json::array();
  for (std::size_t k = 0; k < r.periods.size(); ++k) {
    adjusted.push_back(json{{"period", r.periods[k].to_string()}, {"weights", shares_json(r.adjusted_weights[k])}});
  }

  json series = json::object();
  for (const auto& s : all_series(r)) {
    json points = json::array();
    for (const auto& p : *s.points) points.push_back(point_json(p));
    series[s.name] = std::move(points);
  }

  json headline = json::array();
  for (const auto& b : r.bias) headline.push_back(bias_json(b));
  json core = json::array();
  for (const auto& b : r.core_bias) core.push_back(bias_json(b));

  json root{
      {"schema", kSchema},
      {"metadata", std::move(metadata)},
      {"items", std::move(items)},
      {"periods", std::move(periods)},
      {"in_lockdown", std::move(lockdown)},
      {"official_weights", shares_json(r.official_weights)},
      {"adjusted_weights", std::move(adjusted)},
      {"series", std::move(series)},
      {"bias", json{{"headline", std::move(headline)}, {"core", std::move(core)}}},
  };
  return root.dump(2) + "\n";
}

ScenarioResult scenario_from_json(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(source, e.what());
  }
  try {
    if (root.value("schema", "") != kSchema) bad(source, "unsupported schema");
    const auto& meta = root.at("metadata");

    ScenarioConfig config;
    config.country_label = meta.at("country").get<std::string>();
    if (!meta.at("fixed_weight_month").is_null()) config.fixed_weight_month = month_from(meta.at("fixed_weight_month"), source);
    for (const auto& m : meta.at("base_months")) config.base_months.push_back(month_from(m, source));
    for (const auto& id : meta.at("core_exclusions")) config.core_exclusions.emplace(id.get<std::string>());
    auto method = parse_annual_method(meta.at("annual_method").get<std::string>());
    if (!method) bad(source, "unknown annual_method");
    config.annual_method = *method;
    config.apply_options.per_day = meta.at("per_day_base").get<bool>();
    for (const auto& w : meta.at("lockdown_windows")) {
      auto start = parse_date(w.at("start").get<std::string>());
      auto end = parse_date(w.at("end").get<std::string>());
      if (!start || !end) bad(source, "invalid lockdown window");
      config.lockdown_windows.push_back({*start, *end});
    }

    std::map<std::string, std::string> labels;
    for (const auto& item : root.at("items")) labels[item.at("id").get<std::string>()] = item.at("label").get<std::string>();

    std::vector<Month> periods;
    for (const auto& m : root.at("periods")) periods.push_back(month_from(m, source));
    std::vector<bool> in_lockdown;
    for (const auto& b : root.at("in_lockdown")) in_lockdown.push_back(b.get<bool>());

    auto official = shares_from(root.at("official_weights"), labels, std::nullopt);
    std::vector<WeightVector> adjusted;
    for (const auto& entry : root.at("adjusted_weights")) {
      adjusted.push_back(shares_from(entry.at("weights"), labels, month_from(entry.at("period"), source)));
    }

    auto read_series = [&](const char* name) {
      std::vector<InflationPoint> out;
      for (const auto& p : root.at("series").at(name)) out.push_back(point_from(p, source));
      return out;
    };
    auto read_bias = [&](const char* name) {
      std::vector<BiasPoint> out;
      for (const auto& b : root.at("bias").at(name)) out.push_back(bias_from(b, source));
      return out;
    };

    ScenarioResult result{std::move(config),
                          std::move(periods),
                          std::move(in_lockdown),
                          std::move(official),
                          std::move(adjusted),
                          read_series("official"),
                          read_series("adjusted"),
                          read_series("core_official"),
                          read_series("core_adjusted"),
                          read_bias("headline"),
                          read_bias("core")};
    const auto n = result.periods.size();
    if (result.in_lockdown.size() != n || result.adjusted_weights.size() != n || result.official.size() != n ||
        result.adjusted.size() != n || result.bias.size() != n) {
      bad(source, "series lengths do not match the period axis");
    }
    return result;
  } catch (const json::exception& e) {
    bad(source, e.what());
  }
}

void write_inflation_csv(std::ostream& out, const ScenarioResult& r) {
  out << "variant,period,series,monthly_pct,annual_pct,lockdown\n";
  const auto variant = r.variant();
  for (std::size_t k = 0; k < r.periods.size(); ++k) {
    for (const auto& s : all_series(r)) {
      const auto& p = (*s.points)[k];
      out << variant << ',' << p.period.to_string() << ',' << s.name << ',' << num(p.monthly_pct) << ','
          << opt_num(p.annual_pct) << ',' << (r.in_lockdown[k] ? 1 : 0) << '\n';
    }
  }
}

void write_weights_csv(std::ostream& out, const ScenarioResult& r) {
  out << "variant,period,basket,item,weight,lockdown\n";
  const auto variant = r.variant();
  for (std::size_t k = 0; k < r.periods.size(); ++k) {
    const auto period = r.periods[k].to_string();
    const int lockdown = r.in_lockdown[k] ? 1 : 0;
    for (const auto& [item, w] : r.official_weights.shares()) {
      out << variant << ',' << period << ",official," << detail::csv_escape(item.id()) << ',' << num(w) << ','
          << lockdown << '\n';
    }
    for (const auto& [item, w] : r.adjusted_weights[k].shares()) {
      out << variant << ',' << period << ",adjusted," << detail::csv_escape(item.id()) << ',' << num(w) << ','
          << lockdown << '\n';
    }
  }
}

void write_contributions_csv(std::ostream& out, const ScenarioResult& r) {
  out << "variant,period,series,item,contribution_pp\n";
  const auto variant = r.variant();
  for (std::size_t k = 0; k < r.periods.size(); ++k) {
    for (const auto& s : all_series(r)) {
      const auto& p = (*s.points)[k];
      for (const auto& [item, c] : p.contributions) {
        out << variant << ',' << p.period.to_string() << ',' << s.name << ',' << detail::csv_escape(item.id()) << ','
            << num(c) << '\n';
      }
    }
  }
}

void write_bias_csv(std::ostream& out, const ScenarioResult& r) {
  out << "variant,period,measure,monthly_bias_pp,annual_bias_pp,lockdown\n";
  const auto variant = r.variant();
  for (std::size_t k = 0; k < r.periods.size(); ++k) {
    const int lockdown = r.in_lockdown[k] ? 1 : 0;
    const auto& h = r.bias[k];
    const auto& c = r.core_bias[k];
    out << variant << ',' << h.period.to_string() << ",headline," << num(h.monthly_pp) << ',' << opt_num(h.annual_pp)
        << ',' << lockdown << '\n';
    out << variant << ',' << c.period.to_string() << ",core," << num(c.monthly_pp) << ',' << opt_num(c.annual_pp)
        << ',' << lockdown << '\n';
  }
}

std::string comparison_to_csv(const ComparisonTable& table) {
  std::string out = "period,country,monthly_bias_pp,annual_bias_pp,sign\n";
  for (const auto& row : table.rows) {
    out += fmt::format("{},{},{},{},{}\n", table.period.to_string(), detail::csv_escape(row.country),
                       num(row.monthly_bias_pp), opt_num(row.annual_bias_pp), row.sign);
  }
  return out;
}

std::string comparison_to_json(const ComparisonTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back(json{{"country", row.country},
                        {"monthly_bias_pp", row.monthly_bias_pp},
                        {"annual_bias_pp", optional_json(row.annual_bias_pp)},
                        {"sign", row.sign}});
  }
  json root{{"period", table.period.to_string()}, {"rows", std::move(rows)}};
  return root.dump(2) + "\n";
}

}  // namespace basketflex
