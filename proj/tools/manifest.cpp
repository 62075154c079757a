#include "manifest.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "basketflex/error.hpp"

namespace basketflex::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, sep)) {
    auto first = current.find_first_not_of(" \t");
    auto last = current.find_last_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(current.substr(first, last - first + 1));
  }
  return out;
}

Month month_or_throw(const std::string& text) {
  auto m = Month::parse(text);
  if (!m) throw Error(ErrorCode::InvalidConfig, fmt::format("'{}' is not a month (YYYY-MM)", text), {text});
  return *m;
}

DateRange range_or_throw(const std::string& start, const std::string& end) {
  auto s = parse_date(start);
  auto e = parse_date(end);
  if (!s || !e) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("invalid lockdown window '{}'..'{}'", start, end),
                {start, end});
  }
  return {*s, *e};
}

void set_formats(RunManifest& m, const std::vector<std::string>& formats) {
  m.write_csv = false;
  m.write_json = false;
  for (const auto& f : formats) {
    if (f == "csv") {
      m.write_csv = true;
    } else if (f == "json") {
      m.write_json = true;
    } else {
      throw Error(ErrorCode::InvalidConfig, fmt::format("unknown output format '{}'", f), {f});
    }
  }
  if (!m.write_csv && !m.write_json) throw Error(ErrorCode::InvalidConfig, "no output format selected");
}

AnnualMethod method_or_throw(const std::string& text) {
  auto method = parse_annual_method(text);
  if (!method) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("unknown annual method '{}' (expected chained or fixed-base)", text), {text});
  }
  return *method;
}

}  // namespace

std::vector<Month> parse_month_list(const std::string& text) {
  std::vector<Month> out;
  for (const auto& part : split(text, ',')) out.push_back(month_or_throw(part));
  return out;
}

std::vector<DateRange> parse_lockdowns(const std::string& text) {
  std::vector<DateRange> out;
  for (const auto& part : split(text, ',')) {
    const auto bounds = split(part, ':');
    if (bounds.size() != 2) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("lockdown window '{}' must be START:END", part), {part});
    }
    out.push_back(range_or_throw(bounds[0], bounds[1]));
  }
  return out;
}

void RunManifest::validate() const {
  const std::pair<const char*, const std::filesystem::path*> inputs[] = {
      {"weights", &weights}, {"prices", &prices}, {"expenditures", &expenditures}, {"crosswalk", &crosswalk}};
  for (const auto& [name, path] : inputs) {
    if (path->empty()) throw Error(ErrorCode::InvalidConfig, fmt::format("no {} file given", name), {name});
    if (!std::filesystem::exists(*path)) {
      throw Error(ErrorCode::Io, fmt::format("{} file '{}' does not exist", name, path->string()), {path->string()});
    }
  }
  if (out_dir.empty()) throw Error(ErrorCode::InvalidConfig, "no output directory given", {"out"});
  config.validate();
}

RunManifest parse_manifest(const std::string& yaml_text, const std::filesystem::path& base_dir,
                           const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::SchemaError, e.what()).at(source, static_cast<std::size_t>(e.mark.line + 1));
  }
  if (!root.IsMap()) throw Error(ErrorCode::SchemaError, "manifest must be a mapping").at(source);

  auto resolve = [&](const YAML::Node& node) {
    std::filesystem::path p = node.as<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };

  RunManifest m;
  try {
    if (root["weights"]) m.weights = resolve(root["weights"]);
    if (root["prices"]) m.prices = resolve(root["prices"]);
    if (root["expenditures"]) m.expenditures = resolve(root["expenditures"]);
    if (root["crosswalk"]) m.crosswalk = resolve(root["crosswalk"]);
    if (root["out"]) m.out_dir = resolve(root["out"]);
    if (const auto node = root["base_months"]) {
      for (const auto& b : node) m.config.base_months.push_back(month_or_throw(b.as<std::string>()));
    }
    if (const auto node = root["core_exclude"]) {
      for (const auto& c : node) m.config.core_exclusions.emplace(c.as<std::string>());
    }
    if (const auto node = root["fixed_weight_month"]) {
      m.config.fixed_weight_month = month_or_throw(node.as<std::string>());
    }
    if (const auto node = root["lockdowns"]) {
      for (const auto& w : node) {
        if (!w.IsSequence() || w.size() != 2) {
          throw Error(ErrorCode::SchemaError, "each lockdown window is [start, end]")
              .at(source, static_cast<std::size_t>(w.Mark().line + 1));
        }
        m.config.lockdown_windows.push_back(range_or_throw(w[0].as<std::string>(), w[1].as<std::string>()));
      }
    }
    if (root["country"]) m.config.country_label = root["country"].as<std::string>();
    if (root["annual_method"]) m.config.annual_method = method_or_throw(root["annual_method"].as<std::string>());
    if (root["per_day"]) m.config.apply_options.per_day = root["per_day"].as<bool>();
    if (root["allow_negative"]) m.ingest.allow_negative_amounts = root["allow_negative"].as<bool>();
    if (const auto node = root["format"]) {
      std::vector<std::string> formats;
      if (node.IsScalar()) {
        formats.push_back(node.as<std::string>());
      } else {
        for (const auto& f : node) formats.push_back(f.as<std::string>());
      }
      set_formats(m, formats);
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::SchemaError, e.what()).at(source, static_cast<std::size_t>(e.mark.line + 1));
  } catch (const Error& e) {
    if (!e.file().empty()) throw;
    throw e.at(source);
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open manifest '{}'", path.string()), {path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.parent_path(), path.string());
}

void apply_overrides(RunManifest& m, const ManifestOverrides& o) {
  if (o.weights) m.weights = *o.weights;
  if (o.prices) m.prices = *o.prices;
  if (o.expenditures) m.expenditures = *o.expenditures;
  if (o.crosswalk) m.crosswalk = *o.crosswalk;
  if (o.base_months) m.config.base_months = parse_month_list(*o.base_months);
  if (o.core_exclude) {
    m.config.core_exclusions.clear();
    for (const auto& id : split(*o.core_exclude, ',')) m.config.core_exclusions.emplace(id);
  }
  if (o.fixed_weight_month) m.config.fixed_weight_month = month_or_throw(*o.fixed_weight_month);
  if (o.lockdowns) m.config.lockdown_windows = parse_lockdowns(*o.lockdowns);
  if (o.out) m.out_dir = *o.out;
  if (o.format) set_formats(m, split(*o.format, ','));
  if (o.country) m.config.country_label = *o.country;
  if (o.annual_method) m.config.annual_method = method_or_throw(*o.annual_method);
  if (o.per_day) m.config.apply_options.per_day = true;
  if (o.allow_negative) m.ingest.allow_negative_amounts = true;
}

}  // namespace basketflex::cli
