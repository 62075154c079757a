#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "basketflex/analysis.hpp"
#include "basketflex/ingest.hpp"

namespace basketflex::cli {

// Everything a `run` or `validate` invocation needs. Loaded from a manifest
// file, then overridden flag by flag.
struct RunManifest {
  std::filesystem::path weights;
  std::filesystem::path prices;
  std::filesystem::path expenditures;
  std::filesystem::path crosswalk;
  ScenarioConfig config;
  std::filesystem::path out_dir = "out";
  bool write_csv = true;
  bool write_json = true;
  IngestOptions ingest;

  // Throws InvalidConfig (missing field) or Io (input path absent).
  void validate() const;
};

// Command-line values; unset members leave the manifest untouched.
struct ManifestOverrides {
  std::optional<std::string> weights;
  std::optional<std::string> prices;
  std::optional<std::string> expenditures;
  std::optional<std::string> crosswalk;
  std::optional<std::string> base_months;   // "2020-01,2020-02"
  std::optional<std::string> core_exclude;  // "food,energy"
  std::optional<std::string> fixed_weight_month;
  std::optional<std::string> lockdowns;  // "2020-03-14:2020-05-04,..."
  std::optional<std::string> out;
  std::optional<std::string> format;  // "csv", "json" or "csv,json"
  std::optional<std::string> country;
  std::optional<std::string> annual_method;
  bool per_day = false;
  bool allow_negative = false;
};

// Relative paths in the file resolve against its directory. Throws
// SchemaError or Io.
RunManifest load_manifest(const std::filesystem::path& path);
RunManifest parse_manifest(const std::string& yaml_text, const std::filesystem::path& base_dir,
                           const std::string& source = "<manifest>");

// Throws InvalidConfig on malformed flag values.
void apply_overrides(RunManifest& manifest, const ManifestOverrides& overrides);

std::vector<Month> parse_month_list(const std::string& text);
std::vector<DateRange> parse_lockdowns(const std::string& text);

}  // namespace basketflex::cli
