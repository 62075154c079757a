#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace basketflex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInternalError = 3;

// Writes `content` to a sibling temp file and renames it over `path`.
// Throws Error(Io).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// One-line JSON error report, e.g.
//   {"error":"WeightSumOutOfRange","message":"...","file":"w.csv","line":0,"subjects":[]}
// Returns the exit code the failure maps to.
int report_failure(std::ostream& err, const std::exception& failure);

// Output file names written by `run`.
inline constexpr const char* kScenarioJson = "scenario_result.json";
inline constexpr const char* kInflationCsv = "inflation.csv";
inline constexpr const char* kWeightsCsv = "weights.csv";
inline constexpr const char* kContributionsCsv = "contributions.csv";
inline constexpr const char* kBiasCsv = "bias.csv";

int run_command(const RunManifest& manifest, std::ostream& out, std::ostream& err);

// Loads every input and checks the crosswalk against them without computing
// anything. Prints a JSON report on `out`; exit 2 when the crosswalk has issues.
int validate_command(const RunManifest& manifest, std::ostream& out, std::ostream& err);

struct GenerateOptions {
  std::filesystem::path spec;
  std::filesystem::path out_dir;
};

// Writes weights.csv, prices.csv and expenditures.csv for a synthetic economy.
int generate_command(const GenerateOptions& options, std::ostream& out, std::ostream& err);

struct CompareOptions {
  std::vector<std::filesystem::path> results;  // scenario_result.json files
  std::string period;                          // YYYY-MM
  std::string format = "csv";
  std::optional<std::filesystem::path> out;  // stdout when unset
};

int compare_command(const CompareOptions& options, std::ostream& out, std::ostream& err);

}  // namespace basketflex::cli
