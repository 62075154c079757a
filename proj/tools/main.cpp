// basketflex command-line front end.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "manifest.hpp"

namespace {

using namespace basketflex::cli;

// BASKETFLEX_LOG=trace|debug|info|warn|error|off, default warn. Everything
// goes to stderr so stdout stays clean for reports.
void setup_logging() {
  auto logger = spdlog::stderr_logger_st("basketflex");
  logger->set_pattern("basketflex: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("BASKETFLEX_LOG")) {
    auto parsed = spdlog::level::from_str(level);
    // from_str maps unknown names to off; only accept "off" when asked for.
    if (parsed != spdlog::level::off || std::string_view(level) == "off") {
      spdlog::set_level(parsed);
    } else {
      spdlog::warn("ignoring unknown BASKETFLEX_LOG level '{}'", level);
    }
  }
}

void add_scenario_flags(CLI::App* cmd, std::string& manifest_path, ManifestOverrides& o) {
  cmd->add_option("--manifest", manifest_path, "YAML manifest; flags below override its fields");
  auto opt = [&](const char* name, std::optional<std::string>& target, const char* help) {
    cmd->add_option_function<std::string>(name, [&target](const std::string& v) { target = v; }, help);
  };
  opt("--weights", o.weights, "official weights CSV (item,weight[,label])");
  opt("--prices", o.prices, "price relatives CSV (item,period,relative)");
  opt("--expenditures", o.expenditures, "daily expenditure CSV (date,category,amount)");
  opt("--crosswalk", o.crosswalk, "crosswalk YAML");
  opt("--base-months", o.base_months, "comma-separated base months, e.g. 2020-01,2020-02");
  opt("--core-exclude", o.core_exclude, "comma-separated items dropped from the core index");
  opt("--fixed-weight-month", o.fixed_weight_month, "freeze the adjusted basket at this month (YYYY-MM)");
  opt("--lockdowns", o.lockdowns, "annotation windows START:END[,START:END...] (YYYY-MM-DD)");
  opt("--out", o.out, "output directory");
  opt("--format", o.format, "csv, json or csv,json");
  opt("--country", o.country, "label used by compare");
  opt("--annual-method", o.annual_method, "chained or fixed-base");
  cmd->add_flag("--per-day", o.per_day, "compare average daily spending instead of monthly totals");
  cmd->add_flag("--allow-negative", o.allow_negative, "accept refund records with negative amounts");
}

// Builds the manifest for run/validate; failures are reported like any
// other input error.
int with_manifest(const std::string& manifest_path, const ManifestOverrides& overrides,
                  int (*command)(const RunManifest&, std::ostream&, std::ostream&)) {
  RunManifest manifest;
  try {
    if (!manifest_path.empty()) manifest = load_manifest(manifest_path);
    apply_overrides(manifest, overrides);
  } catch (const std::exception& e) {
    return report_failure(std::cerr, e);
  }
  return command(manifest, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Inflation under expenditure-adjusted basket weights"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "basketflex 0.1.0");

  std::string run_manifest;
  ManifestOverrides run_overrides;
  auto* run = app.add_subcommand("run", "compute official vs. adjusted inflation and weighting bias");
  add_scenario_flags(run, run_manifest, run_overrides);

  std::string validate_manifest;
  ManifestOverrides validate_overrides;
  auto* check = app.add_subcommand("validate", "check inputs and the crosswalk without computing");
  add_scenario_flags(check, validate_manifest, validate_overrides);

  GenerateOptions gen_options;
  auto* gen = app.add_subcommand("generate", "write CSV inputs for a synthetic economy");
  gen->add_option("--spec", gen_options.spec, "economy YAML")->required();
  gen->add_option("--out", gen_options.out_dir, "output directory")->required();

  CompareOptions cmp_options;
  std::string cmp_out;
  auto* cmp = app.add_subcommand("compare", "rank scenarios by headline bias at one period");
  cmp->add_option("--results", cmp_options.results, "scenario_result.json files")->required()->expected(1, -1);
  cmp->add_option("--period", cmp_options.period, "period to compare (YYYY-MM)")->required();
  cmp->add_option("--format", cmp_options.format, "csv or json")->capture_default_str();
  cmp->add_option("--out", cmp_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors are input errors too.
    const int status = app.exit(e);
    return status == 0 ? 0 : kExitInputError;
  }

  if (*run) return with_manifest(run_manifest, run_overrides, run_command);
  if (*check) return with_manifest(validate_manifest, validate_overrides, validate_command);
  if (*gen) return generate_command(gen_options, std::cout, std::cerr);
  if (!cmp_out.empty()) cmp_options.out = cmp_out;
  return compare_command(cmp_options, std::cout, std::cerr);
}
