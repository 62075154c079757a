#include "commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "basketflex/error.hpp"
#include "basketflex/report.hpp"
#include "basketflex/synth.hpp"

namespace basketflex::cli {

namespace {

using nlohmann::ordered_json;

void log_diagnostics(const Diagnostics& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.file.empty()) {
      spdlog::warn("{}: {}", d.code, d.message);
    } else if (d.line == 0) {
      spdlog::warn("{}: {} ({})", d.code, d.message, d.file);
    } else {
      spdlog::warn("{}: {} ({}:{})", d.code, d.message, d.file, d.line);
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()), {path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::Io, fmt::format("cannot create output directory '{}'", dir.string()), {dir.string()});
  }
}

struct Inputs {
  WeightVector weights;
  PriceSet prices;
  ExpenditurePanel panel;
  CrosswalkSpec crosswalk;
};

Inputs load_inputs(const RunManifest& m) {
  m.validate();
  Diagnostics warnings;
  Inputs in{load_weights(m.weights, &warnings), load_prices(m.prices), load_expenditures(m.expenditures, m.ingest),
            load_crosswalk(m.crosswalk)};
  log_diagnostics(warnings);
  log_diagnostics(in.panel.diagnostics());
  spdlog::info("loaded {} items, {} price series, {} panel months, {} crosswalk rules", in.weights.size(),
               in.prices.size(), in.panel.months().size(), in.crosswalk.rules.size());
  return in;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return report_failure(err, e);
  }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", temp.string()), {temp.string()});
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, fmt::format("short write to '{}'", temp.string()), {temp.string()});
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw Error(ErrorCode::Io, fmt::format("cannot move output into place at '{}'", path.string()), {path.string()});
  }
}

int report_failure(std::ostream& err, const std::exception& failure) {
  ordered_json report;
  int status = kExitInternalError;
  if (const auto* e = dynamic_cast<const Error*>(&failure)) {
    status = e->code() == ErrorCode::InvariantViolation ? kExitInternalError : kExitInputError;
    report["error"] = std::string(to_string(e->code()));
    report["message"] = e->what();
    report["file"] = e->file();
    report["line"] = e->line();
    report["subjects"] = e->subjects();
  } else {
    report["error"] = "Internal";
    report["message"] = failure.what();
    report["file"] = "";
    report["line"] = 0;
    report["subjects"] = ordered_json::array();
  }
  err << report.dump() << '\n';
  return status;
}

int run_command(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Inputs in = load_inputs(manifest);
    const ScenarioResult result =
        manifest.config.fixed_weight_month
            ? run_fixed_weight(manifest.config, in.weights, in.prices, in.panel, in.crosswalk)
            : run_scenario(manifest.config, in.weights, in.prices, in.panel, in.crosswalk);

    // Render everything before touching the output directory so a failure
    // leaves no partial tree behind.
    std::vector<std::pair<std::string, std::string>> files;
    if (manifest.write_json) files.emplace_back(kScenarioJson, scenario_to_json(result));
    if (manifest.write_csv) {
      std::ostringstream inflation, weights, contributions, bias;
      write_inflation_csv(inflation, result);
      write_weights_csv(weights, result);
      write_contributions_csv(contributions, result);
      write_bias_csv(bias, result);
      files.emplace_back(kInflationCsv, inflation.str());
      files.emplace_back(kWeightsCsv, weights.str());
      files.emplace_back(kContributionsCsv, contributions.str());
      files.emplace_back(kBiasCsv, bias.str());
    }

    ensure_directory(manifest.out_dir);
    for (const auto& [name, content] : files) write_file_atomic(manifest.out_dir / name, content);
    spdlog::info("{} variant over {} months written to {}", result.variant(), result.periods.size(),
                 manifest.out_dir.string());
    out << fmt::format("{} files written to {}\n", files.size(), manifest.out_dir.string());
    return kExitOk;
  });
}

int validate_command(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Diagnostics warnings;
    manifest.validate();
    const WeightVector weights = load_weights(manifest.weights, &warnings);
    const PriceSet prices = load_prices(manifest.prices);
    const ExpenditurePanel panel = load_expenditures(manifest.expenditures, manifest.ingest);
    const CrosswalkSpec spec = load_crosswalk(manifest.crosswalk);
    for (const auto& d : panel.diagnostics()) warnings.push_back(d);
    log_diagnostics(warnings);

    const std::set<ItemId> items = weights.items();
    const ValidationReport report = validate(spec, items, panel.categories());

    ordered_json issues = ordered_json::array();
    for (const auto& issue : report.issues) {
      issues.push_back({{"kind", std::string(to_string(issue.kind))},
                        {"subjects", issue.subjects},
                        {"message", issue.message}});
    }
    ordered_json unpriced = ordered_json::array();
    for (const auto& item : weights.items()) {
      if (!prices.contains(item)) unpriced.push_back(item.id());
    }
    ordered_json warning_list = ordered_json::array();
    for (const auto& d : warnings) {
      warning_list.push_back({{"code", d.code}, {"message", d.message}, {"file", d.file}, {"line", d.line}});
    }
    // Base months are checked here too; they fail the same way `run` would.
    base_period(panel, manifest.config.base_months);

    const bool ok = report.ok() && unpriced.empty();
    ordered_json doc;
    doc["ok"] = ok;
    doc["crosswalk_version"] = spec.version;
    doc["items"] = weights.size();
    doc["categories"] = panel.categories().size();
    doc["panel_months"] = {panel.months().front().to_string(), panel.months().back().to_string()};
    doc["issues"] = issues;
    doc["unpriced_items"] = unpriced;
    doc["warnings"] = warning_list;
    out << doc.dump(2) << '\n';
    return ok ? kExitOk : kExitInputError;
  });
}

int generate_command(const GenerateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SyntheticEconomySpec spec = load_economy(options.spec);
    const GeneratedData data = generate(spec);
    ensure_directory(options.out_dir);
    write_file_atomic(options.out_dir / "weights.csv", data.weights_csv);
    write_file_atomic(options.out_dir / "prices.csv", data.prices_csv);
    write_file_atomic(options.out_dir / "expenditures.csv", data.expenditures_csv);
    out << fmt::format("3 files written to {}\n", options.out_dir.string());
    return kExitOk;
  });
}

int compare_command(const CompareOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.results.empty()) throw Error(ErrorCode::InvalidConfig, "no result files given");
    if (options.format != "csv" && options.format != "json") {
      throw Error(ErrorCode::InvalidConfig, fmt::format("unknown output format '{}'", options.format),
                  {options.format});
    }
    const auto period = Month::parse(options.period);
    if (!period) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("'{}' is not a month (YYYY-MM)", options.period),
                  {options.period});
    }
    std::vector<ScenarioResult> results;
    for (const auto& path : options.results) results.push_back(scenario_from_json(read_file(path), path.string()));
    const ComparisonTable table = compare_countries(results, *period);
    const std::string text = options.format == "csv" ? comparison_to_csv(table) : comparison_to_json(table);
    if (options.out) {
      if (options.out->has_parent_path()) ensure_directory(options.out->parent_path());
      write_file_atomic(*options.out, text);
    } else {
      out << text;
    }
    return kExitOk;
  });
}

}  // namespace basketflex::cli
