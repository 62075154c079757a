#pragma once

#include <iosfwd>
#include <string>

#include "basketflex/analysis.hpp"

namespace basketflex {

// Machine-readable scenario dump; see docs/outputs.md for the schema.
std::string scenario_to_json(const ScenarioResult& result);
// Throws SchemaError.
ScenarioResult scenario_from_json(const std::string& text, const std::string& source = "<json>");

// Tidy CSV exports, one observation per row.
// inflation.csv: variant, period, series, monthly_pct, annual_pct, lockdown
void write_inflation_csv(std::ostream& out, const ScenarioResult& result);
// weights.csv: variant, period, basket, item, weight, lockdown
void write_weights_csv(std::ostream& out, const ScenarioResult& result);
// contributions.csv: variant, period, series, item, contribution_pp
void write_contributions_csv(std::ostream& out, const ScenarioResult& result);
// bias.csv: variant, period, measure, monthly_bias_pp, annual_bias_pp, lockdown
void write_bias_csv(std::ostream& out, const ScenarioResult& result);

std::string comparison_to_csv(const ComparisonTable& table);
std::string comparison_to_json(const ComparisonTable& table);

}  // namespace basketflex
