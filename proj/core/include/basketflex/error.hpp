#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace basketflex {

enum class ErrorCode {
  // basket-core
  EmptyInput,
  EmptyIdentifier,
  NegativeWeight,
  ZeroTotal,
  NonFiniteValue,
  ItemSetMismatch,
  NonPositiveRelative,
  MissingPriceRelative,
  GapInSeries,
  AllItemsExcluded,
  UnknownItem,
  PeriodMismatch,
  // crosswalk
  ZeroBase,
  SpecInvalid,
  // ingest
  MalformedRecord,
  NonFiniteAmount,
  NegativeAmount,
  BaseMonthMissing,
  SchemaError,
  NonPositivePrice,
  WeightSumOutOfRange,
  // analysis
  InvalidConfig,
  NoOverlappingPeriods,
  FixedMonthOutOfRange,
  PeriodNotCovered,
  // synth-oracle
  InvalidSpec,
  MonthOutOfRange,
  // plumbing
  Io,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. `subjects` carries the offending
// identifiers (items, categories, months) for machine-readable reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::string> subjects = {});

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& subjects() const noexcept { return subjects_; }

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

  // Returns a copy annotated with its origin; line 0 means "whole file".
  Error at(std::string file, std::size_t line = 0) const;

 private:
  ErrorCode code_;
  std::vector<std::string> subjects_;
  std::string file_;
  std::size_t line_ = 0;
};

// Non-fatal findings produced while loading data (renormalized weights,
// gap months, zero base cells, ...).
struct Diagnostic {
  std::string code;
  std::string message;
  std::string file;
  std::size_t line = 0;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace basketflex
