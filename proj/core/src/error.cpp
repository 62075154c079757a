#include "basketflex/error.hpp"

#include <utility>

namespace basketflex {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyIdentifier: return "EmptyIdentifier";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ItemSetMismatch: return "ItemSetMismatch";
    case ErrorCode::NonPositiveRelative: return "NonPositiveRelative";
    case ErrorCode::MissingPriceRelative: return "MissingPriceRelative";
    case ErrorCode::GapInSeries: return "GapInSeries";
    case ErrorCode::AllItemsExcluded: return "AllItemsExcluded";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::ZeroBase: return "ZeroBase";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::NonFiniteAmount: return "NonFiniteAmount";
    case ErrorCode::NegativeAmount: return "NegativeAmount";
    case ErrorCode::BaseMonthMissing: return "BaseMonthMissing";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::WeightSumOutOfRange: return "WeightSumOutOfRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoOverlappingPeriods: return "NoOverlappingPeriods";
    case ErrorCode::FixedMonthOutOfRange: return "FixedMonthOutOfRange";
    case ErrorCode::PeriodNotCovered: return "PeriodNotCovered";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::MonthOutOfRange: return "MonthOutOfRange";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<std::string> subjects)
    : std::runtime_error(message), code_(code), subjects_(std::move(subjects)) {}

Error Error::at(std::string file, std::size_t line) const {
  Error copy = *this;
  copy.file_ = std::move(file);
  copy.line_ = line;
  return copy;
}

}  // namespace basketflex
