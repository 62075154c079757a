#pragma once

#include <chrono>
#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "basketflex/basket.hpp"
#include "basketflex/calendar.hpp"
#include "basketflex/decimal.hpp"
#include "basketflex/error.hpp"

namespace basketflex {

// Identifier of an expenditure-data (card transaction) category.
class CategoryId {
 public:
  CategoryId() = default;
  explicit CategoryId(std::string id);

  const std::string& id() const { return id_; }

  friend bool operator==(const CategoryId&, const CategoryId&) = default;
  friend std::strong_ordering operator<=>(const CategoryId& a, const CategoryId& b) { return a.id_ <=> b.id_; }

 private:
  std::string id_;
};

struct DailyExpenditureRecord {
  std::chrono::year_month_day date;
  CategoryId category;
  Decimal amount;
};

struct IngestOptions {
  // Refunds and chargebacks appear as negative amounts. Rejected unless set;
  // even then a month's net total per category must stay non-negative.
  bool allow_negative_amounts = false;
};

// Monthly expenditure totals per category over a consecutive month range.
// Cells with no records hold zero.
class ExpenditurePanel {
 public:
  ExpenditurePanel() = default;
  ExpenditurePanel(Month first, Month last);

  const std::vector<Month>& months() const { return months_; }
  std::set<CategoryId> categories() const;
  bool contains(Month m) const { return !months_.empty() && m >= months_.front() && m <= months_.back(); }

  Decimal total(const CategoryId& category, Month m) const;
  Decimal month_total(Month m) const;
  void set(const CategoryId& category, Month m, Decimal value);

  const Diagnostics& diagnostics() const { return diagnostics_; }
  void add_diagnostic(Diagnostic d) { diagnostics_.push_back(std::move(d)); }

  // Same months, categories and cell values; diagnostics are ignored.
  friend bool operator==(const ExpenditurePanel& a, const ExpenditurePanel& b) {
    return a.months_ == b.months_ && a.totals_ == b.totals_;
  }

 private:
  std::vector<Month> months_;
  std::map<CategoryId, std::vector<Decimal>> totals_;
  Diagnostics diagnostics_;
};

// Accumulates daily records into month cells. Merging is associative and
// commutative, so input may be sharded arbitrarily.
class PanelBuilder {
 public:
  explicit PanelBuilder(IngestOptions options = {}) : options_(options) {}

  // Throws NegativeAmount unless negative amounts are allowed.
  void add(const DailyExpenditureRecord& record);
  void merge(const PanelBuilder& other);

  // Throws EmptyInput when nothing was added. Months with no records at all
  // get a GapWarning; absent category cells get a MissingCell warning.
  ExpenditurePanel finish() const;

 private:
  IngestOptions options_;
  std::map<std::pair<CategoryId, Month>, Decimal> cells_;
  std::set<Month> months_seen_;
};

ExpenditurePanel aggregate_daily(std::span<const DailyExpenditureRecord> records, IngestOptions options = {});

// Base-period expenditure per category, kept as exact sums over the base
// months so pooled totals stay exact; mean() gives the monthly average.
struct BaseExpenditure {
  std::vector<Month> months;
  std::map<CategoryId, Decimal> sums;

  double mean(const CategoryId& category) const;
  std::vector<CategoryId> zero_categories() const;
};

// Throws EmptyInput, InvalidConfig (duplicate month) or BaseMonthMissing(month).
BaseExpenditure base_period(const ExpenditurePanel& panel, std::span<const Month> base_months);

// expenditures.csv: date (YYYY-MM-DD), category, amount (plain decimal).
std::vector<DailyExpenditureRecord> parse_expenditures(std::istream& in, const std::string& source,
                                                       IngestOptions options = {});
ExpenditurePanel load_expenditures(std::istream& in, const std::string& source, IngestOptions options = {});
ExpenditurePanel load_expenditures(const std::filesystem::path& path, IngestOptions options = {});

// Largest deviation of a weights file's sum from one that is accepted
// silently, and the bound beyond which the file is rejected.
inline constexpr double kWeightSumSilentTolerance = 1e-6;
inline constexpr double kWeightSumHardLimit = 1e-2;

// weights.csv: item, weight [, label].
WeightVector load_weights(std::istream& in, const std::string& source, Diagnostics* warnings = nullptr);
WeightVector load_weights(const std::filesystem::path& path, Diagnostics* warnings = nullptr);

// prices.csv: item, period (YYYY-MM), relative (factor).
PriceSet load_prices(std::istream& in, const std::string& source);
PriceSet load_prices(const std::filesystem::path& path);

// Monthly panel exchange format: period, category, total.
void write_panel_csv(std::ostream& out, const ExpenditurePanel& panel);
ExpenditurePanel read_panel_csv(std::istream& in, const std::string& source);

}  // namespace basketflex
