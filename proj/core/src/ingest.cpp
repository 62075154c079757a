#include "basketflex/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "csv.hpp"

namespace basketflex {

namespace {

using detail::CsvTable;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()), {path.string()});
  return in;
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool looks_non_finite(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower.find("nan") != std::string::npos || lower.find("inf") != std::string::npos;
}

}  // namespace

CategoryId::CategoryId(std::string id) : id_(std::move(id)) {
  if (id_.empty()) throw Error(ErrorCode::EmptyIdentifier, "category identifier must be non-empty");
}

// ---------------------------------------------------------------------------
// ExpenditurePanel

ExpenditurePanel::ExpenditurePanel(Month first, Month last) {
  for (Month m = first; m <= last; m = m.next()) months_.push_back(m);
}

std::set<CategoryId> ExpenditurePanel::categories() const {
  std::set<CategoryId> out;
  for (const auto& [category, _] : totals_) out.insert(category);
  return out;
}

Decimal ExpenditurePanel::total(const CategoryId& category, Month m) const {
  auto it = totals_.find(category);
  if (it == totals_.end() || !contains(m)) return Decimal{};
  return it->second[static_cast<std::size_t>(m - months_.front())];
}

Decimal ExpenditurePanel::month_total(Month m) const {
  Decimal sum;
  for (const auto& [category, _] : totals_) sum += total(category, m);
  return sum;
}

void ExpenditurePanel::set(const CategoryId& category, Month m, Decimal value) {
  if (!contains(m)) {
    throw Error(ErrorCode::MonthOutOfRange, fmt::format("month {} outside the panel range", m.to_string()),
                {m.to_string()});
  }
  auto& row = totals_[category];
  row.resize(months_.size());
  row[static_cast<std::size_t>(m - months_.front())] = value;
}

// ---------------------------------------------------------------------------
// Aggregation

void PanelBuilder::add(const DailyExpenditureRecord& record) {
  if (record.amount.is_negative() && !options_.allow_negative_amounts) {
    throw Error(ErrorCode::NegativeAmount,
                fmt::format("negative amount {} for '{}' on {}", record.amount.to_string(), record.category.id(),
                            format_date(record.date)),
                {record.category.id()});
  }
  const Month m = Month::of(record.date);
  cells_[{record.category, m}] += record.amount;
  months_seen_.insert(m);
}

void PanelBuilder::merge(const PanelBuilder& other) {
  for (const auto& [key, value] : other.cells_) cells_[key] += value;
  months_seen_.insert(other.months_seen_.begin(), other.months_seen_.end());
}

ExpenditurePanel PanelBuilder::finish() const {
  if (months_seen_.empty()) throw Error(ErrorCode::EmptyInput, "no expenditure records");
  ExpenditurePanel panel(*months_seen_.begin(), *months_seen_.rbegin());

  std::set<CategoryId> categories;
  for (const auto& [key, _] : cells_) categories.insert(key.first);

  for (const auto& category : categories) {
    for (Month m : panel.months()) {
      auto it = cells_.find({category, m});
      if (it == cells_.end()) {
        panel.set(category, m, Decimal{});
        if (months_seen_.contains(m)) {
          panel.add_diagnostic({"MissingCell",
                                fmt::format("no records for '{}' in {}; total set to 0", category.id(),
                                            m.to_string()),
                                "", 0});
        }
        continue;
      }
      if (it->second.is_negative()) {
        throw Error(ErrorCode::NegativeAmount,
                    fmt::format("net expenditure for '{}' in {} is negative ({})", category.id(), m.to_string(),
                                it->second.to_string()),
                    {category.id(), m.to_string()});
      }
      panel.set(category, m, it->second);
    }
  }
  for (Month m : panel.months()) {
    if (!months_seen_.contains(m)) {
      panel.add_diagnostic(
          {"GapWarning", fmt::format("no records at all in {}; every category set to 0", m.to_string()), "", 0});
    }
  }
  return panel;
}

ExpenditurePanel aggregate_daily(std::span<const DailyExpenditureRecord> records, IngestOptions options) {
  PanelBuilder builder(options);
  for (const auto& r : records) builder.add(r);
  return builder.finish();
}

// ---------------------------------------------------------------------------
// Base period

double BaseExpenditure::mean(const CategoryId& category) const {
  auto it = sums.find(category);
  if (it == sums.end() || months.empty()) return 0.0;
  return it->second.to_double() / static_cast<double>(months.size());
}

std::vector<CategoryId> BaseExpenditure::zero_categories() const {
  std::vector<CategoryId> out;
  for (const auto& [category, sum] : sums) {
    if (sum.is_zero()) out.push_back(category);
  }
  return out;
}

BaseExpenditure base_period(const ExpenditurePanel& panel, std::span<const Month> base_months) {
  if (base_months.empty()) throw Error(ErrorCode::EmptyInput, "no base months given");
  BaseExpenditure base;
  for (Month m : base_months) {
    if (std::find(base.months.begin(), base.months.end(), m) != base.months.end()) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("base month {} listed twice", m.to_string()),
                  {m.to_string()});
    }
    if (!panel.contains(m)) {
      throw Error(ErrorCode::BaseMonthMissing, fmt::format("base month {} is not in the panel", m.to_string()),
                  {m.to_string()});
    }
    base.months.push_back(m);
  }
  for (const auto& category : panel.categories()) {
    Decimal sum;
    for (Month m : base.months) sum += panel.total(category, m);
    base.sums.emplace(category, sum);
  }
  return base;
}

// ---------------------------------------------------------------------------
// File loaders

std::vector<DailyExpenditureRecord> parse_expenditures(std::istream& in, const std::string& source,
                                                       IngestOptions options) {
  const auto table = CsvTable::read(in, source);
  const auto date_col = table.column("date");
  const auto category_col = table.column("category");
  const auto amount_col = table.column("amount");

  std::vector<DailyExpenditureRecord> records;
  records.reserve(table.rows().size());
  for (const auto& row : table.rows()) {
    const auto& date_text = table.field(row, date_col);
    const auto& category_text = table.field(row, category_col);
    const auto& amount_text = table.field(row, amount_col);

    auto date = parse_date(date_text);
    if (!date) {
      throw Error(ErrorCode::MalformedRecord, fmt::format("invalid date '{}'", date_text), {"date"})
          .at(source, row.line);
    }
    if (category_text.empty()) {
      throw Error(ErrorCode::MalformedRecord, "empty category", {"category"}).at(source, row.line);
    }
    auto amount = Decimal::parse(amount_text);
    if (!amount) {
      const auto code = looks_non_finite(amount_text) ? ErrorCode::NonFiniteAmount : ErrorCode::MalformedRecord;
      throw Error(code, fmt::format("invalid amount '{}'", amount_text), {"amount"}).at(source, row.line);
    }
    if (amount->is_negative() && !options.allow_negative_amounts) {
      throw Error(ErrorCode::NegativeAmount, fmt::format("negative amount '{}'", amount_text), {"amount"})
          .at(source, row.line);
    }
    records.push_back({*date, CategoryId(category_text), *amount});
  }
  return records;
}

ExpenditurePanel load_expenditures(std::istream& in, const std::string& source, IngestOptions options) {
  const auto records = parse_expenditures(in, source, options);
  try {
    auto panel = aggregate_daily(records, options);
    return panel;
  } catch (const Error& e) {
    throw e.at(source);
  }
}

ExpenditurePanel load_expenditures(const std::filesystem::path& path, IngestOptions options) {
  auto in = open_input(path);
  auto panel = load_expenditures(in, path.string(), options);
  return panel;
}

WeightVector load_weights(std::istream& in, const std::string& source, Diagnostics* warnings) {
  const auto table = CsvTable::read(in, source);
  const auto item_col = table.column("item");
  const auto weight_col = table.column("weight");
  const auto label_col = table.find_column("label");

  std::map<ItemId, double> raw;
  for (const auto& row : table.rows()) {
    const auto& id = table.field(row, item_col);
    const auto& weight_text = table.field(row, weight_col);
    if (id.empty()) throw Error(ErrorCode::SchemaError, "empty item", {"item"}).at(source, row.line);
    std::string label;
    if (label_col != std::string::npos && label_col < row.fields.size()) label = row.fields[label_col];

    auto weight = parse_double(weight_text);
    if (!weight) {
      throw Error(ErrorCode::SchemaError, fmt::format("invalid weight '{}'", weight_text), {"weight"})
          .at(source, row.line);
    }
    if (!std::isfinite(*weight)) {
      throw Error(ErrorCode::NonFiniteValue, fmt::format("weight of '{}' is not finite", id), {id})
          .at(source, row.line);
    }
    if (*weight < 0.0) {
      throw Error(ErrorCode::NegativeWeight, fmt::format("weight of '{}' is negative", id), {id})
          .at(source, row.line);
    }
    if (!raw.emplace(ItemId(id, label), *weight).second) {
      throw Error(ErrorCode::SchemaError, fmt::format("item '{}' listed twice", id), {"item"}).at(source, row.line);
    }
  }
  if (raw.empty()) throw Error(ErrorCode::EmptyInput, "weights file has no rows").at(source);

  double sum = 0.0;
  for (const auto& [_, w] : raw) sum += w;
  const double deviation = std::abs(sum - 1.0);
  if (!(deviation < kWeightSumHardLimit)) {
    throw Error(ErrorCode::WeightSumOutOfRange,
                fmt::format("weights sum to {} (allowed deviation from 1 is below {})", sum, kWeightSumHardLimit),
                {fmt::format("{}", sum)})
        .at(source);
  }
  if (deviation > kWeightSumSilentTolerance && warnings) {
    warnings->push_back({"WeightsRenormalized", fmt::format("weights sum to {}; renormalized to 1", sum), source, 0});
  }
  return WeightVector::normalize(raw);
}

WeightVector load_weights(const std::filesystem::path& path, Diagnostics* warnings) {
  auto in = open_input(path);
  return load_weights(in, path.string(), warnings);
}

PriceSet load_prices(std::istream& in, const std::string& source) {
  const auto table = CsvTable::read(in, source);
  const auto item_col = table.column("item");
  const auto period_col = table.column("period");
  const auto relative_col = table.column("relative");

  struct Point {
    Month month;
    double relative;
    std::size_t line;
  };
  std::map<std::string, std::vector<Point>> by_item;
  for (const auto& row : table.rows()) {
    const auto& id = table.field(row, item_col);
    const auto& period_text = table.field(row, period_col);
    const auto& relative_text = table.field(row, relative_col);
    if (id.empty()) throw Error(ErrorCode::SchemaError, "empty item", {"item"}).at(source, row.line);
    auto month = Month::parse(period_text);
    if (!month) {
      throw Error(ErrorCode::SchemaError, fmt::format("invalid period '{}'", period_text), {"period"})
          .at(source, row.line);
    }
    auto relative = parse_double(relative_text);
    if (!relative) {
      throw Error(ErrorCode::SchemaError, fmt::format("invalid relative '{}'", relative_text), {"relative"})
          .at(source, row.line);
    }
    if (!std::isfinite(*relative) || *relative <= 0.0) {
      throw Error(ErrorCode::NonPositivePrice,
                  fmt::format("price relative for '{}' at {} must be positive (got {})", id, period_text,
                              relative_text),
                  {id, period_text})
          .at(source, row.line);
    }
    by_item[id].push_back({*month, *relative, row.line});
  }
  if (by_item.empty()) throw Error(ErrorCode::EmptyInput, "prices file has no rows").at(source);

  PriceSet prices;
  for (auto& [id, points] : by_item) {
    std::stable_sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.month < b.month; });
    std::vector<std::pair<Month, double>> series;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (k > 0 && points[k].month == points[k - 1].month) {
        throw Error(ErrorCode::SchemaError,
                    fmt::format("duplicate period {} for '{}'", points[k].month.to_string(), id), {"period"})
            .at(source, points[k].line);
      }
      if (k > 0 && points[k].month != points[k - 1].month.next()) {
        throw Error(ErrorCode::GapInSeries,
                    fmt::format("price series for '{}' jumps from {} to {}", id, points[k - 1].month.to_string(),
                                points[k].month.to_string()),
                    {id, points[k].month.to_string()})
            .at(source, points[k].line);
      }
      series.emplace_back(points[k].month, points[k].relative);
    }
    ItemId item(id);
    prices.emplace(item, PriceRelativeSeries(item, std::move(series)));
  }
  return prices;
}

PriceSet load_prices(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_prices(in, path.string());
}

void write_panel_csv(std::ostream& out, const ExpenditurePanel& panel) {
  out << "period,category,total\n";
  const auto categories = panel.categories();
  for (Month m : panel.months()) {
    for (const auto& category : categories) {
      out << m.to_string() << ',' << detail::csv_escape(category.id()) << ',' << panel.total(category, m).to_string()
          << '\n';
    }
  }
}

ExpenditurePanel read_panel_csv(std::istream& in, const std::string& source) {
  const auto table = CsvTable::read(in, source);
  const auto period_col = table.column("period");
  const auto category_col = table.column("category");
  const auto total_col = table.column("total");

  struct Cell {
    Month month;
    std::string category;
    Decimal total;
  };
  std::vector<Cell> cells;
  for (const auto& row : table.rows()) {
    auto month = Month::parse(table.field(row, period_col));
    if (!month) throw Error(ErrorCode::SchemaError, "invalid period", {"period"}).at(source, row.line);
    const auto& category = table.field(row, category_col);
    if (category.empty()) throw Error(ErrorCode::SchemaError, "empty category", {"category"}).at(source, row.line);
    auto total = Decimal::parse(table.field(row, total_col));
    if (!total) throw Error(ErrorCode::SchemaError, "invalid total", {"total"}).at(source, row.line);
    if (total->is_negative()) {
      throw Error(ErrorCode::NegativeAmount, "negative total", {"total"}).at(source, row.line);
    }
    cells.push_back({*month, category, *total});
  }
  if (cells.empty()) throw Error(ErrorCode::EmptyInput, "panel file has no rows").at(source);
  auto [lo, hi] = std::minmax_element(cells.begin(), cells.end(),
                                      [](const Cell& a, const Cell& b) { return a.month < b.month; });
  ExpenditurePanel panel(lo->month, hi->month);
  for (const auto& c : cells) panel.set(CategoryId(c.category), c.month, c.total);
  return panel;
}

}  // namespace basketflex
