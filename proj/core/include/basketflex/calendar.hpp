#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace basketflex {

// A calendar month (year + month). Ordered, and supports month arithmetic
// through its ordinal (months since year 0).
class Month {
 public:
  constexpr Month() = default;
  constexpr Month(int year, unsigned month) : ordinal_(year * 12 + static_cast<int>(month) - 1) {}

  static constexpr Month from_ordinal(int ordinal) {
    Month m;
    m.ordinal_ = ordinal;
    return m;
  }

  // Accepts "YYYY-MM".
  static std::optional<Month> parse(std::string_view text);
  static Month of(std::chrono::year_month_day date);

  constexpr int year() const { return ordinal_ >= 0 ? ordinal_ / 12 : (ordinal_ - 11) / 12; }
  constexpr unsigned month() const { return static_cast<unsigned>(ordinal_ - year() * 12 + 1); }
  constexpr int ordinal() const { return ordinal_; }

  unsigned days() const;
  std::chrono::year_month_day first_day() const;
  std::chrono::year_month_day last_day() const;

  std::string to_string() const;

  constexpr Month next() const { return from_ordinal(ordinal_ + 1); }
  constexpr Month prev() const { return from_ordinal(ordinal_ - 1); }

  friend constexpr Month operator+(Month m, int n) { return from_ordinal(m.ordinal_ + n); }
  friend constexpr Month operator-(Month m, int n) { return from_ordinal(m.ordinal_ - n); }
  friend constexpr int operator-(Month a, Month b) { return a.ordinal_ - b.ordinal_; }
  friend constexpr auto operator<=>(const Month&, const Month&) = default;

 private:
  int ordinal_ = 0;
};

// Accepts ISO-8601 calendar dates "YYYY-MM-DD"; rejects impossible dates.
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day date);

}  // namespace basketflex
