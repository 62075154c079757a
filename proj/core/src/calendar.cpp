#include "basketflex/calendar.hpp"

#include <charconv>

#include <fmt/format.h>

namespace basketflex {

namespace {

bool parse_fixed_int(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<Month> Month::parse(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  int year = 0;
  int month = 0;
  if (!parse_fixed_int(text.substr(0, 4), year) || !parse_fixed_int(text.substr(5, 2), month)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12) return std::nullopt;
  return Month(year, static_cast<unsigned>(month));
}

Month Month::of(std::chrono::year_month_day date) {
  return Month(static_cast<int>(date.year()), static_cast<unsigned>(date.month()));
}

unsigned Month::days() const {
  return static_cast<unsigned>(last_day().day());
}

std::chrono::year_month_day Month::first_day() const {
  return std::chrono::year_month_day{std::chrono::year{year()}, std::chrono::month{month()},
                                     std::chrono::day{1}};
}

std::chrono::year_month_day Month::last_day() const {
  return std::chrono::year_month_day{
      std::chrono::year_month_day_last{std::chrono::year{year()},
                                       std::chrono::month_day_last{std::chrono::month{month()}}}};
}

std::string Month::to_string() const {
  return fmt::format("{:04}-{:02}", year(), month());
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  int m = 0;
  int d = 0;
  if (!parse_fixed_int(text.substr(0, 4), y) || !parse_fixed_int(text.substr(5, 2), m) ||
      !parse_fixed_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                   std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(std::chrono::year_month_day date) {
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

}  // namespace basketflex
