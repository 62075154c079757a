#include "basketflex/decimal.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace basketflex {

namespace {

// Magnitude bound keeps products of two amounts inside 128 bits.
constexpr __int128 kMaxUnits = static_cast<__int128>(1'000'000'000'000'000'000LL) * 1'000'000'000LL;

std::string digits_of(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

__int128 pow10(int n) {
  __int128 p = 1;
  for (int i = 0; i < n; ++i) p *= 10;
  return p;
}

// Rounds value/divisor half-to-even; divisor > 0.
__int128 div_round_half_even(__int128 value, __int128 divisor) {
  __int128 q = value / divisor;
  __int128 r = value % divisor;
  if (r < 0) {
    r += divisor;
    q -= 1;
  }
  __int128 twice = 2 * r;
  if (twice > divisor || (twice == divisor && (q % 2 != 0))) q += 1;
  return q;
}

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  __int128 whole = 0;
  std::size_t int_digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    whole = whole * 10 + (text[pos] - '0');
    if (whole * kScale > kMaxUnits) return std::nullopt;
    ++pos;
    ++int_digits;
  }
  __int128 frac = 0;
  int frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (frac_digits == kFractionDigits) return std::nullopt;
      frac = frac * 10 + (text[pos] - '0');
      ++frac_digits;
      ++pos;
    }
    if (frac_digits == 0 && int_digits == 0) return std::nullopt;
  }
  if (pos != text.size() || (int_digits == 0 && frac_digits == 0)) return std::nullopt;
  __int128 units = whole * kScale + frac * pow10(kFractionDigits - frac_digits);
  return from_units(negative ? -units : units);
}

std::string Decimal::to_string() const {
  const bool negative = units_ < 0;
  const unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-(units_ + 1)) + 1 : static_cast<unsigned __int128>(units_);
  std::string whole = digits_of(magnitude / kScale);
  std::string frac = digits_of(magnitude % kScale);
  frac.insert(0, static_cast<std::size_t>(kFractionDigits) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = negative ? "-" : "";
  out += whole;
  if (!frac.empty()) {
    out += '.';
    out += frac;
  }
  return out;
}

double Decimal::to_double() const {
  const std::string s = to_string();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{}) throw std::logic_error("Decimal::to_double: unrepresentable value " + s);
  return value;
}

Decimal Decimal::multiply(const Decimal& other, int digits) const {
  digits = std::clamp(digits, 0, kFractionDigits);
  __int128 product = 0;  // scale 10^18
  if (__builtin_mul_overflow(units_, other.units_, &product)) {
    throw std::overflow_error("Decimal::multiply: product out of range");
  }
  const __int128 rounded = div_round_half_even(product, pow10(2 * kFractionDigits - digits));
  return from_units(rounded * pow10(kFractionDigits - digits));
}

Decimal Decimal::round(int digits) const {
  digits = std::clamp(digits, 0, kFractionDigits);
  const __int128 step = pow10(kFractionDigits - digits);
  return from_units(div_round_half_even(units_, step) * step);
}

}  // namespace basketflex
