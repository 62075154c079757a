#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace basketflex {

// Signed fixed-point decimal with nine fractional digits, backed by a 128-bit
// integer. Addition is exact, so sums are independent of accumulation order.
// Used for monetary amounts; converted to double only when ratios are taken.
class Decimal {
 public:
  static constexpr int kFractionDigits = 9;
  static constexpr std::int64_t kScale = 1'000'000'000;

  constexpr Decimal() = default;

  static constexpr Decimal from_units(__int128 units) {
    Decimal d;
    d.units_ = units;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t value) { return from_units(static_cast<__int128>(value) * kScale); }

  // Plain decimal notation: optional sign, digits, optional fraction of at
  // most nine digits. No exponents, no thousands separators.
  static std::optional<Decimal> parse(std::string_view text);

  constexpr __int128 units() const { return units_; }

  // Shortest exact representation ("12.5", "-0.000000001", "3").
  std::string to_string() const;
  // Correctly rounded conversion of the exact decimal value.
  double to_double() const;

  // Product rounded half-to-even to `digits` fractional digits (<= 9).
  Decimal multiply(const Decimal& other, int digits = kFractionDigits) const;
  Decimal round(int digits) const;

  constexpr bool is_zero() const { return units_ == 0; }
  constexpr bool is_negative() const { return units_ < 0; }

  constexpr Decimal& operator+=(const Decimal& o) {
    units_ += o.units_;
    return *this;
  }
  constexpr Decimal& operator-=(const Decimal& o) {
    units_ -= o.units_;
    return *this;
  }
  friend constexpr Decimal operator+(Decimal a, const Decimal& b) { return a += b; }
  friend constexpr Decimal operator-(Decimal a, const Decimal& b) { return a -= b; }
  friend constexpr Decimal operator-(const Decimal& a) { return from_units(-a.units_); }
  friend constexpr bool operator==(const Decimal&, const Decimal&) = default;
  friend constexpr std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    return a.units_ <=> b.units_;
  }

 private:
  __int128 units_ = 0;
};

}  // namespace basketflex
