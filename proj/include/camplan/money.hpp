#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace camplan {

/// Hourly price held as an exact count of thousandths of a dollar.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_millis(std::int64_t millis) { return Money(millis); }

  /// Parses a plain decimal such as "0.419" or "7". At most three
  /// fractional digits may be nonzero.
  static Money parse(std::string_view text);

  /// Rounds a dollar amount to the nearest thousandth.
  static Money from_dollars(double dollars);

  constexpr std::int64_t millis() const { return millis_; }
  constexpr double dollars() const { return static_cast<double>(millis_) / 1000.0; }

  /// Fixed three-decimal rendering, e.g. "6.919".
  std::string str() const;

  constexpr Money& operator+=(Money other) {
    millis_ += other.millis_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    millis_ -= other.millis_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.millis_ * k); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t millis) : millis_(millis) {}

  std::int64_t millis_ = 0;
};

}  // namespace camplan
