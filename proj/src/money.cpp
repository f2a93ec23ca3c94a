#include "camplan/money.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "camplan/error.hpp"

namespace camplan {

Money Money::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw ParseError("invalid amount '" + std::string(text) + "'");

  std::int64_t millis = 0;
  for (char c : whole) {
    if (c < '0' || c > '9') throw ParseError("invalid amount '" + std::string(text) + "'");
    millis = millis * 10 + (c - '0');
  }
  millis *= 1000;
  std::int64_t scale = 100;
  for (std::size_t i = 0; i < frac.size(); ++i) {
    char c = frac[i];
    if (c < '0' || c > '9') throw ParseError("invalid amount '" + std::string(text) + "'");
    if (i < 3) {
      millis += (c - '0') * scale;
      scale /= 10;
    } else if (c != '0') {
      throw ParseError("amount '" + std::string(text) + "' is finer than 0.001");
    }
  }
  return Money(negative ? -millis : millis);
}

Money Money::from_dollars(double dollars) {
  if (!std::isfinite(dollars)) throw ParseError("amount is not finite");
  return Money(std::llround(dollars * 1000.0));
}

std::string Money::str() const {
  std::int64_t a = std::llabs(millis_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", millis_ < 0 ? "-" : "",
                static_cast<long long>(a / 1000), static_cast<long long>(a % 1000));
  return buf;
}

}  // namespace camplan
