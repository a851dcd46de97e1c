#include "gasp/decimal.hpp"

#include <functional>
#include <limits>
#include <stdexcept>

namespace gasp {

namespace {

constexpr int kMaxScale = 18;

__int128 pow10(int n) {
  __int128 r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  if (i >= text.size()) throw std::invalid_argument("empty number");
  __int128 mantissa = 0;
  int scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point || !seen_digit) throw std::invalid_argument("malformed number: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("malformed number: " + std::string(text));
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (seen_point) ++scale;
    if (mantissa > std::numeric_limits<std::int64_t>::max() || scale > kMaxScale) {
      throw std::invalid_argument("number out of range: " + std::string(text));
    }
  }
  if (!seen_digit || (seen_point && text.back() == '.')) {
    throw std::invalid_argument("malformed number: " + std::string(text));
  }
  auto m = static_cast<std::int64_t>(mantissa);
  return Decimal(negative ? -m : m, scale);
}

Decimal Decimal::shifted(int power) const {
  if (power <= 0) {
    if (scale_ - power > kMaxScale) throw std::out_of_range("decimal scale overflow");
    return Decimal(mantissa_, scale_ - power);
  }
  // Consume scale first so 0.16 * 100 becomes 16 rather than 16.00.
  int from_scale = power < scale_ ? power : scale_;
  __int128 m = static_cast<__int128>(mantissa_) * pow10(power - from_scale);
  if (m > std::numeric_limits<std::int64_t>::max() || m < std::numeric_limits<std::int64_t>::min()) {
    throw std::out_of_range("decimal overflow");
  }
  return Decimal(static_cast<std::int64_t>(m), scale_ - from_scale);
}

std::string Decimal::to_string() const {
  bool negative = mantissa_ < 0;
  // Avoid overflow on INT64_MIN by working in __int128.
  __int128 m = mantissa_;
  if (negative) m = -m;
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(m % 10)));
    m /= 10;
  } while (m > 0);
  if (scale_ > 0) {
    while (static_cast<int>(digits.size()) <= scale_) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - scale_, '.');
  }
  return negative ? "-" + digits : digits;
}

std::size_t Decimal::hash() const noexcept {
  std::int64_t m = mantissa_;
  int s = scale_;
  while (s > 0 && m % 10 == 0) {
    m /= 10;
    --s;
  }
  return std::hash<std::int64_t>{}(m) * 31u + static_cast<std::size_t>(s);
}

int Decimal::compare(const Decimal& a, const Decimal& b) noexcept {
  int scale = a.scale_ > b.scale_ ? a.scale_ : b.scale_;
  __int128 x = static_cast<__int128>(a.mantissa_) * pow10(scale - a.scale_);
  __int128 y = static_cast<__int128>(b.mantissa_) * pow10(scale - b.scale_);
  return x < y ? -1 : (x > y ? 1 : 0);
}

}  // namespace gasp
