#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace gasp {

/// Exact decimal number stored as mantissa * 10^-scale.
///
/// The written scale is kept so `3.0` prints back as `3.0`; equality and
/// ordering are by value, so `3.0 == 3`.
class Decimal {
 public:
  constexpr Decimal() = default;
  constexpr Decimal(std::int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {}

  static Decimal from_int(std::int64_t value) { return Decimal(value, 0); }

  /// Parses `-?[0-9]+(\.[0-9]+)?`. Throws std::invalid_argument otherwise.
  static Decimal parse(std::string_view text);

  std::int64_t mantissa() const noexcept { return mantissa_; }
  int scale() const noexcept { return scale_; }

  /// value * 10^power, exact.
  Decimal shifted(int power) const;

  bool is_negative() const noexcept { return mantissa_ < 0; }

  std::string to_string() const;
  std::size_t hash() const noexcept;

  friend bool operator==(const Decimal& a, const Decimal& b) noexcept { return compare(a, b) == 0; }
  friend std::weak_ordering operator<=>(const Decimal& a, const Decimal& b) noexcept {
    int c = compare(a, b);
    if (c < 0) return std::weak_ordering::less;
    if (c > 0) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }

 private:
  static int compare(const Decimal& a, const Decimal& b) noexcept;

  std::int64_t mantissa_ = 0;
  int scale_ = 0;
};

}  // namespace gasp
