#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace splitweave {

/// Fixed-point decimal with six fractional digits. Program literals are held
/// in this form so that text round trips and equality are exact.
class Decimal {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Decimal() = default;
  static constexpr Decimal from_micros(std::int64_t micros) {
    Decimal d;
    d.micros_ = micros;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t v) { return from_micros(v * kScale); }
  // Rounds half away from zero to six fractional digits.
  static Decimal from_double(double v);
  // Accepts [-]digits[.digits]; extra fractional digits are rounded.
  static std::optional<Decimal> parse(std::string_view text);

  constexpr std::int64_t micros() const { return micros_; }
  double to_double() const { return static_cast<double>(micros_) / kScale; }
  constexpr bool is_integer() const { return micros_ % kScale == 0; }
  // Integer value, rounding half up.
  std::int64_t round_half_up() const;
  std::string str() const;

  constexpr auto operator<=>(const Decimal&) const = default;

 private:
  std::int64_t micros_ = 0;
};

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  static std::optional<Color> parse(std::string_view text);
  std::string hex() const;

  constexpr auto operator<=>(const Color&) const = default;
};

// Componentwise sRGB interpolation, rounded half up.
Color lerp(Color a, Color b, double t);

}  // namespace splitweave
