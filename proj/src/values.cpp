#include "splitweave/values.hpp"

#include <cmath>
#include <cstdio>

namespace splitweave {

Decimal Decimal::from_double(double v) {
  return from_micros(static_cast<std::int64_t>(std::llround(v * static_cast<double>(kScale))));
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  std::int64_t whole = 0;
  std::size_t whole_digits = 0;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++whole_digits) {
    if (whole > 1'000'000'000'000LL) return std::nullopt;
    whole = whole * 10 + (text[i] - '0');
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  bool round_up = false;
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++frac_digits) {
      if (frac_digits < 6) {
        frac = frac * 10 + (text[i] - '0');
      } else if (frac_digits == 6) {
        round_up = text[i] >= '5';
      }
    }
    if (frac_digits == 0) return std::nullopt;
  }
  if (i != text.size() || whole_digits == 0) return std::nullopt;
  for (std::size_t k = frac_digits; k < 6; ++k) frac *= 10;
  std::int64_t micros = whole * kScale + frac + (round_up ? 1 : 0);
  return from_micros(negative ? -micros : micros);
}

std::int64_t Decimal::round_half_up() const {
  // floor((micros + scale/2) / scale)
  std::int64_t shifted = micros_ + kScale / 2;
  std::int64_t q = shifted / kScale;
  if (shifted % kScale != 0 && shifted < 0) --q;
  return q;
}

std::string Decimal::str() const {
  std::int64_t m = micros_;
  bool negative = m < 0;
  std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(m + 1)) + 1 : static_cast<std::uint64_t>(m);
  std::uint64_t whole = mag / kScale;
  std::uint64_t frac = mag % kScale;
  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(frac));
    std::string digits(buf);
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

namespace {
int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::optional<Color> Color::parse(std::string_view text) {
  if (text.size() != 7 || text[0] != '#') return std::nullopt;
  int v[6];
  for (int i = 0; i < 6; ++i) {
    v[i] = hex_digit(text[i + 1]);
    if (v[i] < 0) return std::nullopt;
  }
  return Color{static_cast<std::uint8_t>(v[0] * 16 + v[1]), static_cast<std::uint8_t>(v[2] * 16 + v[3]),
               static_cast<std::uint8_t>(v[4] * 16 + v[5])};
}

std::string Color::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
  return buf;
}

Color lerp(Color a, Color b, double t) {
  auto channel = [t](std::uint8_t x, std::uint8_t y) {
    double v = x + (static_cast<double>(y) - x) * t;
    return static_cast<std::uint8_t>(std::floor(v + 0.5));
  };
  return Color{channel(a.r, b.r), channel(a.g, b.g), channel(a.b, b.b)};
}

}  // namespace splitweave
