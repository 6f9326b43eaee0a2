#include "ipricing/decimal.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace ipricing {

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  std::int64_t whole = 0;
  std::size_t digits = 0;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    if (whole > (INT64_MAX - 9) / 10) return std::nullopt;
    whole = whole * 10 + (text[i] - '0');
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      if (frac_digits == 4) return std::nullopt;  // beyond supported precision
      frac = frac * 10 + (text[i] - '0');
      ++frac_digits;
    }
    if (frac_digits == 0) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;
  for (std::size_t k = frac_digits; k < 4; ++k) frac *= 10;
  if (whole > INT64_MAX / kScale) return std::nullopt;
  std::int64_t scaled = whole * kScale + frac;
  return Decimal::from_scaled(negative ? -scaled : scaled);
}

namespace {

std::string render(std::int64_t scaled, int min_frac_digits) {
  std::string out;
  if (scaled < 0) {
    out.push_back('-');
    scaled = -scaled;
  }
  out += std::to_string(scaled / Decimal::kScale);
  int frac = static_cast<int>(scaled % Decimal::kScale);
  std::array<char, 5> digits{};
  std::snprintf(digits.data(), digits.size(), "%04d", frac);
  int keep = 4;
  while (keep > min_frac_digits && digits[static_cast<std::size_t>(keep) - 1] == '0') --keep;
  if (keep > 0) {
    out.push_back('.');
    out.append(digits.data(), static_cast<std::size_t>(keep));
  }
  return out;
}

}  // namespace

std::string Decimal::to_string() const { return render(scaled_, 0); }
std::string Decimal::to_money_string() const { return render(scaled_, 2); }

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto num = [&](std::size_t at, std::size_t len) -> std::optional<int> {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + at, text.data() + at + len, value);
    if (ec != std::errc() || ptr != text.data() + at + len) return std::nullopt;
    return value;
  };
  auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) return std::nullopt;
  Date date{*y, *m, *d};
  if (!date.valid()) return std::nullopt;
  return date;
}

bool Date::valid() const {
  if (year < 1 || month < 1 || month > 12 || day < 1) return false;
  static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = lengths[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

}  // namespace ipricing
