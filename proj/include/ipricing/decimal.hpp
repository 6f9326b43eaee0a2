#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ipricing {

// Exact decimal with four fractional digits, stored as scaled int64.
// Prices and usage-limit quantities never touch binary floating point.
class Decimal {
 public:
  static constexpr std::int64_t kScale = 10000;  // 10^4

  constexpr Decimal() = default;
  static constexpr Decimal from_units(std::int64_t whole) { return Decimal(whole * kScale); }
  static constexpr Decimal from_scaled(std::int64_t scaled) { return Decimal(scaled); }

  // Accepts [+-]digits[.digits] with at most four fractional digits.
  static std::optional<Decimal> parse(std::string_view text);

  constexpr std::int64_t scaled() const { return scaled_; }
  constexpr bool negative() const { return scaled_ < 0; }
  constexpr bool zero() const { return scaled_ == 0; }

  // Canonical form: no exponent, trailing fractional zeros trimmed ("5", "21.99").
  std::string to_string() const;
  // Money form: at least two fractional digits ("10.00", "0.005" stays "0.005").
  std::string to_money_string() const;

  friend constexpr bool operator==(Decimal a, Decimal b) { return a.scaled_ == b.scaled_; }
  friend constexpr auto operator<=>(Decimal a, Decimal b) { return a.scaled_ <=> b.scaled_; }
  friend constexpr Decimal operator*(Decimal a, std::int64_t k) { return Decimal(a.scaled_ * k); }
  friend constexpr Decimal operator+(Decimal a, Decimal b) { return Decimal(a.scaled_ + b.scaled_); }
  friend constexpr Decimal operator-(Decimal a, Decimal b) { return Decimal(a.scaled_ - b.scaled_); }

 private:
  explicit constexpr Decimal(std::int64_t scaled) : scaled_(scaled) {}
  std::int64_t scaled_ = 0;
};

// Calendar date; serialized as YYYY-MM-DD.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static std::optional<Date> parse(std::string_view text);
  std::string to_string() const;
  bool valid() const;

  friend bool operator==(const Date&, const Date&) = default;
};

}  // namespace ipricing
