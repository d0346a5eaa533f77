#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lanemden {

// Reduced fraction with a positive denominator. Arithmetic reports overflow
// through std::nullopt instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  // Accepts "7", "-3/4", "1.25", "1.5e-2". Returns nullopt if the text is not
  // an exact finite decimal or fraction, or if it does not fit in 64 bits.
  static std::optional<Rational> parse(std::string_view text);

  friend std::optional<Rational> checked_add(const Rational& a, const Rational& b);
  friend std::optional<Rational> checked_sub(const Rational& a, const Rational& b);
  friend std::optional<Rational> checked_mul(const Rational& a, const Rational& b);
  friend std::optional<Rational> checked_div(const Rational& a, const Rational& b);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  __extension__ static std::optional<Rational> reduce(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace lanemden
