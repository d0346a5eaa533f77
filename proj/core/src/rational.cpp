#include "lanemden/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>

#include "lanemden/errors.hpp"

namespace lanemden {
namespace {

__extension__ using Wide = __int128;

constexpr Wide kMax = std::numeric_limits<std::int64_t>::max();

std::optional<Wide> parse_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return std::nullopt;
  Wide value = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    value = value * 10 + (s[i] - '0');
    if (value > kMax) return std::nullopt;
  }
  return negative ? -value : value;
}

}  // namespace

std::optional<Rational> Rational::reduce(Wide num, Wide den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  if (num > kMax || num < -kMax || den > kMax) return std::nullopt;
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  require(den != 0, ErrorCode::InvalidArgument, "rational with zero denominator");
  auto r = reduce(num, den);
  require(r.has_value(), ErrorCode::InvalidArgument, "rational out of range");
  num_ = r->num_;
  den_ = r->den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational::reduce(*num, *den);
  }

  // Decimal with optional exponent.
  std::string_view mantissa = text;
  Wide exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto ex = parse_integer(text.substr(e + 1));
    if (!ex || *ex > 30 || *ex < -30) return std::nullopt;
    exponent = *ex;
    mantissa = text.substr(0, e);
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '+' || mantissa[0] == '-')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  Wide digits = 0;
  int fraction_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    seen_digit = true;
    digits = digits * 10 + (c - '0');
    if (digits > kMax) return std::nullopt;
    if (seen_point) ++fraction_digits;
  }
  if (!seen_digit) return std::nullopt;
  Wide num = negative ? -digits : digits;
  Wide den = 1;
  Wide shift = exponent - fraction_digits;
  for (; shift > 0; --shift) {
    num *= 10;
    if (num > kMax || num < -kMax) return std::nullopt;
  }
  for (; shift < 0; ++shift) {
    den *= 10;
    if (den > kMax) return std::nullopt;
  }
  return Rational::reduce(num, den);
}

std::optional<Rational> checked_add(const Rational& a, const Rational& b) {
  return Rational::reduce(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

std::optional<Rational> checked_sub(const Rational& a, const Rational& b) {
  return Rational::reduce(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

std::optional<Rational> checked_mul(const Rational& a, const Rational& b) {
  return Rational::reduce(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

std::optional<Rational> checked_div(const Rational& a, const Rational& b) {
  if (b.num_ == 0) return std::nullopt;
  return Rational::reduce(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = Wide(a.num_) * b.den_;
  Wide rhs = Wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace lanemden
