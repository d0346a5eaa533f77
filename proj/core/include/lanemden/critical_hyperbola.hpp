#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "lanemden/rational.hpp"

namespace lanemden {

// An exponent keeps its exact rational form whenever the input admits one,
// so that regime boundaries can be decided without rounding.
struct Exponent {
  double value = 0.0;
  std::optional<Rational> exact;

  static Exponent parse(std::string_view text);
  static Exponent from_double(double v) { return Exponent{v, std::nullopt}; }
  static Exponent from_rational(const Rational& r) { return Exponent{r.to_double(), r}; }

  std::string str() const;
};

// Three-way comparison: exact when `x` is rational, otherwise with an
// absolute band of 1e-12.
int compare(const Exponent& x, const Rational& boundary);

inline constexpr double kHyperbolaTolerance = 1e-12;

struct HyperbolaPoint {
  Exponent p;
  Exponent q;
  int N = 0;

  double p_value() const noexcept { return p.value; }
  double q_value() const noexcept { return q.value; }
};

Exponent q_from_p(const Exponent& p, int N);
Exponent p_from_q(const Exponent& q, int N);

// Builds and validates a point on the critical hyperbola from p and N.
HyperbolaPoint make_hyperbola_point(const Exponent& p, int N);
// Validates an explicitly supplied (p, q, N) triple.
HyperbolaPoint make_hyperbola_point(const Exponent& p, const Exponent& q, int N);

enum class RegimeTag { I, II, III, Unsupported };

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::Unsupported;
  int minimum_dimension = 0;  // dimension floor of the p-range containing p, 0 if none
};

Regime classify_regime(const Exponent& p, int N);

struct DecayRates {
  double v_rate = 0.0;
  double u_rate = 0.0;
  bool u_log_flag = false;
  double dv_rate = 0.0;
  double du_rate = 0.0;
  double d2v_rate = 0.0;
  double d2u_rate = 0.0;
};

DecayRates decay_rates(const Exponent& p, int N);

}  // namespace lanemden
