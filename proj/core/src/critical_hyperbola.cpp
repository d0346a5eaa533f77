#include "lanemden/critical_hyperbola.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lanemden/errors.hpp"

namespace lanemden {
namespace {

Rational must(std::optional<Rational> r) {
  require(r.has_value(), ErrorCode::InvalidArgument, "exponent arithmetic overflow");
  return *r;
}

void require_dimension(int N) {
  require(N >= 3, ErrorCode::InvalidArgument, "dimension must be at least 3, got " + std::to_string(N));
}

// (N-2)/N - 1/(x+1), the reciprocal of (y+1) for the conjugate exponent y.
Exponent conjugate(const Exponent& x, int N) {
  require_dimension(N);
  require(x.value > 1.0 || (x.exact && *x.exact > Rational(1)), ErrorCode::InvalidArgument,
          "exponent must exceed 1, got " + x.str());
  if (x.exact) {
    auto one = Rational(1);
    auto base = Rational(N - 2, N);
    auto recip = checked_div(one, must(checked_add(*x.exact, one)));
    auto s = must(checked_sub(base, must(recip)));
    require(s > Rational(0), ErrorCode::InvalidArgument,
            "exponent " + x.str() + " has no conjugate on the hyperbola for N=" + std::to_string(N));
    auto y = must(checked_sub(must(checked_div(one, s)), one));
    return Exponent::from_rational(y);
  }
  double s = double(N - 2) / N - 1.0 / (x.value + 1.0);
  require(s > 0.0, ErrorCode::InvalidArgument,
          "exponent " + x.str() + " has no conjugate on the hyperbola for N=" + std::to_string(N));
  return Exponent::from_double(1.0 / s - 1.0);
}

}  // namespace

Exponent Exponent::parse(std::string_view text) {
  // Decimals carrying more digits than a double resolves are read as
  // floating-point literals (e.g. 1.6666666666666667 means 5/3 within 1e-12).
  const bool fraction = text.find('/') != std::string_view::npos;
  const auto digits = std::count_if(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (fraction || digits <= 15)
    if (auto r = Rational::parse(text)) return from_rational(*r);
  std::string s(text);
  std::istringstream in(s);
  double v = 0.0;
  in >> v;
  require(!in.fail() && in.eof() && std::isfinite(v), ErrorCode::InvalidArgument,
          "cannot parse exponent '" + s + "'");
  return from_double(v);
}

std::string Exponent::str() const {
  if (exact) return exact->str();
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

int compare(const Exponent& x, const Rational& boundary) {
  if (x.exact) {
    auto c = *x.exact <=> boundary;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  double d = x.value - boundary.to_double();
  if (std::abs(d) <= kHyperbolaTolerance) return 0;
  return d < 0 ? -1 : 1;
}

Exponent q_from_p(const Exponent& p, int N) {
  Exponent q = conjugate(p, N);
  require(compare(q, Rational(N + 2, N - 2)) >= 0, ErrorCode::InvalidArgument,
          "q = " + q.str() + " lies below (N+2)/(N-2); p = " + p.str() + " is supercritical");
  return q;
}

Exponent p_from_q(const Exponent& q, int N) { return conjugate(q, N); }

HyperbolaPoint make_hyperbola_point(const Exponent& p, int N) {
  return make_hyperbola_point(p, q_from_p(p, N), N);
}

HyperbolaPoint make_hyperbola_point(const Exponent& p, const Exponent& q, int N) {
  require_dimension(N);
  require(compare(p, Rational(1)) > 0, ErrorCode::InvalidArgument, "p must exceed 1");
  require(compare(p, Rational(2, N - 2)) > 0, ErrorCode::InvalidArgument, "p must exceed 2/(N-2)");
  Rational crit(N + 2, N - 2);
  require(compare(p, crit) <= 0 && compare(q, crit) >= 0, ErrorCode::InvalidArgument,
          "need p <= (N+2)/(N-2) <= q");
  double gap = 1.0 / (p.value + 1.0) + 1.0 / (q.value + 1.0) - double(N - 2) / N;
  if (p.exact && q.exact) {
    auto one = Rational(1);
    auto lhs = must(checked_add(must(checked_div(one, must(checked_add(*p.exact, one)))),
                                   must(checked_div(one, must(checked_add(*q.exact, one))))));
    require(lhs == Rational(N - 2, N), ErrorCode::NotOnHyperbola,
            "(" + p.str() + ", " + q.str() + ") is not on the critical hyperbola for N=" + std::to_string(N));
  } else {
    require(std::abs(gap) <= kHyperbolaTolerance, ErrorCode::NotOnHyperbola,
            "(" + p.str() + ", " + q.str() + ") is not on the critical hyperbola for N=" + std::to_string(N));
  }
  return HyperbolaPoint{p, q, N};
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::I: return "I";
    case RegimeTag::II: return "II";
    case RegimeTag::III: return "III";
    case RegimeTag::Unsupported: return "Unsupported";
  }
  return "Unsupported";
}

Regime classify_regime(const Exponent& p, int N) {
  make_hyperbola_point(p, N);
  const Rational lower(N, N - 2);
  const Rational crit(N + 2, N - 2);
  const int vs_lower = compare(p, lower);
  const int vs_crit = compare(p, crit);

  if (vs_crit == 0) return {N >= 10 ? RegimeTag::II : RegimeTag::Unsupported, 10};
  if (vs_lower > 0) return {N >= 8 ? RegimeTag::I : RegimeTag::Unsupported, 8};
  if (vs_lower < 0) return {N >= 12 ? RegimeTag::III : RegimeTag::Unsupported, 12};
  return {RegimeTag::Unsupported, 0};
}

DecayRates decay_rates(const Exponent& p, int N) {
  make_hyperbola_point(p, N);
  DecayRates d;
  d.v_rate = 2.0 - N;
  const int side = compare(p, Rational(N, N - 2));
  if (side > 0) {
    d.u_rate = 2.0 - N;
  } else if (side == 0) {
    d.u_rate = 2.0 - N;
    d.u_log_flag = true;
  } else {
    d.u_rate = 2.0 - (N - 2) * p.value;
  }
  d.dv_rate = d.v_rate - 1.0;
  d.d2v_rate = d.v_rate - 2.0;
  d.du_rate = d.u_rate - 1.0;
  d.d2u_rate = d.u_rate - 2.0;
  return d;
}

}  // namespace lanemden
