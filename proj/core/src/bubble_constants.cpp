#include "lanemden/bubble_constants.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "lanemden/errors.hpp"
#include "lanemden/quadrature.hpp"

namespace lanemden {
namespace {

struct TailModel {
  double kappa = 0.0;      // power of the integrand beyond r_max
  double log_slope = 0.0;  // slope of the logarithmic factor, when present
  bool with_log = false;
  double log_at_R = 1.0;  // value of the logarithmic factor at r_max
};

Estimate radial_integral(const GroundState& gs, const std::function<double(double, const ProfileSample&)>& f,
                         const TailModel& tail, double omega, int split, const char* name) {
  require(tail.kappa < -1.0, ErrorCode::DivergentTail,
          std::string(name) + ": weighted tail r^" + std::to_string(tail.kappa) + " is not integrable");
  const auto& r = gs.grid();
  std::vector<double> edges;
  edges.reserve(r.size() * split);
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    for (int k = 0; k < split; ++k) edges.push_back(r[i] + (r[i + 1] - r[i]) * k / split);
  edges.push_back(r.back());

  auto integrand = [&](double x) { return f(x, gs.eval(x)); };
  auto abs_integrand = [&](double x) { return std::abs(integrand(x)); };
  const QuadratureResult body = integrate_panels(integrand, edges);
  const QuadratureResult mass = integrate_panels(abs_integrand, edges);

  // Closed-form continuation beyond r_max: f ~ C r^kappa (log f_R + s log(r/R)).
  const double R = r.back();
  const double fR = integrand(R);
  const double m = tail.kappa + 1.0;
  double tail_value = -fR * R / m;
  if (tail.with_log) tail_value += fR / tail.log_at_R * tail.log_slope * R / (m * m);
  Estimate e;
  e.value = omega * (body.value + tail_value);
  e.error = omega * (body.error + 1e-14 * mass.value + 1e-3 * std::abs(tail_value));
  return e;
}

}  // namespace

double surface_measure(int N) {
  require(N >= 1, ErrorCode::InvalidArgument, "surface measure needs N >= 1");
  return 2.0 * std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0);
}

BubbleConstants compute_constants(const GroundState& gs, const ConstantsOptions& opts) {
  require(opts.panel_split >= 1, ErrorCode::InvalidArgument, "panel_split must be positive");
  require(gs.tail_fit().passed(), ErrorCode::TailValidationFailed,
          "ground state tail does not match the predicted decay");
  const int N = gs.N();
  const double p = gs.p(), q = gs.q();
  const auto& fit = gs.tail_fit();
  const double su = fit.U.measured, sv = fit.V.measured, sdu = fit.dU.measured, sdv = fit.dV.measured;
  const double w = N - 1.0;

  BubbleConstants c;
  c.N = N;
  c.p = p;
  c.q = q;
  c.omega = surface_measure(N);
  c.normalization = gs.normalization();
  const int split = opts.panel_split;
  auto I = [&](auto f, TailModel t, const char* name) { return radial_integral(gs, f, t, c.omega, split, name); };
  auto rw = [&](double r) { return std::pow(r, w); };

  c.L1 = I([&](double r, const ProfileSample& s) { return s.dU * s.dV * rw(r); }, {sdu + sdv + w}, "L1");
  c.L1_from_V = I([&](double r, const ProfileSample& s) { return std::pow(s.V, p + 1) * rw(r); },
                  {(p + 1) * sv + w}, "L1 via V");
  c.L1_from_U = I([&](double r, const ProfileSample& s) { return std::pow(s.U, q + 1) * rw(r); },
                  {(q + 1) * su + w}, "L1 via U");
  c.L2 = I([&](double r, const ProfileSample& s) { return r * r * s.dU * s.dV * rw(r); }, {sdu + sdv + w + 2},
           "L2");
  c.L3 = I([&](double r, const ProfileSample& s) { return s.U * s.V * rw(r); }, {su + sv + w}, "L3");
  c.L4 = I([&](double r, const ProfileSample& s) { return r * r * std::pow(s.V, p + 1) * rw(r); },
           {(p + 1) * sv + w + 2}, "L4");
  c.L5 = I([&](double r, const ProfileSample& s) { return r * r * std::pow(s.U, q + 1) * rw(r); },
           {(q + 1) * su + w + 2}, "L5");
  c.L6 = I([&](double r, const ProfileSample& s) { return std::pow(s.V, p + 1) * std::log(s.V) * rw(r); },
           {(p + 1) * sv + w, sv, true, std::log(gs.V().back())}, "L6");
  c.L7 = I([&](double r, const ProfileSample& s) { return std::pow(s.U, q + 1) * std::log(s.U) * rw(r); },
           {(q + 1) * su + w, su, true, std::log(gs.U().back())}, "L7");
  return c;
}

void require_same_normalization(const BubbleConstants& a, const BubbleConstants& b) {
  const auto& x = a.normalization;
  const auto& y = b.normalization;
  require(a.N == b.N && a.p == b.p && a.q == b.q && x.gauge_delta == y.gauge_delta && x.V_at_zero == y.V_at_zero,
          ErrorCode::NormalizationMismatch, "constants come from differently normalized ground states");
}

double phi_coefficient(const BubbleConstants& c) {
  require(c.L3.value > 0.0, ErrorCode::InvalidArgument, "L3 must be positive");
  return (c.L2.value - c.L4.value / (c.p + 1.0) - c.L5.value / (c.q + 1.0)) / (6.0 * c.N * c.L3.value);
}

double phi_coefficient(const BubbleConstants& c, double p, double q, int N) {
  require(N == c.N && std::abs(p - c.p) <= 1e-12 && std::abs(q - c.q) <= 1e-12, ErrorCode::NormalizationMismatch,
          "exponents do not match the constants");
  return phi_coefficient(c);
}

double c_tilde(const BubbleConstants& c, double alpha, double beta) {
  require(alpha > 0.0 && beta > 0.0, ErrorCode::InvalidArgument, "alpha and beta must be positive");
  const double s = alpha / ((c.p + 1) * (c.p + 1)) + beta / ((c.q + 1) * (c.q + 1));
  return s * c.N * c.L1.value / 2.0;
}

C1C2 c1_c2(const BubbleConstants& c, double alpha, double beta, int k) {
  require(alpha > 0.0 && beta > 0.0, ErrorCode::InvalidArgument, "alpha and beta must be positive");
  require(k >= 1, ErrorCode::InvalidArgument, "k must be at least 1");
  const double s = alpha / ((c.p + 1) * (c.p + 1)) + beta / ((c.q + 1) * (c.q + 1));
  C1C2 out;
  out.c1 = ((c.L6.value * alpha / (c.p + 1) + c.L7.value * beta / (c.q + 1)) - s * c.L1.value) * k;
  out.c2 = (c.N * c.L1.value * k / 2.0) * s;
  return out;
}

}  // namespace lanemden
