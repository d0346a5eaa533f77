#include "radial_system.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace lanemden::detail {
namespace odeint = boost::numeric::odeint;

namespace {

using Stepper = odeint::runge_kutta_fehlberg78<State>;

auto make_stepper(const Tolerances& tol) { return odeint::make_controlled<Stepper>(tol.atol, tol.rtol); }

// Radial particular solution of f'' + (N-1)/r f' = -K r^m.
std::pair<double, double> particular(double K, double m, int N, double r) {
  const double c = -K / ((m + 2.0) * (m + N));
  return {c * std::pow(r, m + 2.0), c * (m + 2.0) * std::pow(r, m + 1.0)};
}

}  // namespace

State series_start(const RadialSystem& sys, double a, double r) {
  const int N = sys.N;
  const double aq = std::pow(a, sys.q);
  const double c4 = sys.p * aq / (8.0 * N * (N + 2));
  const double d4 = sys.q * std::pow(a, sys.q - 1.0) / (8.0 * N * (N + 2));
  const double r2 = r * r;
  return {a - r2 / (2.0 * N) + c4 * r2 * r2, -r / N + 4.0 * c4 * r2 * r, 1.0 - aq * r2 / (2.0 * N) + d4 * r2 * r2,
          -aq * r / N + 4.0 * d4 * r2 * r};
}

double slow_tail_coefficient(const RadialSystem& sys, double B) {
  const double m = 2.0 - (sys.N - 2) * sys.p;
  return -std::pow(B, sys.p) / (m * (m + sys.N - 2.0));
}

State far_field(const RadialSystem& sys, double A, double B, double R) {
  const int N = sys.N;
  const double h = std::pow(R, 2.0 - N);
  const double dh = (2.0 - N) * std::pow(R, 1.0 - N);
  State y{A * h, A * dh, B * h, B * dh};
  auto [pu, dpu] = particular(std::pow(B, sys.p), (2.0 - N) * sys.p, N, R);
  y[0] += pu;
  y[1] += dpu;
  if (sys.slow_u_tail()) {
    const double C = slow_tail_coefficient(sys, B);
    const double m = 2.0 - (N - 2) * sys.p;
    auto [pv, dpv] = particular(spow(C, sys.q), m * sys.q, N, R);
    y[2] += pv;
    y[3] += dpv;
  } else {
    auto [pv, dpv] = particular(spow(A, sys.q), (2.0 - N) * sys.q, N, R);
    y[2] += pv;
    y[3] += dpv;
  }
  return y;
}

State integrate_to(const RadialSystem& sys, State y, double r0, double r1, const Tolerances& tol) {
  const double dt = (r1 - r0) * 1e-3;
  odeint::integrate_adaptive(make_stepper(tol), sys, y, r0, r1, dt);
  return y;
}

std::vector<State> integrate_times(const RadialSystem& sys, State y, std::span<const double> times,
                                   const Tolerances& tol) {
  std::vector<State> out;
  out.reserve(times.size());
  if (times.size() < 2) {
    out.push_back(y);
    return out;
  }
  const double dt = (times[1] - times[0]) * 1e-2;
  odeint::integrate_times(make_stepper(tol), sys, y, times.begin(), times.end(), dt,
                          [&out](const State& s, double) { out.push_back(s); });
  return out;
}

Trajectory shoot_from_origin(const RadialSystem& sys, double a, double r_start, double r_end, double window_fraction,
                             const Tolerances& tol) {
  auto stepper = make_stepper(tol);
  State y = series_start(sys, a, r_start);
  double r = r_start;
  double dt = r_start;
  const double window_start = r_end * (1.0 - window_fraction);
  const double weight_power = sys.N - 2.0;
  Trajectory out;
  bool window_open = false;
  while (r < r_end) {
    if (r + dt > r_end) dt = r_end - r;
    const State before = y;
    const double r_before = r;
    if (stepper.try_step(sys, y, r, dt) == odeint::fail) continue;
    for (int c : {0, 2}) {
      if (y[c] <= 0.0) {
        const double frac = before[c] / (before[c] - y[c]);
        out.crossed = c;
        out.crossing_radius = r_before + frac * (r - r_before);
        out.end_radius = r;
        return out;
      }
    }
    if (!window_open && r >= window_start) {
      window_open = true;
      out.tail_start_weight = std::pow(r, weight_power) * y[2];
    }
  }
  out.end_radius = r;
  out.tail_end_weight = std::pow(r, weight_power) * y[2];
  if (!window_open) out.tail_start_weight = out.tail_end_weight;
  return out;
}

}  // namespace lanemden::detail
