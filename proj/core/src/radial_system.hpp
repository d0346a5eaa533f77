#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace lanemden::detail {

// State layout: U, U', V, V'.
using State = std::array<double, 4>;

inline double spow(double x, double e) { return x >= 0.0 ? std::pow(x, e) : -std::pow(-x, e); }

struct RadialSystem {
  double p = 0.0;
  double q = 0.0;
  int N = 0;

  void operator()(const State& y, State& dy, double r) const {
    dy[0] = y[1];
    dy[1] = -spow(y[2], p) - (N - 1) / r * y[1];
    dy[2] = y[3];
    dy[3] = -spow(y[0], q) - (N - 1) / r * y[3];
  }

  bool slow_u_tail() const { return p < double(N) / (N - 2); }
};

// Taylor start about the origin with V(0) = 1 and U(0) = a.
State series_start(const RadialSystem& sys, double a, double r);

// Leading far-field behaviour with harmonic amplitudes A (for U) and B (for V).
State far_field(const RadialSystem& sys, double A, double B, double R);

// Coefficient of the r^{2-(N-2)p} term of U when the U-tail is slow.
double slow_tail_coefficient(const RadialSystem& sys, double B);

struct Tolerances {
  double rtol = 1e-13;
  double atol = 1e-300;
};

State integrate_to(const RadialSystem& sys, State y, double r0, double r1, const Tolerances& tol);

// Integrates from times.front() and records the state at every entry of
// `times` (which may be decreasing); out[0] is the initial state.
std::vector<State> integrate_times(const RadialSystem& sys, State y, std::span<const double> times,
                                   const Tolerances& tol);

struct Trajectory {
  int crossed = -1;  // 0 for U, 2 for V, -1 when both stayed positive
  double crossing_radius = std::numeric_limits<double>::infinity();
  double tail_start_weight = 0.0;  // r^{N-2} V at the start of the trailing window
  double tail_end_weight = 0.0;
  double end_radius = 0.0;
};

Trajectory shoot_from_origin(const RadialSystem& sys, double a, double r_start, double r_end, double window_fraction,
                             const Tolerances& tol);

}  // namespace lanemden::detail
