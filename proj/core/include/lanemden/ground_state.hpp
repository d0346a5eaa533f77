#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lanemden/critical_hyperbola.hpp"

namespace lanemden {

struct SolverOptions {
  double r_max = 1e3;
  double rtol = 1e-13;
  double bisection_tol = 1e-12;
  double a_lo = 1e-2;
  double a_hi = 1e2;
  double series_radius = 1e-4;
  double grid_start = 1e-3;
  double grid_ratio = 1.005;
  double far_factor = 10.0;        // outer shooting leg starts at far_factor * r_max
  double window_fraction = 0.1;    // trailing window for the slow-decay test
  double flat_band = 1e-3;         // relative drift of r^{N-2} V that still counts as converged
  double residual_tol = 1e-8;
  double decay_band = 0.02;
  bool validate_tail = true;
};

enum class ShootingClass { CrossesZero, SlowDecay, Converged };

std::string_view to_string(ShootingClass c);

struct ShootingOutcome {
  ShootingClass classification = ShootingClass::Converged;
  char component = 0;  // 'U' or 'V' for CrossesZero
  double crossing_radius = std::numeric_limits<double>::infinity();
  double tail_drift = 0.0;  // relative change of r^{N-2} V across the trailing window

  // True on the side of the bracket where a = U(0) is too small.
  bool below() const noexcept;
};

ShootingOutcome shoot(const HyperbolaPoint& hp, double a, const SolverOptions& opts = {});

struct Normalization {
  double V_at_zero = 1.0;
  double U_at_zero = 0.0;
  double gauge_delta = 1.0;  // dilation applied to the V(0) = 1 solution
};

struct SlopeFit {
  double measured = 0.0;
  double predicted = 0.0;
  double deviation = 0.0;  // |measured - predicted| / |predicted|
  bool log_flag = false;
};

struct DecayReport {
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::size_t points = 0;
  SlopeFit U, V, dU, dV;
  double band = 0.02;

  double worst_deviation() const noexcept;
  bool passed() const noexcept { return worst_deviation() <= band; }
};

struct SolverDiagnostics {
  double rtol = 0.0;
  double r_max = 0.0;
  double a_error = 0.0;
  double match_residual = 0.0;
  double junction_radius = 0.0;
  double residual_max = 0.0;
  int bisection_iterations = 0;
  int newton_iterations = 0;
};

struct ProfileSample {
  double U = 0.0;
  double V = 0.0;
  double dU = 0.0;
  double dV = 0.0;
};

class GroundState {
 public:
  // Single construction path: derives second and third derivatives from the
  // equations, the tail fit and the finite-difference residual.
  static GroundState from_samples(const HyperbolaPoint& hp, std::vector<double> r, std::vector<double> U,
                                  std::vector<double> V, std::vector<double> dU, std::vector<double> dV,
                                  const Normalization& norm, const SolverDiagnostics& diag, double decay_band = 0.02);

  const HyperbolaPoint& hyperbola() const noexcept { return hp_; }
  int N() const noexcept { return hp_.N; }
  double p() const noexcept { return hp_.p.value; }
  double q() const noexcept { return hp_.q.value; }

  const std::vector<double>& grid() const noexcept { return r_; }
  const std::vector<double>& U() const noexcept { return U_; }
  const std::vector<double>& V() const noexcept { return V_; }
  const std::vector<double>& dU() const noexcept { return dU_; }
  const std::vector<double>& dV() const noexcept { return dV_; }
  double r_max() const noexcept { return r_.back(); }

  const Normalization& normalization() const noexcept { return norm_; }
  const SolverDiagnostics& diagnostics() const noexcept { return diag_; }
  const DecayReport& tail_fit() const noexcept { return tail_; }

  // Quintic Hermite interpolation on the grid, power-law continuation past r_max.
  ProfileSample eval(double r) const;

  // Radius where V falls to half of V(0).
  double half_radius() const;

  // Index of the first grid node belonging to the outer integration leg.
  std::size_t junction_index() const;

 private:
  GroundState() = default;

  HyperbolaPoint hp_;
  std::vector<double> r_, U_, V_, dU_, dV_;
  std::vector<double> d2U_, d2V_, d3U_, d3V_;
  Normalization norm_;
  SolverDiagnostics diag_;
  DecayReport tail_;
};

GroundState solve_ground_state(const HyperbolaPoint& hp, const SolverOptions& opts = {});

DecayReport validate_decay(const GroundState& gs, double r_lo, double r_hi, double band = 0.02);

GroundState rescale(const GroundState& gs, double delta);

// Max over grid nodes of the pointwise relative residual of the radial system,
// with U'' and V'' taken by finite differences of the stored derivatives.
double profile_residual(const GroundState& gs);

}  // namespace lanemden
