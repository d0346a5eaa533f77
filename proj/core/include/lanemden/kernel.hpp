#pragma once

#include <cstdint>
#include <vector>

#include "lanemden/ground_state.hpp"

namespace lanemden {

// Radial part of a candidate kernel element and its first derivative, sampled
// on the ground-state grid.
struct RadialPair {
  std::vector<double> psi;
  std::vector<double> phi;
  std::vector<double> dpsi;
  std::vector<double> dphi;
};

struct PairResidual {
  double psi_equation = 0.0;  // max |psi'' + (N-1)/r psi' - l/r^2 psi + p V^{p-1} phi| / max term
  double phi_equation = 0.0;  // same with the roles of (psi, U, q) and (phi, V, p) swapped
  double r_lo = 0.0;
  double r_hi = 0.0;

  double worst() const noexcept { return psi_equation > phi_equation ? psi_equation : phi_equation; }
};

struct KernelReport {
  PairResidual dilation;     // mode 0
  PairResidual translation;  // mode 1
  PairResidual control;      // random smooth pair, expected to fail
};

// Dilation pair (r U' + N U/(q+1), r V' + N V/(p+1)).
RadialPair dilation_pair(const GroundState& gs);
// Translation pair (U', V').
RadialPair translation_pair(const GroundState& gs);
// Sums of Gaussian bumps with seeded random centres, widths and amplitudes.
RadialPair random_pair(const GroundState& gs, std::uint64_t seed);

// Residual of the radial linearized system for angular mode `mode` (0 or 1) on
// r in [grid[4], window * r_max]. The second derivative is a seven-point finite
// difference of the sampled first derivative.
PairResidual linearized_residual(const GroundState& gs, const RadialPair& pair, int mode, double window = 0.8);

KernelReport kernel_residual(const GroundState& gs, std::uint64_t seed = 7, double window = 0.8);

}  // namespace lanemden
