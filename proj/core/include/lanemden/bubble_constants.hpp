#pragma once

#include "lanemden/ground_state.hpp"

namespace lanemden {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct ConstantsOptions {
  int panel_split = 1;  // subdivide every grid interval into this many quadrature panels
};

struct BubbleConstants {
  int N = 0;
  double p = 0.0;
  double q = 0.0;
  double omega = 0.0;  // surface measure of the unit sphere in R^N
  Estimate L1, L2, L3, L4, L5, L6, L7;
  Estimate L1_from_V;  // omega * int V^{p+1} r^{N-1}
  Estimate L1_from_U;  // omega * int U^{q+1} r^{N-1}
  Normalization normalization;
};

double surface_measure(int N);

BubbleConstants compute_constants(const GroundState& gs, const ConstantsOptions& opts = {});

// Throws NormalizationMismatch unless both sets come from the same gauge.
void require_same_normalization(const BubbleConstants& a, const BubbleConstants& b);

double phi_coefficient(const BubbleConstants& c);
double phi_coefficient(const BubbleConstants& c, double p, double q, int N);

struct C1C2 {
  double c1 = 0.0;
  double c2 = 0.0;
};

C1C2 c1_c2(const BubbleConstants& c, double alpha, double beta, int k);

// (alpha/(p+1)^2 + beta/(q+1)^2) * N * L1 / 2
double c_tilde(const BubbleConstants& c, double alpha, double beta);

}  // namespace lanemden
