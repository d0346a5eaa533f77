#pragma once

#include <cstdint>
#include <vector>

#include "lanemden/bubble_constants.hpp"
#include "lanemden/manifold.hpp"
#include "lanemden/potential.hpp"

namespace lanemden {

// h(xi) - phi_coefficient * Scal(xi)
double phi(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, const Point& xi);
Tangent phi_gradient(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, const Point& xi);

double psi_k(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, double alpha, double beta,
             const std::vector<double>& t, const std::vector<Point>& xi);

struct PsiGradient {
  std::vector<double> dt;
  std::vector<Tangent> dxi;  // in the normal-coordinate frame at each peak
};

PsiGradient psi_k_gradient(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, double alpha,
                           double beta, const std::vector<double>& t, const std::vector<Point>& xi);

double optimal_t(const BubbleConstants& c, double alpha, double beta, double phi_value);

struct SearchOptions {
  int starts = 64;
  std::uint64_t seed = 20240601;
  double rho1 = 1e-3;
  double rho2 = 0.0;        // 0 selects 2 r0 plus a margin of 1%
  double r0 = 0.0;          // 0 selects injectivity/4
  double gtol = 1e-10;      // on the gradient of sum f / C-tilde in (log t, chart) variables
  int max_iterations = 200;
  double degenerate_ratio = 1e-6;
  double merge_tol = 1e-6;
};

struct ReducedCriticalPoint {
  std::vector<double> t;
  std::vector<Point> xi;
  std::vector<double> phi;
  double value = 0.0;  // psi_k at the point
  double gradient_norm = 0.0;
  double eig_min_abs = 0.0;
  double eig_max_abs = 0.0;
  int negative_eigs = 0;
  bool degenerate = false;
};

std::vector<ReducedCriticalPoint> find_critical_points(const ModelManifold& m, const PotentialSpec& h,
                                                       const BubbleConstants& c, int k, double alpha, double beta,
                                                       const SearchOptions& opts = {});

}  // namespace lanemden
