#pragma once

#include <vector>

#include "lanemden/bubble_constants.hpp"
#include "lanemden/ground_state.hpp"
#include "lanemden/manifold.hpp"
#include "lanemden/potential.hpp"

namespace lanemden {

// Quintic smooth step: 1 on [0, r0/2], 0 beyond r0, two continuous derivatives.
double cutoff(double r, double r0);
double cutoff_derivative(double r, double r0);

// Cut-off, rescaled copy of the ground state centred at a peak. The ground
// state is referenced, not copied, and must outlive the bubble.
class Bubble {
 public:
  const Point& peak() const noexcept { return xi_; }
  double delta() const noexcept { return delta_; }
  double r0() const noexcept { return r0_; }
  const GroundState& profile() const noexcept { return *gs_; }

  double W(double r) const;
  double H(double r) const;
  double dW(double r) const;
  double dH(double r) const;

 private:
  friend Bubble assemble_bubble(const ModelManifold&, const GroundState&, double, const Point&, double);
  Bubble(const GroundState* gs, Point xi, double delta, double r0) : gs_(gs), xi_(std::move(xi)), delta_(delta), r0_(r0) {}

  const GroundState* gs_;
  Point xi_;
  double delta_;
  double r0_;
};

Bubble assemble_bubble(const ModelManifold& m, const GroundState& gs, double delta, const Point& xi, double r0);

struct EnergyBreakdown {
  double grad_term = 0.0;
  double h_term = 0.0;
  double p_term = 0.0;
  double q_term = 0.0;
  double error = 0.0;  // quadrature error estimate of J

  double J() const noexcept { return grad_term + h_term - p_term - q_term; }
  EnergyBreakdown& operator+=(const EnergyBreakdown& o);
};

EnergyBreakdown bubble_energy(const ModelManifold& m, const PotentialSpec& h, const Bubble& b, double epsilon,
                              double alpha, double beta);

// Sum of bubble_energy over disjointly supported bubbles.
EnergyBreakdown energy_terms(const ModelManifold& m, const PotentialSpec& h, const std::vector<Bubble>& bubbles,
                             double epsilon, double alpha, double beta);

std::vector<double> geometric_grid(double first, double last, int count);
// Eight points from 1e-4 down to 1e-6.
std::vector<double> default_epsilon_grid();

struct ExpansionFit {
  int k = 0;
  std::vector<double> epsilon;
  std::vector<double> J;
  std::vector<EnergyBreakdown> terms;
  double a = 0.0, b = 0.0, c = 0.0;
  double a_predicted = 0.0, b_predicted = 0.0, c_predicted = 0.0;
  double a_error = 0.0, b_error = 0.0, c_error = 0.0;  // relative deviations
  double residual_norm = 0.0;
  double condition = 0.0;
};

ExpansionFit sweep_and_fit(const ModelManifold& m, const PotentialSpec& h, const GroundState& gs,
                           const BubbleConstants& c, const std::vector<double>& t, const std::vector<Point>& xi,
                           double alpha, double beta, const std::vector<double>& epsilon, double r0);

struct QuadraticFit {
  double c0 = 0.0;
  double c2 = 0.0;
  double residual = 0.0;
};

struct DeltaSweep {
  std::vector<double> delta;
  std::vector<EnergyBreakdown> terms;  // at epsilon = 0
  QuadraticFit grad;                   // grad_term = c0 + c2 delta^2
  QuadraticFit h;                      // h_term = c0 + c2 delta^2
};

DeltaSweep delta_sweep(const ModelManifold& m, const PotentialSpec& h, const GroundState& gs, const Point& xi,
                       double r0, const std::vector<double>& deltas);

}  // namespace lanemden
