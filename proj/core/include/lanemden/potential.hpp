#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "lanemden/manifold.hpp"

namespace lanemden {

struct ConstantPotential {
  double value = 0.0;
};

// Compactly supported C^2 bump a (1 - (d/w)^2)^3 for d < w, d the geodesic
// distance to the anchor.
struct RadialBump {
  Point anchor;
  double amplitude = 0.0;
  double width = 1.0;
};

struct RadialPotential {
  double offset = 0.0;
  std::vector<RadialBump> bumps;
};

// Torus only: offset + sum a cos(2 pi m x_axis / P_axis + phase).
struct TrigTerm {
  int axis = 0;
  double amplitude = 0.0;
  int mode = 1;
  double phase = 0.0;
};

struct TrigPotential {
  double offset = 0.0;
  std::vector<TrigTerm> terms;
};

// Sphere only: offset + <direction, x> / radius with x the ambient point.
struct AmbientLinearPotential {
  double offset = 0.0;
  Eigen::VectorXd direction;
};

using PotentialSpec = std::variant<ConstantPotential, RadialPotential, TrigPotential, AmbientLinearPotential>;

// Throws InvalidArgument when the potential does not fit the manifold.
void validate_potential(const ModelManifold& m, const PotentialSpec& h);

double evaluate(const ModelManifold& m, const PotentialSpec& h, const Point& xi);

// Gradient in the normal-coordinate frame at xi. Closed forms are used where
// available, central differences (step 1e-5 * injectivity radius) otherwise.
Tangent gradient(const ModelManifold& m, const PotentialSpec& h, const Point& xi);

bool has_closed_form_gradient(const PotentialSpec& h);

// Radial profile of h about xi valid on the geodesic ball of radius r0, or
// nullopt when h is not radial there.
std::optional<std::function<double(double)>> radial_profile(const ModelManifold& m, const PotentialSpec& h,
                                                            const Point& xi, double r0);

}  // namespace lanemden
