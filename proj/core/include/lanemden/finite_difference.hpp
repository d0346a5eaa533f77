#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lanemden {

// Fornberg weights for the derivatives 0..max_order at x0 using the given
// nodes. weights[m][j] multiplies f(nodes[j]) for derivative order m.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order);

// Derivative of sampled data at node i using a `width`-point stencil that
// stays inside [lo, hi) (inclusive lo, exclusive hi); the stencil turns
// one-sided near the ends of that segment.
double nonuniform_derivative(std::span<const double> x, std::span<const double> f, std::size_t i, int order,
                             std::size_t lo, std::size_t hi, int width = 7);

}  // namespace lanemden
