#pragma once

#include <array>
#include <functional>
#include <span>

namespace lanemden {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // sum over panels of |Kronrod - Gauss|
};

// Fixed 15-point Gauss-Kronrod rule on every panel [edges[i], edges[i+1]].
QuadratureResult integrate_panels(const std::function<double(double)>& f, std::span<const double> edges);

struct QuadratureResult4 {
  std::array<double, 4> value{};
  std::array<double, 4> error{};
};

// Same rule as integrate_panels for four integrands sharing their nodes.
QuadratureResult4 integrate_panels4(const std::function<std::array<double, 4>(double)>& f,
                                    std::span<const double> edges);

}  // namespace lanemden
