#include "lanemden/finite_difference.hpp"

#include <algorithm>

#include "lanemden/errors.hpp"

namespace lanemden {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order) {
  const std::size_t n = nodes.size();
  require(n > static_cast<std::size_t>(max_order), ErrorCode::InvalidArgument, "stencil too small for order");
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

double nonuniform_derivative(std::span<const double> x, std::span<const double> f, std::size_t i, int order,
                             std::size_t lo, std::size_t hi, int width) {
  require(hi <= x.size() && x.size() == f.size(), ErrorCode::InvalidArgument, "derivative: bad ranges");
  require(hi - lo >= static_cast<std::size_t>(width) && i >= lo && i < hi, ErrorCode::InvalidArgument,
          "derivative: segment shorter than stencil");
  const std::size_t half = static_cast<std::size_t>(width / 2);
  std::size_t start = i >= lo + half ? i - half : lo;
  start = std::min(start, hi - static_cast<std::size_t>(width));
  auto w = fornberg_weights(x[i], x.subspan(start, width), order);
  double d = 0.0;
  for (int j = 0; j < width; ++j) d += w[order][j] * f[start + j];
  return d;
}

}  // namespace lanemden
