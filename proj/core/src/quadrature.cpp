#include "lanemden/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace lanemden {

QuadratureResult integrate_panels(const std::function<double(double)>& f, std::span<const double> edges) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    double err = 0.0;
    out.value += Rule::integrate(f, edges[i], edges[i + 1], 0, 0.0, &err);
    out.error += std::abs(err);
  }
  return out;
}

}  // namespace lanemden

namespace lanemden {

QuadratureResult4 integrate_panels4(const std::function<std::array<double, 4>(double)>& f,
                                    std::span<const double> edges) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  QuadratureResult4 out;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    if (!(b > a)) continue;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const auto f0 = f(c);
    std::array<double, 4> K{}, G{};
    for (int j = 0; j < 4; ++j) {
      K[j] = wk[0] * f0[j];
      G[j] = wg[0] * f0[j];
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
      const auto fp = f(c + h * x[i]);
      const auto fm = f(c - h * x[i]);
      for (int j = 0; j < 4; ++j) {
        K[j] += wk[i] * (fp[j] + fm[j]);
        if (i % 2 == 0) G[j] += wg[i / 2] * (fp[j] + fm[j]);
      }
    }
    for (int j = 0; j < 4; ++j) {
      out.value[j] += h * K[j];
      out.error[j] += std::abs(h * (K[j] - G[j]));
    }
  }
  return out;
}

}  // namespace lanemden
