#include "lanemden/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "lanemden/errors.hpp"
#include "lanemden/finite_difference.hpp"

namespace lanemden {
namespace {

double spow(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }

// Second derivatives from the radial equations.
double second_u(const GroundState& gs, std::size_t i) {
  const double r = gs.grid()[i];
  const double f = spow(gs.V()[i], gs.p());
  return r > 0.0 ? -(gs.N() - 1.0) / r * gs.dU()[i] - f : -f / gs.N();
}

double second_v(const GroundState& gs, std::size_t i) {
  const double r = gs.grid()[i];
  const double f = spow(gs.U()[i], gs.q());
  return r > 0.0 ? -(gs.N() - 1.0) / r * gs.dV()[i] - f : -f / gs.N();
}

}  // namespace

RadialPair dilation_pair(const GroundState& gs) {
  const auto& r = gs.grid();
  const int N = gs.N();
  RadialPair out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.psi.push_back(r[i] * gs.dU()[i] + N * gs.U()[i] / (gs.q() + 1.0));
    out.phi.push_back(r[i] * gs.dV()[i] + N * gs.V()[i] / (gs.p() + 1.0));
    out.dpsi.push_back((1.0 + N / (gs.q() + 1.0)) * gs.dU()[i] + r[i] * second_u(gs, i));
    out.dphi.push_back((1.0 + N / (gs.p() + 1.0)) * gs.dV()[i] + r[i] * second_v(gs, i));
  }
  return out;
}

RadialPair translation_pair(const GroundState& gs) {
  RadialPair out{gs.dU(), gs.dV(), {}, {}};
  for (std::size_t i = 0; i < gs.grid().size(); ++i) {
    out.dpsi.push_back(second_u(gs, i));
    out.dphi.push_back(second_v(gs, i));
  }
  return out;
}

RadialPair random_pair(const GroundState& gs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(0.0, 4.0 * gs.half_radius());
  std::uniform_real_distribution<double> width(0.5 * gs.half_radius(), 3.0 * gs.half_radius());
  std::normal_distribution<double> amp(0.0, 1.0);
  auto bumps = [&] {
    std::vector<std::array<double, 3>> b;
    for (int i = 0; i < 5; ++i) b.push_back({amp(rng), centre(rng), width(rng)});
    return b;
  };
  const auto bp = bumps(), bq = bumps();
  RadialPair out;
  auto sample = [](const std::vector<std::array<double, 3>>& b, double r, std::vector<double>& f,
                   std::vector<double>& df) {
    double s = 0.0, d = 0.0;
    for (const auto& [a, c, w] : b) {
      const double g = a * std::exp(-(r - c) * (r - c) / (w * w));
      s += g;
      d += -2.0 * (r - c) / (w * w) * g;
    }
    f.push_back(s);
    df.push_back(d);
  };
  for (double r : gs.grid()) {
    sample(bp, r, out.psi, out.dpsi);
    sample(bq, r, out.phi, out.dphi);
  }
  return out;
}

PairResidual linearized_residual(const GroundState& gs, const RadialPair& pair, int mode, double window) {
  const auto& r = gs.grid();
  require(mode == 0 || mode == 1, ErrorCode::InvalidArgument, "mode must be 0 or 1");
  require(pair.psi.size() == r.size() && pair.phi.size() == r.size() && pair.dpsi.size() == r.size() &&
              pair.dphi.size() == r.size(),
          ErrorCode::InvalidArgument,
          "pair must be sampled on the ground-state grid");
  require(window > 0.0 && window <= 1.0, ErrorCode::InvalidArgument, "window must lie in (0, 1]");
  const int N = gs.N();
  const double p = gs.p(), q = gs.q();
  const double l = mode == 0 ? 0.0 : N - 1.0;
  const std::size_t junction = gs.junction_index();
  const std::size_t first = 4;
  const double r_hi = window * gs.r_max();

  auto check = [&](const std::vector<double>& f, const std::vector<double>& df, const std::vector<double>& coupled,
                   const std::vector<double>& base, double e) {
    double res = 0.0, scale = 0.0;
    for (std::size_t i = first; i < r.size() && r[i] <= r_hi; ++i) {
      const std::size_t lo = i < junction ? 0 : junction;
      const std::size_t hi = i < junction ? junction : r.size();
      const double d1 = df[i];
      const double d2 = nonuniform_derivative(r, df, i, 1, lo, hi);
      const double t1 = (N - 1.0) / r[i] * d1;
      const double t2 = l / (r[i] * r[i]) * f[i];
      const double t3 = e * spow(base[i], e - 1.0) * coupled[i];
      res = std::max(res, std::abs(d2 + t1 - t2 + t3));
      scale = std::max({scale, std::abs(d2), std::abs(t1), std::abs(t2), std::abs(t3)});
    }
    return scale > 0.0 ? res / scale : 0.0;
  };

  PairResidual out;
  out.psi_equation = check(pair.psi, pair.dpsi, pair.phi, gs.V(), p);
  out.phi_equation = check(pair.phi, pair.dphi, pair.psi, gs.U(), q);
  out.r_lo = r[first];
  out.r_hi = r_hi;
  return out;
}

KernelReport kernel_residual(const GroundState& gs, std::uint64_t seed, double window) {
  KernelReport out;
  out.dilation = linearized_residual(gs, dilation_pair(gs), 0, window);
  out.translation = linearized_residual(gs, translation_pair(gs), 1, window);
  out.control = linearized_residual(gs, random_pair(gs, seed), 0, window);
  return out;
}

}  // namespace lanemden
