#include "lanemden/expansion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "lanemden/errors.hpp"
#include "lanemden/quadrature.hpp"
#include "lanemden/reduced_energy.hpp"

namespace lanemden {
namespace {

double ramp(double r, double r0) { return std::clamp(2.0 * (r - 0.5 * r0) / r0, 0.0, 1.0); }

std::vector<double> bubble_edges(const GroundState& gs, double delta, double r0) {
  const double S = r0 / delta;
  std::vector<double> e;
  for (double s : gs.grid())
    if (s < S) e.push_back(s);
  if (S > gs.r_max())
    for (double s = gs.r_max() * 1.02; s < S; s *= 1.02) e.push_back(s);
  e.push_back(0.5 * S);
  e.push_back(S);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

QuadraticFit fit_quadratic(const std::vector<double>& d, const std::vector<double>& y) {
  Eigen::MatrixXd X(d.size(), 2);
  Eigen::VectorXd Y(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = d[i] * d[i];
    Y[i] = y[i];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
  return {beta[0], beta[1], (X * beta - Y).norm()};
}

template <class F>
auto parallel_map(std::size_t n, F f) {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(n);
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t base = 0; base < n; base += workers) {
    std::vector<std::future<R>> batch;
    const std::size_t end = std::min(n, base + workers);
    for (std::size_t i = base; i < end; ++i)
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, f, i));
    for (std::size_t i = base; i < end; ++i) out[i] = batch[i - base].get();
  }
  return out;
}

}  // namespace

double cutoff(double r, double r0) {
  const double x = ramp(r, r0);
  return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

double cutoff_derivative(double r, double r0) {
  const double x = ramp(r, r0);
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -30.0 * x * x * (1.0 - x) * (1.0 - x) * 2.0 / r0;
}

double Bubble::W(double r) const {
  if (r >= r0_) return 0.0;
  const int N = gs_->N();
  return cutoff(r, r0_) * std::pow(delta_, -N / (gs_->q() + 1.0)) * gs_->eval(r / delta_).U;
}

double Bubble::H(double r) const {
  if (r >= r0_) return 0.0;
  const int N = gs_->N();
  return cutoff(r, r0_) * std::pow(delta_, -N / (gs_->p() + 1.0)) * gs_->eval(r / delta_).V;
}

double Bubble::dW(double r) const {
  if (r >= r0_) return 0.0;
  const int N = gs_->N();
  const auto s = gs_->eval(r / delta_);
  return std::pow(delta_, -N / (gs_->q() + 1.0)) * (cutoff_derivative(r, r0_) * s.U + cutoff(r, r0_) * s.dU / delta_);
}

double Bubble::dH(double r) const {
  if (r >= r0_) return 0.0;
  const int N = gs_->N();
  const auto s = gs_->eval(r / delta_);
  return std::pow(delta_, -N / (gs_->p() + 1.0)) * (cutoff_derivative(r, r0_) * s.V + cutoff(r, r0_) * s.dV / delta_);
}

Bubble assemble_bubble(const ModelManifold& m, const GroundState& gs, double delta, const Point& xi, double r0) {
  require(delta > 0.0 && std::isfinite(delta), ErrorCode::NonpositiveScale, "bubble scale must be positive");
  require(m.N() == gs.N(), ErrorCode::InvalidArgument, "manifold and ground state dimensions differ");
  require(r0 > 0.0 && r0 < m.injectivity_radius() / 2.0, ErrorCode::ChartViolation,
          "cutoff radius must lie in (0, injectivity/2)");
  return Bubble(&gs, m.canonical(xi), delta, r0);
}

EnergyBreakdown& EnergyBreakdown::operator+=(const EnergyBreakdown& o) {
  grad_term += o.grad_term;
  h_term += o.h_term;
  p_term += o.p_term;
  q_term += o.q_term;
  error += o.error;
  return *this;
}

EnergyBreakdown bubble_energy(const ModelManifold& m, const PotentialSpec& h, const Bubble& b, double epsilon,
                              double alpha, double beta) {
  require(epsilon >= 0.0, ErrorCode::InvalidArgument, "epsilon must be non-negative");
  const auto hr = radial_profile(m, h, b.peak(), b.r0());
  require(hr.has_value(), ErrorCode::NonRadialPotential, "potential is not radial about the peak");
  const GroundState& gs = b.profile();
  const int N = gs.N();
  const double p = gs.p(), q = gs.q();
  const double d = b.delta(), r0 = b.r0();
  const double ep = p + 1.0 - alpha * epsilon;
  const double eq = q + 1.0 - beta * epsilon;
  const Point& xi = b.peak();

  // Integrate in the dilated variable s = r / delta.
  auto integrand = [&](double s) -> std::array<double, 4> {
    const double r = d * s;
    const auto y = gs.eval(s);
    const double chi = cutoff(r, r0);
    const double dchi = cutoff_derivative(r, r0);
    const double D = m.volume_density(xi, r) * std::pow(s, N - 1);
    const double W = chi * y.U, H = chi * y.V;
    const double dW = chi * y.dU + d * dchi * y.U;
    const double dH = chi * y.dV + d * dchi * y.V;
    return {dW * dH * D, (*hr)(r) * W * H * D, H > 0 ? std::pow(H, ep) * D : 0.0,
            W > 0 ? std::pow(W, eq) * D : 0.0};
  };
  const auto edges = bubble_edges(gs, d, r0);
  const auto I = integrate_panels4(integrand, edges);
  const double omega = surface_measure(N);
  const double sp = std::pow(d, N * alpha * epsilon / (p + 1.0)) / ep;
  const double sq = std::pow(d, N * beta * epsilon / (q + 1.0)) / eq;
  EnergyBreakdown e;
  e.grad_term = omega * I.value[0];
  e.h_term = omega * d * d * I.value[1];
  e.p_term = omega * sp * I.value[2];
  e.q_term = omega * sq * I.value[3];
  e.error = omega * (I.error[0] + d * d * I.error[1] + sp * I.error[2] + sq * I.error[3]);
  return e;
}

EnergyBreakdown energy_terms(const ModelManifold& m, const PotentialSpec& h, const std::vector<Bubble>& bubbles,
                             double epsilon, double alpha, double beta) {
  require(!bubbles.empty(), ErrorCode::InvalidArgument, "need at least one bubble");
  for (std::size_t i = 0; i < bubbles.size(); ++i)
    for (std::size_t j = i + 1; j < bubbles.size(); ++j)
      require(m.distance(bubbles[i].peak(), bubbles[j].peak()) >= bubbles[i].r0() + bubbles[j].r0(),
              ErrorCode::OverlappingSupports,
              "bubbles " + std::to_string(i) + " and " + std::to_string(j) + " have overlapping supports");
  EnergyBreakdown total;
  for (const auto& b : bubbles) total += bubble_energy(m, h, b, epsilon, alpha, beta);
  return total;
}

std::vector<double> geometric_grid(double first, double last, int count) {
  require(count >= 2 && first > 0 && last > 0, ErrorCode::InvalidArgument, "bad geometric grid");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = first * std::pow(last / first, double(i) / (count - 1));
  g.front() = first;
  g.back() = last;
  return g;
}

std::vector<double> default_epsilon_grid() { return geometric_grid(1e-4, 1e-6, 8); }

ExpansionFit sweep_and_fit(const ModelManifold& m, const PotentialSpec& h, const GroundState& gs,
                           const BubbleConstants& c, const std::vector<double>& t, const std::vector<Point>& xi,
                           double alpha, double beta, const std::vector<double>& epsilon, double r0) {
  const int k = static_cast<int>(t.size());
  require(k >= 1 && xi.size() == t.size(), ErrorCode::InvalidArgument, "need one scale per peak");
  for (double v : t) require(v > 0.0, ErrorCode::NonpositiveScale, "scales must be positive");
  require(epsilon.size() >= 6, ErrorCode::InvalidArgument, "epsilon grid needs at least 6 points");
  for (std::size_t i = 1; i < epsilon.size(); ++i)
    require(epsilon[i] < epsilon[i - 1] && epsilon[i] > 0, ErrorCode::InvalidArgument,
            "epsilon grid must be positive and strictly decreasing");
  require(epsilon.front() / epsilon.back() >= 100.0 * (1 - 1e-12), ErrorCode::InvalidArgument,
          "epsilon grid must span at least two decades");
  require(c.N == gs.N() && c.p == gs.p() && c.q == gs.q() &&
              c.normalization.gauge_delta == gs.normalization().gauge_delta,
          ErrorCode::NormalizationMismatch, "constants do not belong to this ground state");
  // The bubble core must be resolved well inside the plateau of the cutoff.
  const double core = gs.half_radius();
  for (double e : epsilon)
    for (double tj : t)
      require(r0 / (2.0 * std::sqrt(e * tj)) >= 10.0 * core, ErrorCode::InvalidArgument,
              "epsilon " + std::to_string(e) + " leaves the bubble core unresolved");

  const std::size_t n = epsilon.size();
  Eigen::MatrixXd X(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = epsilon[i];
    X(i, 2) = epsilon[i] * std::log(epsilon[i]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  ExpansionFit fit;
  fit.k = k;
  fit.epsilon = epsilon;
  fit.condition = sv[0] / sv[sv.size() - 1];
  require(fit.condition <= 1e10, ErrorCode::IllConditionedFit,
          "design matrix condition number " + std::to_string(fit.condition));

  fit.terms = parallel_map(n, [&](std::size_t i) {
    std::vector<Bubble> bubbles;
    for (int j = 0; j < k; ++j) bubbles.push_back(assemble_bubble(m, gs, std::sqrt(epsilon[i] * t[j]), xi[j], r0));
    return energy_terms(m, h, bubbles, epsilon[i], alpha, beta);
  });
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.J.push_back(fit.terms[i].J());
    Y[i] = fit.J[i];
  }
  const Eigen::VectorXd beta_hat = svd.solve(Y);
  fit.a = beta_hat[0];
  fit.b = beta_hat[1];
  fit.c = beta_hat[2];
  fit.residual_norm = (X * beta_hat - Y).norm();

  const C1C2 cc = c1_c2(c, alpha, beta, k);
  fit.a_predicted = 2.0 * k * c.L1.value / c.N;
  fit.c_predicted = -cc.c2;
  fit.b_predicted = cc.c1 + psi_k(m, h, c, alpha, beta, t, xi);
  fit.a_error = std::abs(fit.a - fit.a_predicted) / std::abs(fit.a);
  fit.c_error = std::abs(fit.c - fit.c_predicted) / std::abs(fit.c_predicted);
  fit.b_error = std::abs(fit.b - fit.b_predicted) / std::abs(fit.b);
  return fit;
}

DeltaSweep delta_sweep(const ModelManifold& m, const PotentialSpec& h, const GroundState& gs, const Point& xi,
                       double r0, const std::vector<double>& deltas) {
  require(deltas.size() >= 3, ErrorCode::InvalidArgument, "delta sweep needs at least 3 points");
  DeltaSweep out;
  out.delta = deltas;
  out.terms = parallel_map(deltas.size(), [&](std::size_t i) {
    return bubble_energy(m, h, assemble_bubble(m, gs, deltas[i], xi, r0), 0.0, 1.0, 1.0);
  });
  std::vector<double> g, hh;
  for (const auto& e : out.terms) {
    g.push_back(e.grad_term);
    hh.push_back(e.h_term);
  }
  out.grad = fit_quadratic(deltas, g);
  out.h = fit_quadratic(deltas, hh);
  return out;
}

}  // namespace lanemden
