#include "lanemden/reduced_energy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include "lanemden/errors.hpp"

namespace lanemden {
namespace {

void require_scales(const std::vector<double>& t, const std::vector<Point>& xi) {
  require(t.size() == xi.size() && !t.empty(), ErrorCode::InvalidArgument, "need one scale per peak");
  for (double v : t) require(v > 0.0, ErrorCode::NonpositiveScale, "scales must be positive");
}

// Search state: per peak a point and tau = log t.
struct Candidate {
  std::vector<Point> xi;
  std::vector<double> tau;
};

class Objective {
 public:
  Objective(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, double alpha, double beta)
      : m_(m), h_(h), c_(c), L3_(c.L3.value), ct_(c_tilde(c, alpha, beta)), coef_(phi_coefficient(c)) {}

  double phi_at(const Point& x) const { return evaluate(m_, h_, x) - coef_ * m_.scal(x); }

  // Gradient of f / C-tilde in (tau, normal coordinates) for one peak.
  Eigen::VectorXd peak_gradient(const Point& x, double tau) const {
    const int N = m_.N();
    const double t = std::exp(tau);
    Eigen::VectorXd g(N + 1);
    g[0] = L3_ * phi_at(x) * t / ct_ - 1.0;
    g.tail(N) = L3_ * t / ct_ * gradient(m_, h_, x);
    return g;
  }

  Eigen::MatrixXd peak_hessian(const Point& x, double tau) const {
    const int N = m_.N();
    const double t = std::exp(tau);
    const double s = 1e-4 * m_.injectivity_radius();
    auto hv = [&](const Tangent& v) { return evaluate(m_, h_, m_.exp(x, v)); };
    Eigen::MatrixXd H(N + 1, N + 1);
    H(0, 0) = L3_ * phi_at(x) * t / ct_;
    const Eigen::VectorXd gh = gradient(m_, h_, x);
    H.block(1, 0, N, 1) = L3_ * t / ct_ * gh;
    H.block(0, 1, 1, N) = H.block(1, 0, N, 1).transpose();
    const double h0 = hv(Tangent::Zero(N));
    for (int i = 0; i < N; ++i) {
      const Tangent ei = Tangent::Unit(N, i) * s;
      H(1 + i, 1 + i) = (hv(ei) - 2 * h0 + hv(-ei)) / (s * s);
      for (int j = i + 1; j < N; ++j) {
        const Tangent ej = Tangent::Unit(N, j) * s;
        const double d = (hv(ei + ej) - hv(ei - ej) - hv(-ei + ej) + hv(-ei - ej)) / (4 * s * s);
        H(1 + i, 1 + j) = d;
        H(1 + j, 1 + i) = d;
      }
    }
    H.block(1, 1, N, N) *= L3_ * t / ct_;
    return H;
  }

  Eigen::VectorXd gradient_of(const Candidate& z) const {
    const int n = m_.N() + 1;
    Eigen::VectorXd g(n * z.xi.size());
    for (std::size_t j = 0; j < z.xi.size(); ++j) g.segment(n * j, n) = peak_gradient(z.xi[j], z.tau[j]);
    return g;
  }

  Eigen::MatrixXd hessian_of(const Candidate& z) const {
    const int n = m_.N() + 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n * z.xi.size(), n * z.xi.size());
    for (std::size_t j = 0; j < z.xi.size(); ++j) H.block(n * j, n * j, n, n) = peak_hessian(z.xi[j], z.tau[j]);
    return H;
  }

  Candidate moved(const Candidate& z, const Eigen::VectorXd& step) const {
    const int n = m_.N() + 1;
    Candidate out = z;
    for (std::size_t j = 0; j < z.xi.size(); ++j) {
      out.tau[j] += step[n * j];
      out.xi[j] = m_.exp(z.xi[j], step.segment(n * j + 1, n - 1));
    }
    return out;
  }

  double ct() const { return ct_; }
  double L3() const { return L3_; }

 private:
  const ModelManifold& m_;
  const PotentialSpec& h_;
  const BubbleConstants& c_;
  double L3_, ct_, coef_;
};

// Levenberg-Marquardt on the gradient, so saddles are found as well as minima.
std::optional<Candidate> solve_start(const Objective& F, const ModelManifold& m, Candidate z,
                                     const SearchOptions& opts, double max_chart_step) {
  const int n = m.N() + 1;
  Eigen::VectorXd g = F.gradient_of(z);
  double mu = 1e-3;
  for (int it = 0; it < opts.max_iterations && g.norm() > opts.gtol; ++it) {
    const Eigen::MatrixXd H = F.hessian_of(z);
    const Eigen::MatrixXd A = H.transpose() * H;
    const Eigen::VectorXd b = -H.transpose() * g;
    bool improved = false;
    for (int k = 0; k < 25 && !improved; ++k) {
      Eigen::MatrixXd M = A;
      M.diagonal() += mu * (A.diagonal().array() + 1e-12).matrix();
      Eigen::VectorXd step = M.ldlt().solve(b);
      for (std::size_t j = 0; j < z.xi.size(); ++j) {
        step[n * j] = std::clamp(step[n * j], -2.0, 2.0);
        auto seg = step.segment(n * j + 1, n - 1);
        const double len = seg.norm();
        if (len > max_chart_step) seg *= max_chart_step / len;
      }
      const Candidate trial = F.moved(z, step);
      const Eigen::VectorXd gt = F.gradient_of(trial);
      if (gt.norm() < g.norm()) {
        z = trial;
        g = gt;
        mu = std::max(mu / 10.0, 1e-15);
        improved = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!improved) break;
  }
  if (!(g.norm() <= opts.gtol)) return std::nullopt;
  return z;
}

bool same_point(const ModelManifold& m, const ReducedCriticalPoint& a, const ReducedCriticalPoint& b, double tol) {
  for (std::size_t j = 0; j < a.xi.size(); ++j) {
    if (m.distance(a.xi[j], b.xi[j]) > tol) return false;
    if (std::abs(a.t[j] - b.t[j]) > tol * std::max(1.0, a.t[j])) return false;
  }
  return true;
}

bool coordinates_less(const Point& a, const Point& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

}  // namespace

double phi(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, const Point& xi) {
  require(m.N() == c.N, ErrorCode::InvalidArgument, "manifold and constants have different dimensions");
  return evaluate(m, h, xi) - phi_coefficient(c) * m.scal(xi);
}

Tangent phi_gradient(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, const Point& xi) {
  require(m.N() == c.N, ErrorCode::InvalidArgument, "manifold and constants have different dimensions");
  // Scalar curvature is constant on the model manifolds.
  return gradient(m, h, xi);
}

double psi_k(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, double alpha, double beta,
             const std::vector<double>& t, const std::vector<Point>& xi) {
  require_scales(t, xi);
  const double ct = c_tilde(c, alpha, beta);
  double s = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) s += c.L3.value * phi(m, h, c, xi[j]) * t[j] - ct * std::log(t[j]);
  return s;
}

PsiGradient psi_k_gradient(const ModelManifold& m, const PotentialSpec& h, const BubbleConstants& c, double alpha,
                           double beta, const std::vector<double>& t, const std::vector<Point>& xi) {
  require_scales(t, xi);
  const double ct = c_tilde(c, alpha, beta);
  PsiGradient g;
  for (std::size_t j = 0; j < t.size(); ++j) {
    g.dt.push_back(c.L3.value * phi(m, h, c, xi[j]) - ct / t[j]);
    g.dxi.push_back(c.L3.value * t[j] * phi_gradient(m, h, c, xi[j]));
  }
  return g;
}

double optimal_t(const BubbleConstants& c, double alpha, double beta, double phi_value) {
  require(phi_value > 0.0, ErrorCode::NonpositivePhi, "optimal scale needs phi > 0");
  return c_tilde(c, alpha, beta) / (c.L3.value * phi_value);
}

std::vector<ReducedCriticalPoint> find_critical_points(const ModelManifold& m, const PotentialSpec& h,
                                                       const BubbleConstants& c, int k, double alpha, double beta,
                                                       const SearchOptions& opts) {
  require(k >= 1, ErrorCode::InvalidArgument, "k must be at least 1");
  require(m.N() == c.N, ErrorCode::InvalidArgument, "manifold and constants have different dimensions");
  require(opts.starts >= 1 && opts.rho1 > 0 && opts.rho1 < 1, ErrorCode::InvalidArgument, "bad search options");
  validate_potential(m, h);
  const double r0 = opts.r0 > 0 ? opts.r0 : default_r0(m);
  const double rho2 = opts.rho2 > 0 ? opts.rho2 : 2.02 * r0;
  require(r0 < m.injectivity_radius() / 2, ErrorCode::ChartViolation, "r0 must be below injectivity/2");
  require(rho2 > 2 * r0, ErrorCode::InvalidArgument, "rho2 must exceed 2 r0");
  if (k > 1) {
    require(rho2 <= m.diameter(), ErrorCode::SeparationUnsatisfiable, "rho2 exceeds the diameter");
    const double half = std::min(rho2 / 2, m.injectivity_radius());
    require(k * m.ball_volume(half) <= m.volume(), ErrorCode::SeparationUnsatisfiable,
            std::to_string(k) + " disjoint balls of radius rho2/2 do not fit");
  }

  const Objective F(m, h, c, alpha, beta);
  const double max_chart_step = m.injectivity_radius() / 4.0;
  auto run_start = [&](int s) -> std::optional<ReducedCriticalPoint> {
    std::mt19937_64 rng(opts.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s + 1));
    std::uniform_real_distribution<double> log_t(std::log(opts.rho1), -std::log(opts.rho1));
    Candidate z;
    for (int j = 0; j < k; ++j) {
      z.xi.push_back(m.random_point(rng));
      z.tau.push_back(log_t(rng));
    }
    auto solved = solve_start(F, m, z, opts, max_chart_step);
    if (!solved) return std::nullopt;
    ReducedCriticalPoint out;
    for (int j = 0; j < k; ++j) {
      const double t = std::exp(solved->tau[j]);
      const double ph = F.phi_at(solved->xi[j]);
      if (!(ph > 0.0) || t <= opts.rho1 || t >= 1.0 / opts.rho1) return std::nullopt;
      out.t.push_back(t);
      out.xi.push_back(m.canonical(solved->xi[j]));
      out.phi.push_back(ph);
    }
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (m.distance(out.xi[i], out.xi[j]) < rho2) return std::nullopt;
    out.value = psi_k(m, h, c, alpha, beta, out.t, out.xi);
    out.gradient_norm = F.gradient_of(*solved).norm();
    const Eigen::MatrixXd H = F.hessian_of(*solved);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (H + H.transpose())).eigenvalues();
    out.eig_min_abs = ev.cwiseAbs().minCoeff();
    out.eig_max_abs = ev.cwiseAbs().maxCoeff();
    out.negative_eigs = static_cast<int>((ev.array() < 0).count());
    out.degenerate = out.eig_min_abs < opts.degenerate_ratio * out.eig_max_abs;
    // Canonical peak order so permuted copies merge.
    std::vector<int> order(k);
    for (int j = 0; j < k; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return coordinates_less(out.xi[a], out.xi[b]); });
    ReducedCriticalPoint sorted = out;
    for (int j = 0; j < k; ++j) {
      sorted.t[j] = out.t[order[j]];
      sorted.xi[j] = out.xi[order[j]];
      sorted.phi[j] = out.phi[order[j]];
    }
    return sorted;
  };

  // Starts are independent; results are gathered in start order.
  std::vector<std::optional<ReducedCriticalPoint>> results(opts.starts);
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  for (int base = 0; base < opts.starts; base += workers) {
    std::vector<std::future<std::optional<ReducedCriticalPoint>>> batch;
    for (int s = base; s < std::min(opts.starts, base + workers); ++s)
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_start, s));
    for (int s = base; s < std::min(opts.starts, base + workers); ++s) results[s] = batch[s - base].get();
  }

  std::vector<ReducedCriticalPoint> found;
  for (auto& r : results) {
    if (!r) continue;
    bool dup = false;
    for (const auto& f : found)
      if (same_point(m, f, *r, opts.merge_tol)) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(std::move(*r));
  }
  require(!found.empty(), ErrorCode::NoCriticalPointFound,
          "no critical point with phi > 0 inside the scale box after " + std::to_string(opts.starts) + " starts");
  std::sort(found.begin(), found.end(), [](const ReducedCriticalPoint& a, const ReducedCriticalPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    for (std::size_t j = 0; j < a.xi.size(); ++j) {
      if (coordinates_less(a.xi[j], b.xi[j])) return true;
      if (coordinates_less(b.xi[j], a.xi[j])) return false;
    }
    return false;
  });
  return found;
}

}  // namespace lanemden
