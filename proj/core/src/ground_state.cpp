#include "lanemden/ground_state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "lanemden/errors.hpp"
#include "lanemden/finite_difference.hpp"
#include "radial_system.hpp"

namespace lanemden {
namespace {

using detail::RadialSystem;
using detail::State;

RadialSystem system_for(const HyperbolaPoint& hp) { return RadialSystem{hp.p.value, hp.q.value, hp.N}; }

detail::Tolerances tolerances(double rtol) { return detail::Tolerances{rtol, 1e-300}; }

std::vector<double> make_grid(const SolverOptions& opts) {
  require(opts.r_max > opts.grid_start && opts.grid_ratio > 1.0, ErrorCode::InvalidArgument, "bad grid options");
  const double span = std::log(opts.r_max / opts.grid_start);
  const auto n = static_cast<std::size_t>(std::ceil(span / std::log(opts.grid_ratio)));
  std::vector<double> r{0.0};
  r.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) r.push_back(opts.grid_start * std::exp(span * double(k) / double(n)));
  r.back() = opts.r_max;
  return r;
}

struct LeastSquaresLine {
  double slope = 0.0;
  double intercept = 0.0;
};

LeastSquaresLine fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

// Matching of an inward and an outward integration leg. The unknowns are
// the shooting value a, the U amplitude (linear, it may change sign in the
// slow-tail regime) and log of the V amplitude.
class TwoSidedMatch {
 public:
  TwoSidedMatch(const RadialSystem& sys, double r_start, double r_match, double r_far, double rtol)
      : sys_(sys), r_start_(r_start), r_match_(r_match), r_far_(r_far), tol_(tolerances(rtol)) {}

  State inner(double a) const {
    return detail::integrate_to(sys_, detail::series_start(sys_, a, r_start_), r_start_, r_match_, tol_);
  }
  State outer(double A, double B) const {
    return detail::integrate_to(sys_, detail::far_field(sys_, A, B, r_far_), r_far_, r_match_, tol_);
  }

  // Amplitudes are read off the inner trajectory at r_probe, which should lie
  // in the asymptotic region.
  void initialise(double a, double r_probe) {
    const State yi = detail::integrate_to(sys_, detail::series_start(sys_, a, r_start_), r_start_, r_probe, tol_);
    const double w = std::pow(r_probe, sys_.N - 2.0);
    const double B0 = yi[2] * w;
    double slow = 0.0;
    if (sys_.slow_u_tail())
      slow = detail::slow_tail_coefficient(sys_, B0) * std::pow(r_probe, 2.0 - (sys_.N - 2) * sys_.p);
    A_scale_ = std::abs(yi[0]) * w;
    x_ = Eigen::Vector3d(a, (yi[0] - slow) * w / A_scale_, std::log(B0));
  }

  Eigen::Vector4d residual(const Eigen::Vector3d& x) const {
    return mismatch(inner(x[0]), outer(x[1] * A_scale_, std::exp(x[2])));
  }

  // Levenberg-Marquardt with a central-difference Jacobian.
  int solve(int max_iterations) {
    Eigen::Vector4d r = residual(x_);
    double mu = 1e-3;
    int it = 0;
    for (; it < max_iterations; ++it) {
      if (r.norm() < 1e-15) break;
      Eigen::Matrix<double, 4, 3> J;
      const State yi = inner(x_[0]);
      const State yo = outer(x_[1] * A_scale_, std::exp(x_[2]));
      const double ha = 1e-7 * std::abs(x_[0]);
      J.col(0) = (mismatch(inner(x_[0] + ha), yo) - mismatch(inner(x_[0] - ha), yo)) / (2 * ha);
      const double h = 1e-7;
      J.col(1) = (mismatch(yi, outer((x_[1] + h) * A_scale_, std::exp(x_[2]))) -
                  mismatch(yi, outer((x_[1] - h) * A_scale_, std::exp(x_[2])))) /
                 (2 * h);
      J.col(2) = (mismatch(yi, outer(x_[1] * A_scale_, std::exp(x_[2] + h))) -
                  mismatch(yi, outer(x_[1] * A_scale_, std::exp(x_[2] - h)))) /
                 (2 * h);
      const Eigen::Matrix3d JtJ = J.transpose() * J;
      const Eigen::Vector3d g = J.transpose() * r;
      bool improved = false;
      Eigen::Vector3d step = Eigen::Vector3d::Zero();
      for (int k = 0; k < 30; ++k) {
        Eigen::Matrix3d A = JtJ;
        A.diagonal() *= 1.0 + mu;
        step = A.ldlt().solve(-g);
        const Eigen::Vector3d trial = x_ + step;
        const Eigen::Vector4d rt = residual(trial);
        if (rt.norm() < r.norm()) {
          x_ = trial;
          r = rt;
          mu = std::max(mu / 10.0, 1e-12);
          improved = true;
          break;
        }
        mu *= 10.0;
      }
      if (!improved || step.cwiseAbs().maxCoeff() < 1e-15) break;
    }
    residual_ = r.cwiseAbs().maxCoeff();
    return it;
  }

  double a() const { return x_[0]; }
  double A() const { return x_[1] * A_scale_; }
  double B() const { return std::exp(x_[2]); }
  double residual_norm() const { return residual_; }
  const Eigen::Vector3d& x() const { return x_; }
  void set_x(const Eigen::Vector3d& x, double A_scale) {
    x_ = x;
    A_scale_ = A_scale;
  }
  double A_scale() const { return A_scale_; }

 private:
  static Eigen::Vector4d mismatch(const State& yi, const State& yo) {
    Eigen::Vector4d d;
    for (int k = 0; k < 4; ++k) d[k] = (yi[k] - yo[k]) / std::abs(yi[k]);
    return d;
  }

  RadialSystem sys_;
  double r_start_, r_match_, r_far_;
  detail::Tolerances tol_;
  double A_scale_ = 1.0;
  Eigen::Vector3d x_ = Eigen::Vector3d::Zero();
  double residual_ = 0.0;
};

double hermite5(double t, double h, double f0, double d0, double s0, double f1, double d1, double s1) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 0.5 * (t3 - 2 * t4 + t5);
  return H0 * f0 + h * H1 * d0 + h * h * H2 * s0 + H3 * f1 + h * H4 * d1 + h * h * H5 * s1;
}

}  // namespace

std::string_view to_string(ShootingClass c) {
  switch (c) {
    case ShootingClass::CrossesZero: return "CrossesZero";
    case ShootingClass::SlowDecay: return "SlowDecay";
    case ShootingClass::Converged: return "Converged";
  }
  return "Converged";
}

bool ShootingOutcome::below() const noexcept {
  if (classification == ShootingClass::CrossesZero) return component == 'U';
  if (classification == ShootingClass::SlowDecay) return true;
  return tail_drift >= 0.0;
}

double DecayReport::worst_deviation() const noexcept {
  return std::max({U.deviation, V.deviation, dU.deviation, dV.deviation});
}

ShootingOutcome shoot(const HyperbolaPoint& hp, double a, const SolverOptions& opts) {
  require(a > 0.0, ErrorCode::InvalidArgument, "shooting parameter must be positive");
  const auto sys = system_for(hp);
  const auto tr =
      detail::shoot_from_origin(sys, a, opts.series_radius, opts.r_max, opts.window_fraction, tolerances(opts.rtol));
  ShootingOutcome out;
  if (tr.crossed >= 0) {
    out.classification = ShootingClass::CrossesZero;
    out.component = tr.crossed == 0 ? 'U' : 'V';
    out.crossing_radius = tr.crossing_radius;
    return out;
  }
  out.tail_drift = (tr.tail_end_weight - tr.tail_start_weight) / std::abs(tr.tail_start_weight);
  if (out.tail_drift > opts.flat_band) {
    out.classification = ShootingClass::SlowDecay;
  } else if (out.tail_drift < -opts.flat_band) {
    // r^{N-2} V still falling: V would cross beyond the integration range.
    out.classification = ShootingClass::CrossesZero;
    out.component = 'V';
  } else {
    out.classification = ShootingClass::Converged;
  }
  return out;
}

GroundState GroundState::from_samples(const HyperbolaPoint& hp, std::vector<double> r, std::vector<double> U,
                                      std::vector<double> V, std::vector<double> dU, std::vector<double> dV,
                                      const Normalization& norm, const SolverDiagnostics& diag, double decay_band) {
  const std::size_t n = r.size();
  require(n >= 30 && U.size() == n && V.size() == n && dU.size() == n && dV.size() == n, ErrorCode::InvalidArgument,
          "ground state samples have inconsistent lengths");
  require(r[0] == 0.0, ErrorCode::InvalidArgument, "ground state grid must start at r = 0");
  for (std::size_t i = 1; i < n; ++i)
    require(r[i] > r[i - 1], ErrorCode::InvalidArgument, "ground state grid must be strictly increasing");

  GroundState gs;
  gs.hp_ = hp;
  gs.norm_ = norm;
  gs.diag_ = diag;
  const double p = hp.p.value, q = hp.q.value;
  const int N = hp.N;
  gs.d2U_.resize(n);
  gs.d2V_.resize(n);
  gs.d3U_.resize(n);
  gs.d3V_.resize(n);
  gs.d2U_[0] = -detail::spow(V[0], p) / N;
  gs.d2V_[0] = -detail::spow(U[0], q) / N;
  gs.d3U_[0] = 0.0;
  gs.d3V_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = r[i];
    gs.d2U_[i] = -detail::spow(V[i], p) - (N - 1) / x * dU[i];
    gs.d2V_[i] = -detail::spow(U[i], q) - (N - 1) / x * dV[i];
    gs.d3U_[i] = -p * std::pow(std::abs(V[i]), p - 1) * dV[i] - (N - 1) * (gs.d2U_[i] / x - dU[i] / (x * x));
    gs.d3V_[i] = -q * std::pow(std::abs(U[i]), q - 1) * dU[i] - (N - 1) * (gs.d2V_[i] / x - dV[i] / (x * x));
  }
  gs.r_ = std::move(r);
  gs.U_ = std::move(U);
  gs.V_ = std::move(V);
  gs.dU_ = std::move(dU);
  gs.dV_ = std::move(dV);
  gs.tail_ = validate_decay(gs, 0.5 * gs.r_max(), gs.r_max(), decay_band);
  gs.diag_.residual_max = profile_residual(gs);
  return gs;
}

ProfileSample GroundState::eval(double r) const {
  require(r >= 0.0, ErrorCode::InvalidArgument, "negative radius");
  const std::size_t n = r_.size();
  if (r >= r_.back()) {
    const double R = r_.back();
    const double su = R * dU_.back() / U_.back();
    const double sv = R * dV_.back() / V_.back();
    const double u = U_.back() * std::pow(r / R, su);
    const double v = V_.back() * std::pow(r / R, sv);
    return {u, v, su * u / r, sv * v / r};
  }
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - r_.begin()), n - 1);
  const std::size_t i = j - 1;
  const double h = r_[j] - r_[i];
  const double t = (r - r_[i]) / h;
  ProfileSample s;
  s.U = hermite5(t, h, U_[i], dU_[i], d2U_[i], U_[j], dU_[j], d2U_[j]);
  s.V = hermite5(t, h, V_[i], dV_[i], d2V_[i], V_[j], dV_[j], d2V_[j]);
  s.dU = hermite5(t, h, dU_[i], d2U_[i], d3U_[i], dU_[j], d2U_[j], d3U_[j]);
  s.dV = hermite5(t, h, dV_[i], d2V_[i], d3V_[i], dV_[j], d2V_[j], d3V_[j]);
  return s;
}

double GroundState::half_radius() const {
  const double target = 0.5 * V_[0];
  auto it = std::find_if(V_.begin(), V_.end(), [&](double v) { return v < target; });
  require(it != V_.end() && it != V_.begin(), ErrorCode::InvalidArgument, "V never halves on the grid");
  double lo = r_[static_cast<std::size_t>(it - V_.begin()) - 1];
  double hi = r_[static_cast<std::size_t>(it - V_.begin())];
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (eval(mid).V < target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t GroundState::junction_index() const {
  auto it = std::upper_bound(r_.begin(), r_.end(), diag_.junction_radius);
  return static_cast<std::size_t>(it - r_.begin());
}

DecayReport validate_decay(const GroundState& gs, double r_lo, double r_hi, double band) {
  const double R = gs.r_max();
  const double slack = 1e-9 * R;
  require(r_lo < r_hi && r_lo >= 0.5 * R - slack && r_hi <= R + slack, ErrorCode::InvalidArgument,
          "decay window must lie inside [0.5 r_max, r_max]");
  const auto& r = gs.grid();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= r_lo - slack && r[i] <= r_hi + slack) idx.push_back(i);
  require(idx.size() >= 20, ErrorCode::WindowTooShort,
          "decay window holds " + std::to_string(idx.size()) + " grid points, need 20");

  const DecayRates rates = decay_rates(gs.hyperbola().p, gs.N());
  auto fit = [&](const std::vector<double>& f, double predicted, bool log_flag) {
    std::vector<double> x, y;
    for (auto i : idx) {
      x.push_back(std::log(r[i]));
      double v = std::log(std::abs(f[i]));
      if (log_flag) v -= std::log(std::log(r[i]));
      y.push_back(v);
    }
    SlopeFit s;
    s.measured = fit_line(x, y).slope;
    s.predicted = predicted;
    s.deviation = std::abs(s.measured - predicted) / std::abs(predicted);
    s.log_flag = log_flag;
    return s;
  };
  DecayReport rep;
  rep.r_lo = r_lo;
  rep.r_hi = r_hi;
  rep.points = idx.size();
  rep.band = band;
  rep.U = fit(gs.U(), rates.u_rate, rates.u_log_flag);
  rep.V = fit(gs.V(), rates.v_rate, false);
  rep.dU = fit(gs.dU(), rates.du_rate, rates.u_log_flag);
  rep.dV = fit(gs.dV(), rates.dv_rate, false);
  return rep;
}

double profile_residual(const GroundState& gs) {
  const auto& r = gs.grid();
  const std::size_t n = r.size();
  const std::size_t j = std::clamp<std::size_t>(gs.junction_index(), 0, n);
  const double p = gs.p(), q = gs.q();
  const int N = gs.N();
  double worst = 0.0;
  auto check = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo < 7) return;
    for (std::size_t i = std::max<std::size_t>(lo + 3, 1); i + 3 < hi; ++i) {
      const double u2 = nonuniform_derivative(r, gs.dU(), i, 1, lo, hi);
      const double v2 = nonuniform_derivative(r, gs.dV(), i, 1, lo, hi);
      const double a1 = (N - 1) / r[i] * gs.dU()[i], b1 = detail::spow(gs.V()[i], p);
      const double a2 = (N - 1) / r[i] * gs.dV()[i], b2 = detail::spow(gs.U()[i], q);
      const double ru = std::abs(u2 + a1 + b1) / std::max({std::abs(u2), std::abs(a1), std::abs(b1)});
      const double rv = std::abs(v2 + a2 + b2) / std::max({std::abs(v2), std::abs(a2), std::abs(b2)});
      worst = std::max({worst, ru, rv});
    }
  };
  check(0, j);
  check(j, n);
  return worst;
}

GroundState solve_ground_state(const HyperbolaPoint& hp, const SolverOptions& opts) {
  // The scalar point p = q = (N+2)/(N-2) has a well-defined bubble in every
  // dimension, so it is admitted below the regime floor as well.
  const Regime regime = classify_regime(hp.p, hp.N);
  const bool scalar = compare(hp.p, Rational(hp.N + 2, hp.N - 2)) == 0;
  require(regime.tag != RegimeTag::Unsupported || scalar, ErrorCode::UnsupportedRegime,
          "p = " + hp.p.str() + ", N = " + std::to_string(hp.N) + " lies outside the supported regimes");
  require(opts.rtol > 0 && opts.bisection_tol > 0 && opts.a_lo > 0 && opts.a_hi > opts.a_lo,
          ErrorCode::InvalidArgument, "bad solver options");
  const auto sys = system_for(hp);

  ShootingOutcome lo_out = shoot(hp, opts.a_lo, opts);
  ShootingOutcome hi_out = shoot(hp, opts.a_hi, opts);
  require(lo_out.below() && !hi_out.below(), ErrorCode::BracketNotFound,
          "shooting classification does not change sign on [" + std::to_string(opts.a_lo) + ", " +
              std::to_string(opts.a_hi) + "]");
  double lo = opts.a_lo, hi = opts.a_hi;
  int iterations = 0;
  while (hi / lo - 1.0 > opts.bisection_tol) {
    require(++iterations <= 200, ErrorCode::NoConvergence, "bisection stalled at relative width " +
                                                               std::to_string(hi / lo - 1.0));
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    const ShootingOutcome out = shoot(hp, mid, opts);
    ShootingOutcome& side = out.below() ? lo_out : hi_out;
    // Crossings move outward as a approaches the threshold from either side.
    if (out.classification == ShootingClass::CrossesZero && side.classification == ShootingClass::CrossesZero &&
        out.component == side.component && std::isfinite(out.crossing_radius) &&
        std::isfinite(side.crossing_radius))
      require(out.crossing_radius >= 0.99 * side.crossing_radius, ErrorCode::NoConvergence,
              "crossing radius not monotone in the shooting parameter");
    side = out;
    (out.below() ? lo : hi) = mid;
  }
  if (hi / lo - 1.0 > 1e-6) fail(ErrorCode::NoConvergence, "bisection did not reach tolerance");

  double departure = opts.r_max;
  for (const auto* o : {&lo_out, &hi_out})
    if (std::isfinite(o->crossing_radius)) departure = std::min(departure, o->crossing_radius);
  // Matching near the core keeps the inner leg well conditioned in a.
  const double core = std::sqrt(double(hp.N) * (hp.N - 2));
  const double r_match = std::clamp(std::min(departure / 8.0, 2.0 * core), 1.0, opts.r_max / 4.0);
  const double r_far = opts.far_factor * opts.r_max;

  TwoSidedMatch match(sys, opts.series_radius, r_match, r_far, opts.rtol);
  match.initialise(std::sqrt(lo * hi), std::max(r_match, std::min(departure / 8.0, opts.r_max / 4.0)));
  const int newton = match.solve(400);
  require(match.residual_norm() < 1e-9, ErrorCode::NoConvergence,
          "two-sided matching residual " + std::to_string(match.residual_norm()));

  TwoSidedMatch loose(sys, opts.series_radius, r_match, r_far, 10.0 * opts.rtol);
  loose.set_x(match.x(), match.A_scale());
  loose.solve(40);
  const double a = match.a();
  const double a_error = std::max(std::abs(loose.a() - a), 4.0 * std::numeric_limits<double>::epsilon() * a);

  std::vector<double> r = make_grid(opts);
  std::vector<double> inner_times{opts.series_radius}, outer_times{r_far};
  for (std::size_t i = 1; i < r.size(); ++i) (r[i] <= r_match ? inner_times : outer_times).push_back(r[i]);
  std::reverse(outer_times.begin() + 1, outer_times.end());
  const auto tol = tolerances(opts.rtol);
  const auto inner = detail::integrate_times(sys, detail::series_start(sys, a, opts.series_radius), inner_times, tol);
  const auto outer = detail::integrate_times(sys, detail::far_field(sys, match.A(), match.B(), r_far), outer_times, tol);
  require(inner.size() == inner_times.size() && outer.size() == outer_times.size(), ErrorCode::NoConvergence,
          "integrator did not report every grid node");

  const std::size_t n = r.size();
  std::vector<double> U(n), V(n), dU(n), dV(n);
  U[0] = a;
  V[0] = 1.0;
  std::size_t k = 1;
  for (std::size_t i = 1; i < inner.size(); ++i, ++k) {
    U[k] = inner[i][0];
    dU[k] = inner[i][1];
    V[k] = inner[i][2];
    dV[k] = inner[i][3];
  }
  for (std::size_t i = outer.size() - 1; i >= 1; --i, ++k) {
    U[k] = outer[i][0];
    dU[k] = outer[i][1];
    V[k] = outer[i][2];
    dV[k] = outer[i][3];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(U[i] > 0.0 && V[i] > 0.0))
      fail(ErrorCode::PositivityLost, "profile leaves the positive cone at r = " + std::to_string(r[i]));
    if (i > 0 && !(U[i] < U[i - 1] && V[i] < V[i - 1]))
      fail(ErrorCode::PositivityLost, "profile is not radially decreasing at r = " + std::to_string(r[i]));
  }

  SolverDiagnostics diag;
  diag.rtol = opts.rtol;
  diag.r_max = opts.r_max;
  diag.a_error = a_error;
  diag.match_residual = match.residual_norm();
  diag.junction_radius = r_match;
  diag.bisection_iterations = iterations;
  diag.newton_iterations = newton;
  GroundState gs = GroundState::from_samples(hp, std::move(r), std::move(U), std::move(V), std::move(dU),
                                             std::move(dV), Normalization{1.0, a, 1.0}, diag, opts.decay_band);
  require(gs.diagnostics().residual_max <= opts.residual_tol, ErrorCode::NoConvergence,
          "profile residual " + std::to_string(gs.diagnostics().residual_max) + " above tolerance");
  if (opts.validate_tail)
    require(gs.tail_fit().passed(), ErrorCode::TailValidationFailed,
            "tail exponents deviate by " + std::to_string(gs.tail_fit().worst_deviation()));
  return gs;
}

GroundState rescale(const GroundState& gs, double delta) {
  require(delta > 0.0 && std::isfinite(delta), ErrorCode::InvalidArgument, "rescale needs delta > 0");
  const int N = gs.N();
  const double su = std::pow(delta, -N / (gs.q() + 1.0));
  const double sv = std::pow(delta, -N / (gs.p() + 1.0));
  std::vector<double> r = gs.grid(), U = gs.U(), V = gs.V(), dU = gs.dU(), dV = gs.dV();
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] *= delta;
    U[i] *= su;
    V[i] *= sv;
    dU[i] *= su / delta;
    dV[i] *= sv / delta;
  }
  Normalization norm = gs.normalization();
  norm.V_at_zero = V[0];
  norm.U_at_zero = U[0];
  norm.gauge_delta *= delta;
  SolverDiagnostics diag = gs.diagnostics();
  diag.junction_radius *= delta;
  diag.r_max *= delta;
  return GroundState::from_samples(gs.hyperbola(), std::move(r), std::move(U), std::move(V), std::move(dU),
                                   std::move(dV), norm, diag, gs.tail_fit().band);
}

}  // namespace lanemden
