#include "lanemden/manifold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lanemden/bubble_constants.hpp"
#include "lanemden/errors.hpp"
#include "lanemden/quadrature.hpp"

namespace lanemden {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0) y += period;
  return y;
}

double minimal_image(double d, double period) {
  d = std::fmod(d, period);
  if (d > period / 2) d -= period;
  if (d < -period / 2) d += period;
  return d;
}

}  // namespace

ModelManifold ModelManifold::sphere(int N, double radius) {
  require(N >= 2, ErrorCode::InvalidArgument, "sphere dimension must be at least 2");
  require(radius > 0 && std::isfinite(radius), ErrorCode::InvalidArgument, "sphere radius must be positive");
  return ModelManifold(N, Sphere{radius});
}

ModelManifold ModelManifold::torus(std::vector<double> periods) {
  require(!periods.empty(), ErrorCode::InvalidArgument, "torus needs at least one period");
  for (double p : periods) require(p > 0 && std::isfinite(p), ErrorCode::InvalidArgument, "torus periods must be positive");
  const int N = static_cast<int>(periods.size());
  return ModelManifold(N, FlatTorus{std::move(periods)});
}

ModelManifold ModelManifold::torus(int N, double period) {
  require(N >= 1, ErrorCode::InvalidArgument, "torus dimension must be positive");
  return torus(std::vector<double>(N, period));
}

std::string ModelManifold::describe() const {
  std::ostringstream s;
  if (auto* sp = std::get_if<Sphere>(&kind_)) {
    s << "Sphere(radius=" << sp->radius << ", N=" << N_ << ")";
  } else {
    const auto& t = std::get<FlatTorus>(kind_);
    s << "FlatTorus(periods=[";
    for (std::size_t i = 0; i < t.periods.size(); ++i) s << (i ? "," : "") << t.periods[i];
    s << "])";
  }
  return s.str();
}

double ModelManifold::injectivity_radius() const {
  if (auto* sp = std::get_if<Sphere>(&kind_)) return kPi * sp->radius;
  const auto& t = std::get<FlatTorus>(kind_);
  return *std::min_element(t.periods.begin(), t.periods.end()) / 2.0;
}

double ModelManifold::diameter() const {
  if (auto* sp = std::get_if<Sphere>(&kind_)) return kPi * sp->radius;
  double s = 0;
  for (double p : std::get<FlatTorus>(kind_).periods) s += p * p / 4.0;
  return std::sqrt(s);
}

double ModelManifold::volume() const {
  if (auto* sp = std::get_if<Sphere>(&kind_)) return surface_measure(N_ + 1) * std::pow(sp->radius, N_);
  double v = 1;
  for (double p : std::get<FlatTorus>(kind_).periods) v *= p;
  return v;
}

double ModelManifold::ball_volume(double r) const {
  require(r >= 0 && r <= injectivity_radius(), ErrorCode::OutOfChart, "ball radius beyond injectivity radius");
  const double omega = surface_measure(N_);
  if (!is_sphere()) return omega * std::pow(r, N_) / N_;
  const double rho = std::get<Sphere>(kind_).radius;
  std::vector<double> edges;
  for (int i = 0; i <= 64; ++i) edges.push_back(r * i / 64.0);
  auto shell = [&](double s) { return std::pow(rho * std::sin(s / rho), N_ - 1); };
  return omega * integrate_panels(shell, edges).value;
}

double ModelManifold::scal(const Point& xi) const {
  (void)canonical(xi);
  if (auto* sp = std::get_if<Sphere>(&kind_)) return N_ * (N_ - 1.0) / (sp->radius * sp->radius);
  return 0.0;
}

void ModelManifold::require_chart(double r) const {
  require(r >= 0.0 && r < injectivity_radius(), ErrorCode::OutOfChart,
          "radius " + std::to_string(r) + " outside the injectivity radius " + std::to_string(injectivity_radius()));
}

double ModelManifold::volume_density(const Point& xi, double r) const {
  (void)canonical(xi);
  require_chart(r);
  if (auto* sp = std::get_if<Sphere>(&kind_)) {
    if (r == 0.0) return 1.0;
    const double rho = sp->radius;
    return std::pow(rho * std::sin(r / rho) / r, N_ - 1);
  }
  return 1.0;
}

Point ModelManifold::canonical(const Point& xi) const {
  if (auto* sp = std::get_if<Sphere>(&kind_)) {
    require(xi.size() == N_ + 1, ErrorCode::InvalidArgument,
            "sphere points need " + std::to_string(N_ + 1) + " ambient coordinates");
    const double n = xi.norm();
    require(n > 0, ErrorCode::InvalidArgument, "zero vector is not a sphere point");
    return xi * (sp->radius / n);
  }
  const auto& t = std::get<FlatTorus>(kind_);
  require(xi.size() == N_, ErrorCode::InvalidArgument, "torus points need " + std::to_string(N_) + " coordinates");
  Point out(N_);
  for (int i = 0; i < N_; ++i) out[i] = wrap(xi[i], t.periods[i]);
  return out;
}

Point ModelManifold::base_point() const {
  if (is_sphere()) {
    Point e = Point::Zero(N_ + 1);
    e[N_] = std::get<Sphere>(kind_).radius;
    return e;
  }
  return Point::Zero(N_);
}

Point ModelManifold::random_point(std::mt19937_64& rng) const {
  if (is_sphere()) {
    std::normal_distribution<double> g;
    Point x(N_ + 1);
    for (int i = 0; i <= N_; ++i) x[i] = g(rng);
    return canonical(x);
  }
  const auto& t = std::get<FlatTorus>(kind_);
  Point x(N_);
  for (int i = 0; i < N_; ++i) x[i] = std::uniform_real_distribution<double>(0.0, t.periods[i])(rng);
  return x;
}

Eigen::MatrixXd ModelManifold::frame(const Point& xi) const {
  if (!is_sphere()) return Eigen::MatrixXd::Identity(N_, N_);
  const Point n = canonical(xi).normalized();
  // Gram-Schmidt on the standard basis, skipping the axis most aligned with n.
  Eigen::Index skip = 0;
  n.cwiseAbs().maxCoeff(&skip);
  Eigen::MatrixXd E(N_ + 1, N_);
  int col = 0;
  for (int i = 0; i <= N_; ++i) {
    if (i == skip) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(N_ + 1, i);
    v -= n.dot(v) * n;
    for (int j = 0; j < col; ++j) v -= E.col(j).dot(v) * E.col(j);
    E.col(col++) = v.normalized();
  }
  return E;
}

double ModelManifold::distance(const Point& xi, const Point& eta) const {
  const Point a = canonical(xi), b = canonical(eta);
  if (auto* sp = std::get_if<Sphere>(&kind_)) {
    const double rho = sp->radius;
    const double chord = std::min((a - b).norm() / (2 * rho), 1.0);
    return 2 * rho * std::asin(chord);
  }
  const auto& t = std::get<FlatTorus>(kind_);
  double s = 0;
  for (int i = 0; i < N_; ++i) {
    const double d = minimal_image(b[i] - a[i], t.periods[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

Point ModelManifold::exp(const Point& xi, const Tangent& v) const {
  require(v.size() == N_, ErrorCode::InvalidArgument, "tangent vector has wrong dimension");
  const double len = v.norm();
  require_chart(len);
  const Point a = canonical(xi);
  if (auto* sp = std::get_if<Sphere>(&kind_)) {
    if (len == 0.0) return a;
    const double rho = sp->radius;
    const Eigen::VectorXd dir = frame(a) * (v / len);
    return canonical(std::cos(len / rho) * a + rho * std::sin(len / rho) * dir);
  }
  return canonical(a + v);
}

Tangent ModelManifold::log(const Point& xi, const Point& eta) const {
  const Point a = canonical(xi), b = canonical(eta);
  if (auto* sp = std::get_if<Sphere>(&kind_)) {
    const double d = distance(a, b);
    require_chart(d);
    if (d == 0.0) return Tangent::Zero(N_);
    const double rho = sp->radius;
    const Eigen::MatrixXd E = frame(a);
    Eigen::VectorXd w = b - a.dot(b) / (rho * rho) * a;
    const Tangent coords = E.transpose() * w;
    return coords.normalized() * d;
  }
  const auto& t = std::get<FlatTorus>(kind_);
  Tangent v(N_);
  for (int i = 0; i < N_; ++i) v[i] = minimal_image(b[i] - a[i], t.periods[i]);
  require_chart(v.norm());
  return v;
}

double sphere_area_ratio_check(const ModelManifold& m, const Point& xi, const std::vector<double>& radii) {
  require(!radii.empty(), ErrorCode::InvalidArgument, "need at least one radius");
  const double bound = m.injectivity_radius() / 4.0;
  double num = 0, den = 0;
  for (double r : radii) {
    require(r > 0 && r < bound, ErrorCode::OutOfChart, "fit radii must lie in (0, inj/4)");
    const double ratio = m.volume_density(xi, r);
    num += r * r * (ratio - 1.0);
    den += r * r * r * r;
  }
  return num / den;
}

std::vector<double> default_area_radii(const ModelManifold& m, int count) {
  const double lo = m.injectivity_radius() / 400.0, hi = m.injectivity_radius() / 40.0;
  std::vector<double> r;
  for (int i = 0; i < count; ++i) r.push_back(lo + (hi - lo) * i / (count - 1));
  return r;
}

PeakConfiguration::PeakConfiguration(const ModelManifold& m, std::vector<Point> points, double r0, double rho2)
    : r0_(r0), rho2_(rho2), min_separation_(std::numeric_limits<double>::infinity()) {
  require(!points.empty(), ErrorCode::InvalidArgument, "peak configuration needs at least one point");
  require(r0 > 0 && r0 < m.injectivity_radius() / 2.0, ErrorCode::ChartViolation,
          "r0 must lie in (0, injectivity/2)");
  require(rho2 > 2.0 * r0, ErrorCode::InvalidArgument, "separation rho2 must exceed 2 r0");
  for (auto& p : points) p = m.canonical(p);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = m.distance(points[i], points[j]);
      min_separation_ = std::min(min_separation_, d);
      require(d >= rho2, ErrorCode::InvalidArgument,
              "peaks " + std::to_string(i) + " and " + std::to_string(j) + " are closer than rho2");
    }
  points_ = std::move(points);
}

}  // namespace lanemden
