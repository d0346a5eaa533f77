#pragma once

#include <Eigen/Core>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace lanemden {

// Points are ambient unit-radius-scaled vectors in R^{N+1} on the sphere and
// coordinate vectors in [0, P_i) on the torus.
using Point = Eigen::VectorXd;
// Tangent vectors are expressed in the orthonormal frame returned by
// ModelManifold::frame, i.e. normal coordinates centred at the base point.
using Tangent = Eigen::VectorXd;

struct Sphere {
  double radius = 1.0;
};

struct FlatTorus {
  std::vector<double> periods;
};

class ModelManifold {
 public:
  static ModelManifold sphere(int N, double radius);
  static ModelManifold torus(std::vector<double> periods);
  static ModelManifold torus(int N, double period);

  int N() const noexcept { return N_; }
  bool is_sphere() const noexcept { return std::holds_alternative<Sphere>(kind_); }
  const std::variant<Sphere, FlatTorus>& kind() const noexcept { return kind_; }
  std::string describe() const;

  double injectivity_radius() const;
  double diameter() const;
  double volume() const;
  // Volume of the geodesic ball of radius r < injectivity radius.
  double ball_volume(double r) const;

  double scal(const Point& xi) const;
  double volume_density(const Point& xi, double r) const;

  double distance(const Point& xi, const Point& eta) const;
  Point exp(const Point& xi, const Tangent& v) const;
  Tangent log(const Point& xi, const Point& eta) const;

  // Orthonormal tangent frame at xi as ambient column vectors.
  Eigen::MatrixXd frame(const Point& xi) const;

  // Brings a point to its canonical representative (unit sphere radius,
  // torus coordinates reduced modulo the periods). Throws on wrong size.
  Point canonical(const Point& xi) const;
  Point base_point() const;
  Point random_point(std::mt19937_64& rng) const;

 private:
  ModelManifold(int N, std::variant<Sphere, FlatTorus> kind) : N_(N), kind_(std::move(kind)) {}
  void require_chart(double r) const;

  int N_ = 0;
  std::variant<Sphere, FlatTorus> kind_;
};

// Least-squares fit of volume_density(r) = 1 + kappa r^2 through the origin.
double sphere_area_ratio_check(const ModelManifold& m, const Point& xi, const std::vector<double>& radii);
// Radii in [inj/400, inj/40], the default sampling for the fit above.
std::vector<double> default_area_radii(const ModelManifold& m, int count = 24);

inline double default_r0(const ModelManifold& m) { return m.injectivity_radius() / 4.0; }

class PeakConfiguration {
 public:
  // Validates r0 < inj/2, rho2 > 2 r0 and pairwise distances >= rho2.
  PeakConfiguration(const ModelManifold& m, std::vector<Point> points, double r0, double rho2);

  const std::vector<Point>& points() const noexcept { return points_; }
  double r0() const noexcept { return r0_; }
  double rho2() const noexcept { return rho2_; }
  double min_separation() const noexcept { return min_separation_; }

 private:
  std::vector<Point> points_;
  double r0_;
  double rho2_;
  double min_separation_;
};

}  // namespace lanemden
