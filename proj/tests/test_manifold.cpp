#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lanemden/errors.hpp"
#include "lanemden/manifold.hpp"

using namespace lanemden;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Sphere, ScalarCurvatureAndInjectivity) {
  const auto s1 = ModelManifold::sphere(8, 1.0);
  const auto s2 = ModelManifold::sphere(8, 2.0);
  EXPECT_DOUBLE_EQ(s1.scal(s1.base_point()), 56.0);
  EXPECT_DOUBLE_EQ(s2.scal(s2.base_point()), 14.0);
  EXPECT_DOUBLE_EQ(s1.injectivity_radius(), M_PI);
  EXPECT_DOUBLE_EQ(s2.diameter(), 2.0 * M_PI);
}

TEST(Sphere, VolumeDensityIsSinRatio) {
  const auto m = ModelManifold::sphere(8, 2.0);
  for (double r : {0.1, 1.0, 3.0})
    EXPECT_NEAR(m.volume_density(m.base_point(), r), std::pow(std::sin(r / 2.0) / (r / 2.0), 7), 1e-14);
  EXPECT_DOUBLE_EQ(m.volume_density(m.base_point(), 0.0), 1.0);
  EXPECT_EQ(code_of([&] { m.volume_density(m.base_point(), 7.0); }), ErrorCode::OutOfChart);
}

TEST(Sphere, ExpAndLogAreInverse) {
  const auto m = ModelManifold::sphere(5, 1.5);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Point a = m.random_point(rng), b = m.random_point(rng);
    if (m.distance(a, b) > 0.9 * m.injectivity_radius()) continue;
    const Tangent v = m.log(a, b);
    EXPECT_NEAR(v.norm(), m.distance(a, b), 1e-12);
    EXPECT_LE((m.exp(a, v) - b).norm(), 1e-11);
  }
}

TEST(Sphere, FrameIsOrthonormalAndTangent) {
  const auto m = ModelManifold::sphere(6, 1.0);
  std::mt19937_64 rng(11);
  const Point x = m.random_point(rng);
  const Eigen::MatrixXd F = m.frame(x);
  EXPECT_LE((F.transpose() * F - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-13);
  EXPECT_LE((F.transpose() * x).norm(), 1e-13);
}

TEST(Sphere, BallVolumeExhaustsTheSphere) {
  const auto m = ModelManifold::sphere(4, 1.0);
  EXPECT_NEAR(m.ball_volume(M_PI), m.volume(), 1e-10 * m.volume());
  EXPECT_NEAR(m.volume(), 8.0 * M_PI * M_PI / 3.0, 1e-12);
}

TEST(Torus, FlatGeometry) {
  const auto m = ModelManifold::torus(std::vector<double>{2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m.injectivity_radius(), 1.0);
  EXPECT_DOUBLE_EQ(m.scal(m.base_point()), 0.0);
  EXPECT_DOUBLE_EQ(m.volume(), 24.0);
  EXPECT_DOUBLE_EQ(m.volume_density(m.base_point(), 0.9), 1.0);
  Point a(3), b(3);
  a << 0.1, 0.1, 0.1;
  b << 1.9, 2.9, 3.9;
  EXPECT_NEAR(m.distance(a, b), std::sqrt(0.04 * 3), 1e-14);
  const Point c = m.canonical(Point::Constant(3, -0.5));
  EXPECT_NEAR(c[0], 1.5, 1e-15);
  EXPECT_NEAR(c[2], 3.5, 1e-15);
}

TEST(Torus, WrongPointSizeIsRejected) {
  const auto m = ModelManifold::torus(3, 1.0);
  EXPECT_EQ(code_of([&] { m.canonical(Point::Zero(4)); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ModelManifold::torus(std::vector<double>{1.0, -1.0}); }), ErrorCode::InvalidArgument);
}

class AreaRatio : public ::testing::TestWithParam<double> {};

TEST_P(AreaRatio, CurvatureCoefficientOnSpheres) {
  const double R = GetParam();
  const auto m = ModelManifold::sphere(8, R);
  const Point xi = m.base_point();
  const double kappa = sphere_area_ratio_check(m, xi, default_area_radii(m));
  const double target = -m.scal(xi) / (6.0 * m.N());
  EXPECT_LE(std::abs(kappa - target) / std::abs(target), 1e-2);
}

INSTANTIATE_TEST_SUITE_P(Radii, AreaRatio, ::testing::Values(1.0, 2.0));

TEST(AreaRatio, VanishesOnTheTorus) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  EXPECT_LE(std::abs(sphere_area_ratio_check(m, m.base_point(), default_area_radii(m))), 1e-12);
}

TEST(AreaRatio, RadiiMustStayInsideTheChart) {
  const auto m = ModelManifold::sphere(8, 1.0);
  EXPECT_EQ(code_of([&] { sphere_area_ratio_check(m, m.base_point(), {2.0}); }), ErrorCode::OutOfChart);
}

TEST(PeakConfiguration, EnforcesChartAndSeparation) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  Point a = m.base_point(), b = m.base_point();
  b[0] = M_PI;
  EXPECT_NO_THROW(PeakConfiguration(m, {a, b}, M_PI / 4, 1.6));
  EXPECT_EQ(code_of([&] { PeakConfiguration(m, {a, b}, 1.6, 3.3); }), ErrorCode::ChartViolation);
  EXPECT_EQ(code_of([&] { PeakConfiguration(m, {a, b}, M_PI / 4, 1.5); }), ErrorCode::InvalidArgument);
  b[0] = 1.0;
  EXPECT_EQ(code_of([&] { PeakConfiguration(m, {a, b}, M_PI / 4, 1.6); }), ErrorCode::InvalidArgument);
}
