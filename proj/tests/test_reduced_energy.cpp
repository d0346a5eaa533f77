#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lanemden/errors.hpp"
#include "lanemden/potential.hpp"
#include "lanemden/reduced_energy.hpp"
#include "oracles.hpp"

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

const BubbleConstants& consts() { return fixture::constants("1.5", 8); }

// h = 10 + sum_i a_i cos(x_i + phase_i) on the 2 pi torus; critical points sit
// where every x_i + phase_i is a multiple of pi.
TrigPotential cosine_potential(int N) {
  TrigPotential h;
  h.offset = 10.0;
  for (int i = 0; i < N; ++i) h.terms.push_back({i, 0.5 + 0.1 * i, 1, 0.3 * (i + 1)});
  return h;
}

double distance_to_extremum_grid(const Point& x, const TrigPotential& h) {
  double worst = 0.0;
  for (const auto& t : h.terms) {
    const double u = x[t.axis] + t.phase;
    const double n = std::round(u / M_PI);
    worst = std::max(worst, std::abs(u - n * M_PI));
  }
  return worst;
}

}  // namespace

TEST(Potential, EvaluatesEachFamily) {
  const auto torus = ModelManifold::torus(8, 2.0 * M_PI);
  const auto sphere = ModelManifold::sphere(8, 2.0);
  EXPECT_DOUBLE_EQ(evaluate(torus, ConstantPotential{3.0}, torus.base_point()), 3.0);
  const auto trig = cosine_potential(8);
  double expect = 10.0;
  for (const auto& t : trig.terms) expect += t.amplitude * std::cos(t.phase);
  EXPECT_NEAR(evaluate(torus, trig, torus.base_point()), expect, 1e-14);
  AmbientLinearPotential lin{1.0, Eigen::VectorXd::Unit(9, 8)};
  EXPECT_NEAR(evaluate(sphere, lin, sphere.base_point()), 2.0, 1e-14);
  RadialPotential rad{1.0, {{torus.base_point(), 2.0, 1.0}}};
  Point x = torus.base_point();
  x[0] = 0.5;
  EXPECT_NEAR(evaluate(torus, rad, x), 1.0 + 2.0 * std::pow(0.75, 3), 1e-14);
}

TEST(Potential, RejectsFamiliesOnTheWrongManifold) {
  const auto torus = ModelManifold::torus(8, 2.0 * M_PI);
  const auto sphere = ModelManifold::sphere(8, 1.0);
  EXPECT_THROW(validate_potential(sphere, cosine_potential(8)), Error);
  EXPECT_THROW(validate_potential(torus, AmbientLinearPotential{0.0, Eigen::VectorXd::Unit(9, 0)}), Error);
}

TEST(Potential, GradientsAgreeWithFiniteDifferences) {
  const auto torus = ModelManifold::torus(8, 2.0 * M_PI);
  const auto trig = cosine_potential(8);
  Point x = Point::Constant(8, 0.7);
  const Tangent g = gradient(torus, trig, x);
  for (int i = 0; i < 8; ++i) {
    Tangent v = Tangent::Zero(8);
    v[i] = 1e-6;
    const double fd =
        (evaluate(torus, trig, torus.exp(x, v)) - evaluate(torus, trig, torus.exp(x, -v))) / 2e-6;
    EXPECT_NEAR(g[i], fd, 1e-8);
  }
  EXPECT_TRUE(has_closed_form_gradient(trig));
  EXPECT_FALSE(has_closed_form_gradient(RadialPotential{}));
}

TEST(Potential, RadialProfileOnlyForRadialFields) {
  const auto torus = ModelManifold::torus(8, 2.0 * M_PI);
  EXPECT_TRUE(radial_profile(torus, ConstantPotential{1.0}, torus.base_point(), 0.5));
  EXPECT_FALSE(radial_profile(torus, cosine_potential(8), torus.base_point(), 0.5));
  RadialPotential rad{0.0, {{torus.base_point(), 1.0, 1.0}}};
  const auto f = radial_profile(torus, rad, torus.base_point(), 0.5);
  ASSERT_TRUE(f);
  EXPECT_NEAR((*f)(0.5), std::pow(0.75, 3), 1e-14);
}

TEST(Phi, SubtractsScaledCurvature) {
  const auto s = ModelManifold::sphere(8, 1.0);
  const double v = phi(s, ConstantPotential{20.0}, consts(), s.base_point());
  EXPECT_NEAR(v, 20.0 - phi_coefficient(consts()) * 56.0, 1e-12);
}

TEST(OptimalScale, MatchesOneDimensionalMinimiser) {
  const auto& c = consts();
  const double ct = c_tilde(c, 1.0, 1.0);
  for (double ph : {0.3, 8.0, 120.0}) {
    const double t0 = optimal_t(c, 1.0, 1.0, ph);
    const double B = c.L3.value * ph;
    const double newton = oracle::newton_scale(ct, B, 0.5 * t0);
    EXPECT_LE(std::abs(newton - t0) / t0, 1e-10) << ph;
    const double brent =
        oracle::minimize_1d([&](double t) { return -ct * std::log(t) + B * t; }, 1e-3 * t0, 1e3 * t0);
    EXPECT_LE(std::abs(brent - t0) / t0, 1e-5) << ph;  // value-based search: sqrt(eps) resolution
  }
  EXPECT_EQ(code_of([&] { optimal_t(c, 1.0, 1.0, 0.0); }), ErrorCode::NonpositivePhi);
}

TEST(PsiK, IsSeparableAcrossPeaks) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  const auto h = cosine_potential(8);
  Point a = Point::Constant(8, 0.2), b = Point::Constant(8, 3.0);
  const double two = psi_k(m, h, consts(), 1.0, 2.0, {0.01, 0.03}, {a, b});
  const double one = psi_k(m, h, consts(), 1.0, 2.0, {0.01}, {a}) + psi_k(m, h, consts(), 1.0, 2.0, {0.03}, {b});
  EXPECT_NEAR(two, one, 1e-12 * std::abs(two));
}

TEST(PsiK, GradientMatchesFiniteDifferences) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  const auto h = cosine_potential(8);
  const Point x = Point::Constant(8, 0.4);
  const double t = 0.02;
  const auto g = psi_k_gradient(m, h, consts(), 1.0, 1.0, {t}, {x});
  const double dt = 1e-7;
  const double fd = (psi_k(m, h, consts(), 1.0, 1.0, {t + dt}, {x}) - psi_k(m, h, consts(), 1.0, 1.0, {t - dt}, {x})) /
                    (2 * dt);
  EXPECT_NEAR(g.dt[0], fd, 1e-6 * std::abs(fd) + 1e-3);
  for (int i = 0; i < 8; ++i) {
    Tangent v = Tangent::Zero(8);
    v[i] = 1e-6;
    const double f = (psi_k(m, h, consts(), 1.0, 1.0, {t}, {m.exp(x, v)}) -
                      psi_k(m, h, consts(), 1.0, 1.0, {t}, {m.exp(x, -v)})) /
                     2e-6;
    EXPECT_NEAR(g.dxi[0][i], f, 1e-5 * std::abs(f) + 1e-2);
  }
}

TEST(CriticalPoints, TorusCosineExtremaAreRecovered) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  const auto h = cosine_potential(8);
  const auto pts = find_critical_points(m, h, consts(), 1, 1.0, 1.0);
  ASSERT_FALSE(pts.empty());
  for (const auto& p : pts) {
    EXPECT_LE(distance_to_extremum_grid(p.xi[0], h), 1e-6);
    EXPECT_GT(p.phi[0], 0.0);
    EXPECT_NEAR(p.t[0], optimal_t(consts(), 1.0, 1.0, p.phi[0]), 1e-8 * p.t[0]);
    EXPECT_LE(p.gradient_norm, 1e-10);
    EXPECT_FALSE(p.degenerate);
  }
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LE(pts[i - 1].value, pts[i].value);
}

TEST(CriticalPoints, MorseIndexMatchesTheCosineSigns) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  const auto h = cosine_potential(8);
  const auto pts = find_critical_points(m, h, consts(), 1, 1.0, 1.0);
  ASSERT_FALSE(pts.empty());
  for (const auto& p : pts) {
    // Psi_1 is convex in log t; along axis i it curves like -a_i cos(x_i + phase_i).
    int maxima = 0;
    for (const auto& t : h.terms) maxima += std::cos(p.xi[0][t.axis] + t.phase) > 0.0;
    EXPECT_EQ(p.negative_eigs, maxima);
  }
}

TEST(CriticalPoints, ResultsAreDeterministic) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  const auto h = cosine_potential(8);
  SearchOptions o;
  o.starts = 16;
  const auto a = find_critical_points(m, h, consts(), 1, 1.0, 1.0, o);
  const auto b = find_critical_points(m, h, consts(), 1, 1.0, 1.0, o);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].t, b[i].t);
    EXPECT_EQ(a[i].xi[0], b[i].xi[0]);
  }
}

TEST(CriticalPoints, SeparationThatCannotBeMetIsReported) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  SearchOptions o;
  o.rho2 = 6.0;
  EXPECT_EQ(code_of([&] { find_critical_points(m, cosine_potential(8), consts(), 500, 1.0, 1.0, o); }),
            ErrorCode::SeparationUnsatisfiable);
  o.rho2 = 1.0;
  EXPECT_EQ(code_of([&] { find_critical_points(m, cosine_potential(8), consts(), 2, 1.0, 1.0, o); }),
            ErrorCode::InvalidArgument);
}

TEST(CriticalPoints, NegativePhiEverywhereFindsNothing) {
  const auto s = ModelManifold::sphere(8, 1.0);
  SearchOptions o;
  o.starts = 8;
  EXPECT_EQ(code_of([&] { find_critical_points(s, ConstantPotential{1.0}, consts(), 1, 1.0, 1.0, o); }),
            ErrorCode::NoCriticalPointFound);
}
