#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lanemden/errors.hpp"
#include "lanemden/expansion.hpp"
#include "lanemden/kernel.hpp"
#include "lanemden/reduced_energy.hpp"

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

const GroundState& gs() { return fixture::ground_state("1.5", 8); }
const BubbleConstants& consts() { return fixture::constants("1.5", 8); }

ModelManifold torus() { return ModelManifold::torus(8, 2.0 * M_PI); }
ModelManifold sphere() { return ModelManifold::sphere(8, 1.0); }

constexpr double kR0 = M_PI / 4.0;

double t_opt(const ModelManifold& m, const PotentialSpec& h, const Point& x) {
  return optimal_t(consts(), 1.0, 1.0, phi(m, h, consts(), x));
}

}  // namespace

TEST(Cutoff, PlateauSupportAndSmoothness) {
  const double r0 = 0.8;
  EXPECT_DOUBLE_EQ(cutoff(0.0, r0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff(0.4, r0), 1.0);
  EXPECT_DOUBLE_EQ(cutoff(0.8, r0), 0.0);
  EXPECT_DOUBLE_EQ(cutoff(5.0, r0), 0.0);
  EXPECT_DOUBLE_EQ(cutoff(0.6, r0), 0.5);
  EXPECT_DOUBLE_EQ(cutoff_derivative(0.4, r0), 0.0);
  EXPECT_DOUBLE_EQ(cutoff_derivative(0.8, r0), 0.0);
  for (double r = 0.41; r < 0.8; r += 0.01) {
    const double fd = (cutoff(r + 1e-6, r0) - cutoff(r - 1e-6, r0)) / 2e-6;
    EXPECT_NEAR(cutoff_derivative(r, r0), fd, 1e-6);
    EXPECT_LE(cutoff_derivative(r, r0), 0.0);
  }
  // Second derivative vanishes at both ends of the ramp.
  const double h = 1e-6;
  EXPECT_NEAR((cutoff_derivative(0.4 + h, r0) - cutoff_derivative(0.4, r0)) / h, 0.0, 1e-2);
  EXPECT_NEAR((cutoff_derivative(0.8, r0) - cutoff_derivative(0.8 - h, r0)) / h, 0.0, 1e-2);
}

TEST(Bubble, ValuesAtCentrePlateauAndSupport) {
  const auto m = torus();
  const double d = 0.01;
  const auto b = assemble_bubble(m, gs(), d, m.base_point(), kR0);
  const int N = 8;
  EXPECT_NEAR(b.W(0.0), std::pow(d, -N / (gs().q() + 1)) * gs().normalization().U_at_zero, 1e-12 * b.W(0.0));
  EXPECT_NEAR(b.H(0.0), std::pow(d, -N / (gs().p() + 1)), 1e-12 * b.H(0.0));
  EXPECT_EQ(b.W(kR0), 0.0);
  EXPECT_EQ(b.H(2.0 * kR0), 0.0);
  const double r = 0.5 * kR0 * (1 - 1e-12);
  EXPECT_NEAR(b.H(r), std::pow(d, -N / (gs().p() + 1)) * gs().eval(r / d).V, 1e-14 * b.H(0.0));
}

TEST(Bubble, AssemblyValidatesScaleAndChart) {
  const auto m = torus();
  EXPECT_EQ(code_of([&] { assemble_bubble(m, gs(), 0.0, m.base_point(), kR0); }), ErrorCode::NonpositiveScale);
  EXPECT_EQ(code_of([&] { assemble_bubble(m, gs(), 0.01, m.base_point(), 2.0); }), ErrorCode::ChartViolation);
}

TEST(EnergyTerms, GradientTermApproachesL1OnTheTorus) {
  const auto m = torus();
  const auto b = assemble_bubble(m, gs(), 1e-3, m.base_point(), kR0);
  const auto e = bubble_energy(m, ConstantPotential{0.0}, b, 0.0, 1.0, 1.0);
  EXPECT_LE(std::abs(e.grad_term - consts().L1.value) / consts().L1.value, 1e-6);
  EXPECT_EQ(e.h_term, 0.0);
  EXPECT_LE(std::abs(e.p_term - consts().L1.value / (gs().p() + 1)) / e.p_term, 1e-6);
}

TEST(EnergyTerms, DisjointSupportsAddExactly) {
  const auto m = torus();
  Point a = m.base_point(), c = m.base_point();
  c[0] = M_PI;
  const ConstantPotential h{8.0};
  const auto b1 = assemble_bubble(m, gs(), 0.004, a, kR0);
  const auto b2 = assemble_bubble(m, gs(), 0.006, c, kR0);
  const auto both = energy_terms(m, h, {b1, b2}, 1e-5, 1.0, 1.0);
  auto sum = energy_terms(m, h, {b1}, 1e-5, 1.0, 1.0);
  sum += energy_terms(m, h, {b2}, 1e-5, 1.0, 1.0);
  EXPECT_EQ(both.grad_term, sum.grad_term);
  EXPECT_EQ(both.h_term, sum.h_term);
  EXPECT_EQ(both.p_term, sum.p_term);
  EXPECT_EQ(both.q_term, sum.q_term);
}

TEST(EnergyTerms, OverlapAndNonRadialPotentialAreRejected) {
  const auto m = torus();
  Point c = m.base_point();
  c[0] = 1.0;
  const auto b1 = assemble_bubble(m, gs(), 0.004, m.base_point(), kR0);
  const auto b2 = assemble_bubble(m, gs(), 0.004, c, kR0);
  EXPECT_EQ(code_of([&] { energy_terms(m, ConstantPotential{1.0}, {b1, b2}, 0.0, 1.0, 1.0); }),
            ErrorCode::OverlappingSupports);
  TrigPotential trig{1.0, {{0, 0.5, 1, 0.0}}};
  EXPECT_EQ(code_of([&] { bubble_energy(m, trig, b1, 0.0, 1.0, 1.0); }), ErrorCode::NonRadialPotential);
}

TEST(EnergyTerms, RefinementDoesNotMoveTheValue) {
  const auto m = sphere();
  const auto b = assemble_bubble(m, gs(), 0.002, m.base_point(), kR0);
  const auto e = bubble_energy(m, ConstantPotential{20.0}, b, 1e-5, 1.0, 1.0);
  EXPECT_LT(e.error, 1e-9 * std::abs(e.J()));
}

TEST(DeltaSweep, SecondOrderCoefficientsOnTheUnitSphere) {
  const auto m = sphere();
  const double h0 = 20.0;
  const auto ds = delta_sweep(m, ConstantPotential{h0}, gs(), m.base_point(), kR0, geometric_grid(1e-3, 5e-3, 6));
  const double grad_target = -consts().L2.value * 56.0 / 48.0;
  EXPECT_LE(std::abs(ds.grad.c2 - grad_target) / std::abs(grad_target), 0.05);
  EXPECT_LE(std::abs(ds.h.c2 - consts().L3.value * h0) / (consts().L3.value * h0), 0.05);
  EXPECT_LE(std::abs(ds.grad.c0 - consts().L1.value) / consts().L1.value, 1e-5);
}

TEST(DeltaSweep, FlatTorusHasNoCurvatureCorrection) {
  const auto m = torus();
  const auto ds = delta_sweep(m, ConstantPotential{1.0}, gs(), m.base_point(), kR0, geometric_grid(1e-3, 5e-3, 6));
  EXPECT_LE(std::abs(ds.grad.c2), 0.05 * consts().L2.value / 48.0);
}

struct Case {
  bool on_sphere;
  double h0;
};

class HeadlineExpansion : public ::testing::TestWithParam<Case> {};

TEST_P(HeadlineExpansion, FittedCoefficientsMatchPredictions) {
  const auto [on_sphere, h0] = GetParam();
  const auto m = on_sphere ? sphere() : torus();
  const ConstantPotential h{h0};
  const Point x = m.base_point();
  const auto f = sweep_and_fit(m, h, gs(), consts(), {t_opt(m, h, x)}, {x}, 1.0, 1.0, default_epsilon_grid(), kR0);
  EXPECT_LE(std::abs(f.a - 2.0 * consts().L1.value / 8.0) / f.a, 1e-3);
  EXPECT_LE(std::abs(f.c + c1_c2(consts(), 1.0, 1.0, 1).c2) / c1_c2(consts(), 1.0, 1.0, 1).c2, 0.05);
  EXPECT_LE(f.b_error, 0.05);
  EXPECT_LE(f.condition, 1e10);
}

INSTANTIATE_TEST_SUITE_P(Manifolds, HeadlineExpansion, ::testing::Values(Case{false, 8.0}, Case{true, 20.0}));

TEST(HeadlineExpansion, TwoPeaksAddUp) {
  const auto m = torus();
  const ConstantPotential h{8.0};
  Point a = m.base_point(), c = m.base_point();
  c[0] = M_PI;
  const double ta = t_opt(m, h, a), tc = 1.3 * t_opt(m, h, c);
  const auto eps = default_epsilon_grid();
  const auto two = sweep_and_fit(m, h, gs(), consts(), {ta, tc}, {a, c}, 1.0, 1.0, eps, kR0);
  const auto fa = sweep_and_fit(m, h, gs(), consts(), {ta}, {a}, 1.0, 1.0, eps, kR0);
  const auto fc = sweep_and_fit(m, h, gs(), consts(), {tc}, {c}, 1.0, 1.0, eps, kR0);
  EXPECT_NEAR(two.a, fa.a + fc.a, 1e-12 * two.a);
  EXPECT_NEAR(two.c, fa.c + fc.c, 1e-9 * std::abs(two.c));
  EXPECT_NEAR(two.b, fa.b + fc.b, 1e-9 * std::abs(two.b));
  EXPECT_NEAR(two.b_predicted, fa.b_predicted + fc.b_predicted, 1e-12 * std::abs(two.b_predicted));
  EXPECT_NEAR(two.a_predicted, 2.0 * fa.a_predicted, 1e-12 * two.a_predicted);
  EXPECT_LE(two.a_error, 1e-3);
  EXPECT_LE(two.c_error, 0.05);
}

TEST(HeadlineExpansion, GaugeChoiceDoesNotChangeTheFit) {
  const auto m = torus();
  const ConstantPotential h{8.0};
  const Point x = m.base_point();
  const auto eps = default_epsilon_grid();
  const auto g2 = rescale(gs(), 2.0);
  const auto c2 = compute_constants(g2);
  const double t2 = optimal_t(c2, 1.0, 1.0, phi(m, h, c2, x));
  const auto base = sweep_and_fit(m, h, gs(), consts(), {t_opt(m, h, x)}, {x}, 1.0, 1.0, eps, kR0);
  const auto moved = sweep_and_fit(m, h, g2, c2, {t2}, {x}, 1.0, 1.0, eps, kR0);
  EXPECT_LE(std::abs(moved.a - base.a) / base.a, 1e-6);
  EXPECT_LE(std::abs(moved.c - base.c) / std::abs(base.c), 1e-6);
  EXPECT_LE(std::abs(moved.b_predicted - base.b_predicted) / std::abs(base.b_predicted), 1e-6);
  EXPECT_THROW(sweep_and_fit(m, h, g2, consts(), {t2}, {x}, 1.0, 1.0, eps, kR0), Error);
}

TEST(HeadlineExpansion, GridValidation) {
  const auto m = torus();
  const ConstantPotential h{8.0};
  const Point x = m.base_point();
  const double t = t_opt(m, h, x);
  auto run = [&](std::vector<double> eps) {
    return code_of([&] { sweep_and_fit(m, h, gs(), consts(), {t}, {x}, 1.0, 1.0, eps, kR0); });
  };
  EXPECT_EQ(run(geometric_grid(1e-4, 1e-6, 5)), ErrorCode::InvalidArgument);
  EXPECT_EQ(run(geometric_grid(1e-4, 2e-6, 8)), ErrorCode::InvalidArgument);
  EXPECT_EQ(run(geometric_grid(1e-6, 1e-4, 8)), ErrorCode::InvalidArgument);
  EXPECT_EQ(run(geometric_grid(1e-1, 1e-3, 8)), ErrorCode::InvalidArgument);
  EXPECT_EQ(run(geometric_grid(1e-10, 1e-12, 8)), ErrorCode::IllConditionedFit);
}

class Kernel : public ::testing::TestWithParam<std::pair<const char*, int>> {};

TEST_P(Kernel, DilationAndTranslationSolveTheLinearisedSystem) {
  const auto [p, N] = GetParam();
  const auto k = kernel_residual(fixture::ground_state(p, N));
  EXPECT_LE(k.dilation.worst(), 1e-5);
  EXPECT_LE(k.translation.worst(), 1e-5);
  EXPECT_GE(k.control.worst(), 1e-1);
  EXPECT_NEAR(k.dilation.r_hi, 0.8 * fixture::ground_state(p, N).r_max(), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Regimes, Kernel,
                         ::testing::Values(std::make_pair("5/3", 8), std::make_pair("1.5", 8),
                                           std::make_pair("1.5", 10), std::make_pair("1.1", 12)));

TEST(Kernel, WrongModeIsDetected) {
  // The translation pair does not satisfy the mode-0 equation.
  EXPECT_GE(linearized_residual(gs(), translation_pair(gs()), 0).worst(), 1e-1);
  EXPECT_THROW(linearized_residual(gs(), dilation_pair(gs()), 2), Error);
  RadialPair short_pair{{1.0}, {1.0}, {0.0}, {0.0}};
  EXPECT_THROW(linearized_residual(gs(), short_pair, 0), Error);
}

TEST(Kernel, ControlDependsOnSeed) {
  const auto a = random_pair(gs(), 1), b = random_pair(gs(), 2);
  EXPECT_NE(a.psi, b.psi);
  EXPECT_EQ(random_pair(gs(), 1).psi, a.psi);
}
