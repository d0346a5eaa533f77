#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "lanemden/errors.hpp"
#include "lanemden/ground_state.hpp"
#include "lanemden/ground_state_io.hpp"
#include "oracles.hpp"

using namespace lanemden;

namespace {

HyperbolaPoint point(const char* p, int N) { return make_hyperbola_point(Exponent::parse(p), N); }

double closed_form_deviation(const GroundState& gs, double r_hi) {
  const int N = gs.N();
  double worst = 0.0;
  for (std::size_t i = 0; i < gs.grid().size() && gs.grid()[i] <= r_hi; ++i) {
    const double w = oracle::aubin_talenti(gs.grid()[i], N);
    worst = std::max({worst, std::abs(gs.U()[i] - w) / w, std::abs(gs.V()[i] - w) / w});
  }
  // Off-node values through the interpolant.
  for (double r = 0.0137; r <= r_hi; r *= 1.0371) {
    const auto s = gs.eval(r);
    const double w = oracle::aubin_talenti(r, N);
    worst = std::max({worst, std::abs(s.U - w) / w, std::abs(s.V - w) / w});
  }
  return worst;
}

}  // namespace

TEST(Shooting, ClassifiesBothSidesOfTheBracket) {
  const auto hp = point("1.5", 8);
  EXPECT_TRUE(shoot(hp, 0.5).below());
  EXPECT_FALSE(shoot(hp, 2.0).below());
  EXPECT_EQ(shoot(hp, 0.5).classification, ShootingClass::CrossesZero);
  EXPECT_EQ(shoot(hp, 0.5).component, 'U');
}

TEST(Shooting, RejectsNonPositiveParameter) {
  EXPECT_THROW(shoot(point("1.5", 8), 0.0), Error);
}

class ScalarOracle : public ::testing::TestWithParam<int> {};

TEST_P(ScalarOracle, MatchesClosedFormBubble) {
  const int N = GetParam();
  const std::string p = std::to_string(N + 2) + "/" + std::to_string(N - 2);
  const auto start = std::chrono::steady_clock::now();
  const auto gs = solve_ground_state(point(p.c_str(), N));
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
  EXPECT_LE(closed_form_deviation(gs, 50.0), 1e-6);
  EXPECT_NEAR(gs.normalization().U_at_zero, 1.0, 1e-10);
  EXPECT_DOUBLE_EQ(gs.normalization().V_at_zero, 1.0);
}

INSTANTIATE_TEST_SUITE_P(Dimensions, ScalarOracle, ::testing::Values(8, 10));

struct DecayCase {
  const char* p;
  int N;
};

class Decay : public ::testing::TestWithParam<DecayCase> {};

TEST_P(Decay, TailSlopesMatchPredictedRates) {
  const auto [p, N] = GetParam();
  const auto& gs = fixture::ground_state(p, N);
  const auto rates = decay_rates(Exponent::parse(p), N);
  const auto& t = gs.tail_fit();
  EXPECT_TRUE(t.passed());
  EXPECT_LE(t.worst_deviation(), 0.02);
  EXPECT_LE(std::abs(t.V.measured - rates.v_rate), 0.02 * std::abs(rates.v_rate));
  EXPECT_LE(std::abs(t.U.measured - rates.u_rate), 0.02 * std::abs(rates.u_rate));
  EXPECT_LE(std::abs(t.dV.measured - rates.dv_rate), 0.02 * std::abs(rates.dv_rate));
  EXPECT_LE(std::abs(t.dU.measured - rates.du_rate), 0.02 * std::abs(rates.du_rate));
}

TEST_P(Decay, ProfileIsPositiveDecreasingAndSolvesTheSystem) {
  const auto [p, N] = GetParam();
  const auto& gs = fixture::ground_state(p, N);
  EXPECT_DOUBLE_EQ(gs.V()[0], 1.0);
  for (std::size_t i = 1; i < gs.grid().size(); ++i) {
    ASSERT_GT(gs.U()[i], 0.0);
    ASSERT_GT(gs.V()[i], 0.0);
    ASSERT_LT(gs.dU()[i], 0.0);
    ASSERT_LT(gs.dV()[i], 0.0);
  }
  EXPECT_LE(profile_residual(gs), 1e-8);
  EXPECT_LE(gs.diagnostics().a_error, 1e-9 * gs.normalization().U_at_zero);
}

INSTANTIATE_TEST_SUITE_P(Regimes, Decay,
                         ::testing::Values(DecayCase{"1.5", 8}, DecayCase{"1.5", 10}, DecayCase{"1.1", 12}));

TEST(GroundState, UnsupportedRegimeIsRejected) {
  try {
    solve_ground_state(point("4/3", 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedRegime);
  }
}

TEST(GroundState, DecayWindowMustBeLongEnough) {
  const auto& gs = fixture::ground_state("1.5", 8);
  try {
    validate_decay(gs, 999.0, 999.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowTooShort);
  }
  EXPECT_THROW(validate_decay(gs, 10.0, 900.0), Error);
  EXPECT_TRUE(validate_decay(gs, 500.0, 1000.0).passed());
}

TEST(GroundState, ContinuationBeyondTheGridFollowsThePowerLaw) {
  const auto& gs = fixture::ground_state("1.5", 8);
  const auto a = gs.eval(gs.r_max());
  const auto b = gs.eval(2.0 * gs.r_max());
  EXPECT_NEAR(std::log(b.V / a.V) / std::log(2.0), -6.0, 0.02 * 6.0);
}

TEST(GroundState, RescaleFollowsTheDilationLaw) {
  const auto& gs = fixture::ground_state("1.5", 8);
  const double delta = 2.0;
  const auto g2 = rescale(gs, delta);
  const int N = gs.N();
  for (double r : {0.0, 0.3, 1.7, 12.0, 140.0}) {
    const auto a = g2.eval(delta * r);
    const auto b = gs.eval(r);
    EXPECT_NEAR(a.U, std::pow(delta, -N / (gs.q() + 1)) * b.U, 1e-13 * std::abs(b.U) + 1e-300);
    EXPECT_NEAR(a.V, std::pow(delta, -N / (gs.p() + 1)) * b.V, 1e-13 * std::abs(b.V) + 1e-300);
  }
  EXPECT_DOUBLE_EQ(g2.normalization().gauge_delta, 2.0);
  EXPECT_THROW(rescale(gs, 0.0), Error);
}

TEST(GroundState, HalfRadiusBracketsHalfHeight) {
  const auto& gs = fixture::ground_state("5/3", 8);
  const double r = gs.half_radius();
  EXPECT_NEAR(gs.eval(r).V, 0.5, 1e-6);
}

TEST(GroundStateIO, RoundTripIsExact) {
  const auto& gs = fixture::ground_state("1.5", 8);
  std::stringstream ss;
  write_ground_state(ss, gs);
  const auto back = read_ground_state(ss);
  EXPECT_EQ(back.grid(), gs.grid());
  EXPECT_EQ(back.U(), gs.U());
  EXPECT_EQ(back.V(), gs.V());
  EXPECT_EQ(back.dU(), gs.dU());
  EXPECT_EQ(back.dV(), gs.dV());
  EXPECT_EQ(back.hyperbola().p.str(), gs.hyperbola().p.str());
  EXPECT_EQ(back.diagnostics().bisection_iterations, gs.diagnostics().bisection_iterations);
}

TEST(GroundStateIO, RejectsCorruptInput) {
  std::stringstream bad("not a ground state\n");
  try {
    read_ground_state(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CacheFormat);
  }
}

TEST(GroundStateIO, CacheHitReproducesTheSolve) {
  const auto dir = std::filesystem::temp_directory_path() / "lanemden_gs_cache_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  bool hit = true;
  const auto first = load_or_solve(dir, point("1.5", 8), SolverOptions{}, &hit);
  EXPECT_FALSE(hit);
  const auto second = load_or_solve(dir, point("1.5", 8), SolverOptions{}, &hit);
  EXPECT_TRUE(hit);
  EXPECT_EQ(first.U(), second.U());
  EXPECT_EQ(first.V(), second.V());
  std::filesystem::remove_all(dir);
}
