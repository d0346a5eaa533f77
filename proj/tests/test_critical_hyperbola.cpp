#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "lanemden/critical_hyperbola.hpp"
#include "lanemden/errors.hpp"
#include "lanemden/rational.hpp"
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

}  // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(*Rational::parse("6/4"), Rational(3, 2));
  EXPECT_EQ(*Rational::parse("-3/4"), Rational(-3, 4));
  EXPECT_EQ(*Rational::parse("1.25"), Rational(5, 4));
  EXPECT_EQ(*Rational::parse("1.5e-2"), Rational(3, 200));
  EXPECT_FALSE(Rational::parse("abc"));
  EXPECT_FALSE(Rational::parse("1/0"));
}

TEST(Rational, CheckedArithmeticReportsOverflow) {
  const Rational big(INT64_MAX / 2 + 1, 1);
  EXPECT_FALSE(checked_mul(big, Rational(4)));
  EXPECT_EQ(*checked_add(Rational(1, 3), Rational(1, 6)), Rational(1, 2));
  EXPECT_EQ(*checked_div(Rational(1, 3), Rational(2, 3)), Rational(1, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
}

TEST(Exponent, KeepsExactFormWhenAvailable) {
  EXPECT_TRUE(Exponent::parse("5/3").exact);
  EXPECT_TRUE(Exponent::parse("1.5").exact);
  EXPECT_FALSE(Exponent::parse("1.23456789012345678").exact);
  EXPECT_EQ(code_of([] { Exponent::parse("one"); }), ErrorCode::InvalidArgument);
}

TEST(QFromP, SymmetricPoint) {
  const auto q = q_from_p(Exponent::parse("5/3"), 8);
  ASSERT_TRUE(q.exact);
  EXPECT_EQ(*q.exact, Rational(5, 3));
}

TEST(QFromP, RegimeOneRepresentative) {
  const auto q = q_from_p(Exponent::parse("1.5"), 8);
  ASSERT_TRUE(q.exact);
  EXPECT_EQ(*q.exact, Rational(13, 7));
  EXPECT_NEAR(q.value, 1.857142857142857, 1e-15);
}

TEST(QFromP, RegimeThreeRepresentative) {
  const auto q = q_from_p(Exponent::parse("1.1"), 12);
  ASSERT_TRUE(q.exact);
  EXPECT_EQ(*q.exact, Rational(9, 5));
}

TEST(QFromP, InexactInputSatisfiesRelation) {
  const auto p = Exponent::from_double(std::sqrt(2.0));
  const auto q = q_from_p(p, 9);
  EXPECT_FALSE(q.exact);
  EXPECT_LE(std::abs(oracle::hyperbola_gap(p.value, q.value, 9)), 1e-15);
}

TEST(QFromP, RejectsPointsOffTheAdmissibleBranch) {
  EXPECT_EQ(code_of([] { q_from_p(Exponent::parse("2"), 8); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { q_from_p(Exponent::parse("1"), 8); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { q_from_p(Exponent::parse("3/2"), 2); }), ErrorCode::InvalidArgument);
}

TEST(HyperbolaPoint, RejectsMismatchedTriple) {
  EXPECT_EQ(code_of([] { make_hyperbola_point(Exponent::parse("3/2"), Exponent::parse("2"), 8); }),
            ErrorCode::NotOnHyperbola);
  EXPECT_NO_THROW(make_hyperbola_point(Exponent::parse("3/2"), Exponent::parse("13/7"), 8));
}

TEST(HyperbolaPoint, InvolutionThroughTheHyperbola) {
  for (const auto& row : oracle::kRegimeTable) {
    const auto p = Exponent::parse(row.p);
    const auto back = p_from_q(q_from_p(p, row.N), row.N);
    EXPECT_NEAR(back.value, p.value, 1e-12) << row.p << " N=" << row.N;
  }
}

TEST(Regime, Representatives) {
  EXPECT_EQ(classify_regime(Exponent::parse("1.5"), 8).tag, RegimeTag::I);
  EXPECT_EQ(classify_regime(Exponent::parse("1.5"), 10).tag, RegimeTag::II);
  EXPECT_EQ(classify_regime(Exponent::parse("1.1"), 12).tag, RegimeTag::III);
}

TEST(Regime, BoundaryAndFloorsAreUnsupported) {
  EXPECT_EQ(classify_regime(Exponent::parse("4/3"), 8).tag, RegimeTag::Unsupported);
  EXPECT_EQ(classify_regime(Exponent::parse("5/3"), 8).tag, RegimeTag::Unsupported);
  EXPECT_EQ(classify_regime(Exponent::parse("5/3"), 8).minimum_dimension, 10);
  EXPECT_EQ(classify_regime(Exponent::parse("1.2"), 8).tag, RegimeTag::Unsupported);
  EXPECT_EQ(classify_regime(Exponent::parse("1.2"), 8).minimum_dimension, 12);
}

TEST(Regime, HandDerivedTable) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& row : oracle::kRegimeTable) {
    const auto p = Exponent::parse(row.p);
    const auto hp = make_hyperbola_point(p, row.N);
    EXPECT_NEAR(hp.q.value, oracle::hyperbola_q(p.value, row.N), 1e-12 * hp.q.value) << row.p << " N=" << row.N;
    EXPECT_LE(std::abs(oracle::hyperbola_gap(hp.p.value, hp.q.value, row.N)), 1e-12);
    const auto r = classify_regime(p, row.N);
    EXPECT_EQ(r.tag, row.tag) << row.p << " N=" << row.N;
    EXPECT_EQ(r.minimum_dimension, row.minimum_dimension) << row.p << " N=" << row.N;
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

TEST(Regime, DecimalInputNearBoundaryUsesBand) {
  // 4/3 written with 17 digits is read as a double and lands inside the band.
  EXPECT_EQ(classify_regime(Exponent::parse("1.3333333333333333"), 8).tag, RegimeTag::Unsupported);
  EXPECT_EQ(classify_regime(Exponent::parse("1.3333333334"), 8).tag, RegimeTag::I);
}

TEST(DecayRates, FastBranch) {
  const auto d = decay_rates(Exponent::parse("1.5"), 8);
  EXPECT_DOUBLE_EQ(d.v_rate, -6.0);
  EXPECT_DOUBLE_EQ(d.u_rate, -6.0);
  EXPECT_FALSE(d.u_log_flag);
  EXPECT_DOUBLE_EQ(d.du_rate, -7.0);
  EXPECT_DOUBLE_EQ(d.d2v_rate, -8.0);
}

TEST(DecayRates, LogarithmicBranch) {
  const auto d = decay_rates(Exponent::parse("4/3"), 8);
  EXPECT_DOUBLE_EQ(d.u_rate, -6.0);
  EXPECT_TRUE(d.u_log_flag);
}

TEST(DecayRates, SlowBranch) {
  const auto d = decay_rates(Exponent::parse("1.1"), 12);
  EXPECT_NEAR(d.u_rate, -9.0, 1e-12);
  EXPECT_DOUBLE_EQ(d.v_rate, -10.0);
  EXPECT_NEAR(d.d2u_rate, -11.0, 1e-12);
}
