#include <gtest/gtest.h>

#include "holo/extremal.hpp"
#include "holo/synthesis.hpp"
#include "support.hpp"

using namespace holo;

namespace {

Controller half_turn() {
  return Controller(AntiHermitian::zero(1), CMatrix::Constant(1, 1, kI * kPi));
}

}  // namespace

TEST(Controller, AssemblesBlocks) {
  const AntiHermitian x = half_turn().generator();
  CMatrix expected(2, 2);
  expected << 0, kI * kPi, kI * kPi, 0;
  EXPECT_EQ((x.matrix() - expected).norm(), 0.0);
  EXPECT_THROW(Controller(AntiHermitian::zero(2), CMatrix::Zero(2, 3)), ShapeError);
}

TEST(Evaluate, StartsAtBasePoint) {
  std::mt19937_64 rng(41);
  const ExtremalCurve curve(synthesize(UnitaryGate(test::haar_unitary(3, rng))).controller);
  EXPECT_LE((curve.evaluate(0.0).matrix() - CMatrix::Identity(6, 3)).norm(), 1e-15);
  EXPECT_THROW(curve.evaluate(-1e-9), DomainError);
  EXPECT_THROW(curve.evaluate(1.0 + 1e-9), DomainError);
}

TEST(Evaluate, IdentityControllerIsStationary) {
  const ExtremalCurve curve(synthesize(gate_catalog("identity", {.k = 2})).controller);
  for (double t : {0.1, 0.37, 0.5, 1.0}) {
    EXPECT_LE((curve.evaluate(t).matrix() - CMatrix::Identity(4, 2)).norm(), 1e-14) << t;
  }
}

TEST(Evaluate, HalfTurnEndpoint) {
  const ExtremalCurve curve(half_turn());
  CMatrix expected = CMatrix::Zero(2, 1);
  expected(0, 0) = -1.0;
  EXPECT_LE((curve.evaluate(1.0).matrix() - expected).norm(), 1e-14);
  EXPECT_LE((analytic_holonomy(curve).gamma + CMatrix::Identity(1, 1)).norm(), 1e-14);
}

TEST(Evaluate, SplitIntervalComposition) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Controller c = synthesize(UnitaryGate(test::haar_unitary(2, rng))).controller;
    const ExtremalCurve curve(c);
    const double t = u(rng), s = t * u(rng);
    // V(t) = e^{(t-s)X} V(s) e^{-(t-s)Ω}
    const CMatrix composed = expm_antihermitian(c.generator() * (t - s)) * curve.evaluate(s).matrix() *
                             expm_antihermitian(c.omega() * (s - t));
    EXPECT_LE((composed - curve.evaluate(t).matrix()).norm(), 1e-11);
  }
}

TEST(Sample, GridAndEndpoints) {
  const ExtremalCurve curve(half_turn(), 2.0);
  const FramePath path = curve.sample(5);
  ASSERT_EQ(path.size(), 5u);
  EXPECT_EQ(path.front().t, 0.0);
  EXPECT_EQ(path[2].t, 1.0);
  EXPECT_EQ(path.back().t, 2.0);
  EXPECT_THROW(curve.sample(1), DomainError);
}

TEST(ConstraintResidual, SynthesizedControllersVanish) {
  std::mt19937_64 rng(43);
  for (Index k = 1; k <= 4; ++k) {
    const Controller c = synthesize(UnitaryGate(test::haar_unitary(k, rng))).controller;
    EXPECT_LE(constraint_residual(c, StiefelFrame::canonical(2 * k, k)), 1e-12);
  }
  EXPECT_EQ(constraint_residual(CMatrix::Zero(4, 4), StiefelFrame::canonical(4, 2)), 0.0);
}

TEST(ConstraintResidual, InjectedZBlockIsMeasured) {
  for (Index k = 1; k <= 4; ++k) {
    CMatrix x = CMatrix::Zero(2 * k, 2 * k);
    x.bottomRightCorner(k, k) = kI * CMatrix::Identity(k, k);
    EXPECT_NEAR(constraint_residual(x, StiefelFrame::canonical(2 * k, k)), std::sqrt(static_cast<double>(k)), 1e-14);
  }
  std::mt19937_64 rng(44);
  const Controller c = synthesize(UnitaryGate(test::haar_unitary(3, rng))).controller;
  const CMatrix z = test::random_antihermitian(3, rng);
  CMatrix x = c.generator().matrix();
  x.bottomRightCorner(3, 3) = z;
  EXPECT_NEAR(constraint_residual(x, StiefelFrame::canonical(6, 3)), z.norm(), 1e-10);
  EXPECT_THROW(constraint_residual(x, StiefelFrame::canonical(4, 2)), ShapeError);
}

TEST(OmegaDrift, ConstantAlongCurves) {
  std::mt19937_64 rng(45);
  for (Index k = 1; k <= 4; ++k) {
    const ExtremalCurve curve(synthesize(UnitaryGate(test::haar_unitary(k, rng))).controller);
    EXPECT_LE(omega_drift(curve, 100), 1e-10);
  }
  EXPECT_LE(omega_drift(ExtremalCurve(half_turn()), 100), 1e-12);
  const ExtremalCurve zero(Controller(AntiHermitian::zero(2), CMatrix::Zero(2, 2)));
  EXPECT_EQ(omega_drift(zero, 10), 0.0);
}

TEST(AnalyticLength, Examples) {
  EXPECT_EQ(analytic_length(synthesize(gate_catalog("identity", {.k = 3})).controller), 0.0);
  EXPECT_NEAR(analytic_length(half_turn()), kPi, 1e-15);
  EXPECT_NEAR(analytic_length(synthesize(gate_catalog("cnot")).controller), kPi, 1e-12);
  EXPECT_NEAR(analytic_length(half_turn(), 2.5), 2.5 * kPi, 1e-14);
}

TEST(AnalyticLength, SampledLengthConvergesQuadratically) {
  std::mt19937_64 rng(46);
  const Controller c = synthesize(UnitaryGate(test::haar_unitary(2, rng))).controller;
  const ExtremalCurve curve(c);
  const double exact = analytic_length(c);
  const double e1 = exact - stiefel_path_length(curve.sample(201));
  const double e2 = exact - stiefel_path_length(curve.sample(401));
  EXPECT_GT(e1, 0.0);
  EXPECT_NEAR(e1 / e2, 4.0, 0.05);
  EXPECT_NEAR((4.0 * stiefel_path_length(curve.sample(401)) - stiefel_path_length(curve.sample(201))) / 3.0, exact,
              1e-7);
}

TEST(ExtremalCurve, ConstantSpeed) {
  std::mt19937_64 rng(47);
  const Controller c = synthesize(UnitaryGate(test::haar_unitary(3, rng))).controller;
  const FramePath path = ExtremalCurve(c).sample(1001);
  const double expected = (c.w() * c.w().adjoint()).trace().real();
  const auto vel = frame_velocities(path);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    worst = std::max(worst, std::abs((vel[i].adjoint() * vel[i]).trace().real() - expected));
  }
  EXPECT_LE(worst, 1e-3);
}

TEST(ExtremalCurve, HorizontalityViolationShrinksQuadratically) {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 5; ++trial) {
    const ExtremalCurve curve(synthesize(UnitaryGate(test::haar_unitary(2, rng))).controller);
    const double v1 = is_horizontal(curve.sample(500), 1.0).max_violation;
    const double v2 = is_horizontal(curve.sample(1000), 1.0).max_violation;
    EXPECT_GE(v1 / v2, 3.5);
    EXPECT_LE(v1 / v2, 4.5);
  }
}

TEST(ExtremalCurve, RotatedBasePoint) {
  std::mt19937_64 rng(49);
  const Controller c = synthesize(UnitaryGate(test::haar_unitary(2, rng))).controller;
  const CMatrix b = test::haar_unitary(4, rng);
  const ExtremalCurve rotated(c, 1.0, b);
  EXPECT_LE((rotated.initial_frame().matrix() - b.leftCols(2)).norm(), 1e-14);
  EXPECT_LE(omega_drift(rotated, 50), 1e-10);
  EXPECT_LE((analytic_holonomy(rotated).gamma - analytic_holonomy(ExtremalCurve(c)).gamma).norm(), 1e-11);
  EXPECT_THROW(ExtremalCurve(c, 1.0, CMatrix(2.0 * b)), StructuralInputError);
  EXPECT_THROW(ExtremalCurve(c, 0.0), DomainError);
}
