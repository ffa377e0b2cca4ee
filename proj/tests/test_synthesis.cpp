#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "holo/synthesis.hpp"
#include "support.hpp"

using namespace holo;

namespace {

double formula_length(const std::vector<double>& gammas) {
  double sum = 0.0;
  for (double g : gammas) sum += kPi * kPi - (kPi - g) * (kPi - g);
  return std::sqrt(sum);
}

}  // namespace

TEST(UnitaryGate, RejectsNonUnitary) {
  EXPECT_THROW(UnitaryGate(CMatrix(2.0 * CMatrix::Identity(2, 2))), StructuralInputError);
  EXPECT_THROW(UnitaryGate(CMatrix::Identity(2, 3)), ShapeError);
}

TEST(Diagonalize, IdentityAndDiagonal) {
  const auto id = diagonalize_gate(UnitaryGate(CMatrix::Identity(3, 3)));
  for (double g : id.gammas) EXPECT_EQ(g, 0.0);
  EXPECT_LE(spectrum_residual(UnitaryGate(CMatrix::Identity(3, 3)), id), 1e-15);

  CMatrix z(2, 2);
  z << 1, 0, 0, -1;
  const auto s = diagonalize_gate(UnitaryGate(z));
  EXPECT_EQ(s.gammas[0], 0.0);
  EXPECT_NEAR(s.gammas[1], kPi, 1e-15);
}

TEST(Diagonalize, CnotSpectrum) {
  const UnitaryGate cnot = gate_catalog("cnot");
  const auto s = diagonalize_gate(cnot);
  ASSERT_EQ(s.gammas.size(), 4u);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(s.gammas[static_cast<std::size_t>(j)], 0.0);
  EXPECT_NEAR(s.gammas[3], kPi, 1e-14);
  // Oracle: det(λ - CNOT) = (λ - 1)³ (λ + 1), so tr = 2 and det = -1.
  EXPECT_NEAR(cnot.matrix().trace().real(), 2.0, 1e-15);
  EXPECT_NEAR(cnot.matrix().determinant().real(), -1.0, 1e-15);
  EXPECT_LE(unitarity_defect(s.rotation), 1e-10);
}

TEST(Diagonalize, RandomGatesMeetContract) {
  std::mt19937_64 rng(51);
  for (Index k = 1; k <= 6; ++k) {
    for (int trial = 0; trial < 20; ++trial) {
      const UnitaryGate gate(test::haar_unitary(k, rng));
      const auto s = diagonalize_gate(gate);
      EXPECT_LE(spectrum_residual(gate, s), 1e-9);
      EXPECT_LE(unitarity_defect(s.rotation), 1e-10);
      EXPECT_TRUE(std::is_sorted(s.gammas.begin(), s.gammas.end()));
      for (double g : s.gammas) {
        EXPECT_GE(g, 0.0);
        EXPECT_LT(g, 2.0 * kPi);
      }
    }
  }
}

TEST(Diagonalize, DegenerateClustersStayUnitary) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix q = test::haar_unitary(5, rng);
    CVector d(5);
    d << std::polar(1.0, 1.0), std::polar(1.0, 1.0), std::polar(1.0, 1.0), -1.0, -1.0;
    const UnitaryGate gate(CMatrix(q * d.asDiagonal() * q.adjoint()));
    const auto s = diagonalize_gate(gate);
    EXPECT_LE(unitarity_defect(s.rotation), 1e-10);
    EXPECT_LE(spectrum_residual(gate, s), 1e-9);
    EXPECT_TRUE(synthesize(gate).passed);
  }
}

TEST(BranchAngle, SnapsNearOne) {
  EXPECT_EQ(branch_angle(Complex(1.0, 1e-14)), 0.0);
  EXPECT_EQ(branch_angle(Complex(1.0, -1e-14)), 0.0);
  EXPECT_NEAR(branch_angle(Complex(0.0, -1.0)), 1.5 * kPi, 1e-15);
  EXPECT_NEAR(branch_angle(Complex(-1.0, 0.0)), kPi, 1e-15);
}

TEST(BuildController, Examples) {
  const GateSpectrum zero{CMatrix::Identity(1, 1), {0.0}};
  const Controller c0 = build_controller(zero);
  EXPECT_NEAR(std::abs(c0.omega().matrix()(0, 0) - 2.0 * kPi * kI), 0.0, 1e-15);
  EXPECT_EQ(c0.w().norm(), 0.0);

  const GateSpectrum half{CMatrix::Identity(1, 1), {kPi}};
  const Controller cpi = build_controller(half);
  EXPECT_EQ(cpi.omega().matrix().norm(), 0.0);
  EXPECT_NEAR(std::abs(cpi.w()(0, 0) - kI * kPi), 0.0, 1e-15);

  const GateSpectrum quarter{CMatrix::Identity(1, 1), {kPi / 2}};
  const Controller cq = build_controller(quarter);
  EXPECT_NEAR(std::abs(cq.omega().matrix()(0, 0) - kI * kPi), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(cq.w()(0, 0) - kI * (kPi / 2) * std::sqrt(3.0)), 0.0, 1e-14);

  EXPECT_THROW(build_controller(GateSpectrum{CMatrix::Identity(1, 1), {2.0 * kPi}}), DomainError);
  EXPECT_THROW(build_controller(half, std::vector<double>{0.0, 1.0}), ShapeError);
}

TEST(ModeData, FrequencyIdentity) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> g(0.0, 2.0 * kPi), phi(-kPi, kPi);
  for (int trial = 0; trial < 1000; ++trial) {
    const ModeData m = mode_data(g(rng), phi(rng));
    EXPECT_NEAR(m.omega * m.omega / 4.0 + std::norm(m.tau), kPi * kPi, 1e-12);
  }
}

TEST(Synthesize, IdentityGate) {
  for (Index k = 1; k <= 4; ++k) {
    const auto r = synthesize(gate_catalog("identity", {.k = k}));
    EXPECT_LE(r.closure_error, 1e-12);
    EXPECT_LE(r.holonomy_error, 1e-12);
    EXPECT_EQ(r.length, 0.0);
    EXPECT_TRUE(r.passed);
  }
}

TEST(Synthesize, MinusOneAndCnot) {
  const auto minus = synthesize(UnitaryGate(CMatrix(-CMatrix::Identity(1, 1))));
  EXPECT_NEAR(minus.length, kPi, 1e-15);
  EXPECT_LE((minus.holonomy + CMatrix::Identity(1, 1)).norm(), 1e-11);

  const auto cnot = synthesize(gate_catalog("cnot"));
  EXPECT_NEAR(cnot.length, kPi, 1e-12);
  EXPECT_LE(cnot.holonomy_error, 1e-10);
}

TEST(Synthesize, RandomGatesAreExact) {
  std::mt19937_64 rng(54);
  for (Index k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto r = synthesize(UnitaryGate(test::haar_unitary(k, rng)));
      EXPECT_TRUE(r.passed) << r.diagnostic;
      EXPECT_LE(r.closure_error, 1e-9);
      EXPECT_LE(r.holonomy_error, 1e-9);
      EXPECT_NEAR(r.length, formula_length(r.spectrum.gammas), 1e-12);
    }
  }
}

TEST(Synthesize, PhaseFreedom) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> phi(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const UnitaryGate gate(test::haar_unitary(3, rng));
    const auto base = synthesize(gate);
    SynthesisOptions options;
    options.phases = {phi(rng), phi(rng), phi(rng)};
    const auto twisted = synthesize(gate, options);
    EXPECT_NEAR(twisted.length, base.length, 1e-11);
    EXPECT_NEAR(twisted.holonomy_error, base.holonomy_error, 1e-11);
    EXPECT_TRUE(twisted.passed);
  }
}

TEST(Synthesize, ConjugationCovariance) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix u = test::haar_unitary(3, rng);
    const CMatrix q = test::haar_unitary(3, rng);
    EXPECT_NEAR(synthesize(UnitaryGate(CMatrix(q * u * q.adjoint()))).length, synthesize(UnitaryGate(u)).length,
                1e-10);
  }
}

TEST(Synthesize, RejectsOtherAmbientDimension) {
  SynthesisOptions options;
  options.ambient_dim = 5;
  EXPECT_THROW(synthesize(gate_catalog("cnot"), options), DomainError);
  options.ambient_dim = 8;
  EXPECT_NO_THROW(synthesize(gate_catalog("cnot"), options));
}

TEST(Synthesize, FailureIsReportedNotThrown) {
  SynthesisOptions options;
  options.tolerance = 1e-300;
  const auto r = synthesize(gate_catalog("hadamard"), options);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.diagnostic.find("verification failed"), std::string::npos);
}

TEST(Catalog, StandardMatrices) {
  const CMatrix h = gate_catalog("hadamard").matrix();
  EXPECT_LE((gate_catalog("dft", {.k = 2}).matrix() - h).norm(), 1e-15);

  const CMatrix cnot = gate_catalog("cnot").matrix();
  CMatrix expected = CMatrix::Identity(4, 4);
  expected.bottomRightCorner(2, 2) << 0, 1, 1, 0;
  EXPECT_EQ((cnot - expected).norm(), 0.0);

  const UnitaryGate dft4 = gate_catalog("dft", {.k = 4});
  EXPECT_LE(unitarity_defect(dft4.matrix()), 1e-12);
  for (double g : diagonalize_gate(dft4).gammas) {
    const double quarter = g / (kPi / 2);
    EXPECT_NEAR(quarter, std::round(quarter), 1e-9);
  }
  EXPECT_NEAR(synthesize(dft4).length, formula_length(diagonalize_gate(dft4).gammas), 1e-12);

  const CMatrix phase = gate_catalog("phase", {.k = 2, .gamma = 0.3}).matrix();
  EXPECT_LE((phase - std::polar(1.0, 0.3) * CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Catalog, Errors) {
  EXPECT_THROW(gate_catalog("toffoli"), DomainError);
  EXPECT_THROW(gate_catalog("dft"), DomainError);
  EXPECT_THROW(gate_catalog("phase"), DomainError);
  EXPECT_THROW(gate_catalog("identity", {.k = 0}), DomainError);
  EXPECT_FALSE(gate_catalog_entries().empty());
}

TEST(MovingModeTwist, ClosesFrameLoop) {
  std::mt19937_64 rng(57);
  const auto report = synthesize(UnitaryGate(test::haar_unitary(3, rng)));
  EXPECT_LE((expm_antihermitian(moving_mode_twist(report.spectrum)) - CMatrix::Identity(3, 3)).norm(), 1e-13);
  const auto identity = synthesize(gate_catalog("identity", {.k = 2}));
  EXPECT_EQ(moving_mode_twist(identity.spectrum).matrix().norm(), 0.0);
}
