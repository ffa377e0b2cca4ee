#pragma once

// Controller synthesis for a target gate U ∈ U(k) on N = 2k levels:
//   1. diagonalize U = R diag(e^{iγ_j}) R†, γ_j ∈ [0, 2π);
//   2. per mode, ω_j = 2(π - γ_j) and τ_j = e^{iφ_j} √(π² - (π - γ_j)²);
//   3. X = diag(R, I) [[diag(iω), diag(iτ)], [-diag(iτ)†, 0]] diag(R†, I).
// Each mode is a 2×2 block whose eigenphases ω/2 ± π close the loop at T = 1.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holo/extremal.hpp"

namespace holo {

inline constexpr double kTolGateUnitary = 1e-10;
inline constexpr double kTolSpectrum = 1e-9;
inline constexpr double kTolSynthesis = 1e-9;
/// Eigenvalues within this distance of 1 are pinned to γ = 0 so that the
/// branch cut at 0 ≡ 2π does not depend on roundoff.
inline constexpr double kBranchSnap = 1e-12;

class UnitaryGate {
 public:
  explicit UnitaryGate(CMatrix u, std::string label = {}) : u_(std::move(u)), label_(std::move(label)) {
    require_square(u_, "gate");
    require_finite(u_, "gate");
    if (u_.rows() < 1) throw ShapeError("gate must be at least 1×1");
    const double defect = unitarity_defect(u_);
    if (defect > kTolGateUnitary) throw StructuralInputError("gate is not unitary", defect);
  }

  Index k() const noexcept { return u_.rows(); }
  const CMatrix& matrix() const noexcept { return u_; }
  const std::string& label() const noexcept { return label_; }

 private:
  CMatrix u_;
  std::string label_;
};

struct GateSpectrum {
  CMatrix rotation;           ///< R, unitary
  std::vector<double> gammas; ///< ascending, in [0, 2π)

  CMatrix diagonal() const {
    CVector d(static_cast<Index>(gammas.size()));
    for (std::size_t j = 0; j < gammas.size(); ++j) d(static_cast<Index>(j)) = std::polar(1.0, gammas[j]);
    return d.asDiagonal();
  }
};

/// ‖R† U R - diag(e^{iγ_j})‖_F
inline double spectrum_residual(const UnitaryGate& gate, const GateSpectrum& spectrum) {
  return (spectrum.rotation.adjoint() * gate.matrix() * spectrum.rotation - spectrum.diagonal()).norm();
}

/// Maps an eigenvalue phase onto the branch [0, 2π).
inline double branch_angle(Complex eigenvalue) {
  if (std::abs(eigenvalue - Complex(1.0, 0.0)) <= kBranchSnap) return 0.0;
  double gamma = std::arg(eigenvalue);
  if (gamma < 0.0) gamma += 2.0 * kPi;
  if (gamma >= 2.0 * kPi) gamma = 0.0;
  return gamma;
}

/// Unitary diagonalization through the complex Schur form, which is diagonal
/// for normal matrices and comes with an exactly unitary Schur basis, so
/// degenerate eigenvalues need no separate re-orthonormalization. Angles are
/// sorted ascending; ties keep the Schur order.
inline GateSpectrum diagonalize_gate(const UnitaryGate& gate) {
  const Index k = gate.k();
  Eigen::ComplexSchur<CMatrix> schur(gate.matrix(), true);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("complex Schur decomposition did not converge",
                         static_cast<std::size_t>(Eigen::ComplexSchur<CMatrix>::m_maxIterationsPerRow * k));
  }
  const CMatrix& tri = schur.matrixT();
  const CMatrix& q = schur.matrixU();

  std::vector<double> angles(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) angles[static_cast<std::size_t>(j)] = branch_angle(tri(j, j));
  std::vector<std::size_t> order(angles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });

  GateSpectrum spectrum{CMatrix(k, k), {}};
  spectrum.gammas.reserve(angles.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    spectrum.rotation.col(static_cast<Index>(j)) = q.col(static_cast<Index>(order[j]));
    spectrum.gammas.push_back(angles[order[j]]);
  }

  const double defect = unitarity_defect(spectrum.rotation);
  if (defect > kTolGateUnitary) throw StructuralInputError("diagonalizer is not unitary", defect);
  const double residual = spectrum_residual(gate, spectrum);
  if (residual > kTolSpectrum) {
    throw StructuralInputError("gate diagonalization residual too large", residual);
  }
  return spectrum;
}

/// Per-mode controller data.
struct ModeData {
  double gamma;
  double omega;  ///< 2(π - γ)
  Complex tau;   ///< e^{iφ} √(π² - (π - γ)²)
};

inline ModeData mode_data(double gamma, double phase = 0.0) {
  if (!(gamma >= 0.0 && gamma < 2.0 * kPi)) {
    throw DomainError("eigenphase " + std::to_string(gamma) + " is outside [0, 2π)");
  }
  // π² - (π - γ)² written as γ(2π - γ) to avoid cancellation near γ = 0.
  const double radius = std::sqrt(gamma * (2.0 * kPi - gamma));
  return {gamma, 2.0 * (kPi - gamma), std::polar(radius, phase)};
}

inline std::vector<ModeData> mode_data(const GateSpectrum& spectrum, std::span<const double> phases = {}) {
  if (!phases.empty() && phases.size() != spectrum.gammas.size()) {
    throw ShapeError("expected " + std::to_string(spectrum.gammas.size()) + " phases, got " +
                     std::to_string(phases.size()));
  }
  std::vector<ModeData> modes;
  modes.reserve(spectrum.gammas.size());
  for (std::size_t j = 0; j < spectrum.gammas.size(); ++j) {
    modes.push_back(mode_data(spectrum.gammas[j], phases.empty() ? 0.0 : phases[j]));
  }
  return modes;
}

/// Ω = R diag(iω_j) R†, W = R diag(iτ_j). Phases φ_j default to 0.
inline Controller build_controller(const GateSpectrum& spectrum, std::span<const double> phases = {}) {
  const auto modes = mode_data(spectrum, phases);
  const Index k = static_cast<Index>(modes.size());
  CVector omega_diag(k), w_diag(k);
  for (Index j = 0; j < k; ++j) {
    omega_diag(j) = kI * modes[static_cast<std::size_t>(j)].omega;
    w_diag(j) = kI * modes[static_cast<std::size_t>(j)].tau;
  }
  const CMatrix& r = spectrum.rotation;
  const CMatrix omega = r * omega_diag.asDiagonal() * r.adjoint();
  return Controller(AntiHermitian::project(omega), CMatrix(r * w_diag.asDiagonal()));
}

/// Gauge twist 2πi·R diag(m_j) R† with m_j = 1 on modes that move (τ_j ≠ 0)
/// and 0 on stationary ones; closes after unit time.
inline AntiHermitian moving_mode_twist(const GateSpectrum& spectrum) {
  const Index k = static_cast<Index>(spectrum.gammas.size());
  CVector d = CVector::Zero(k);
  for (Index j = 0; j < k; ++j) {
    if (mode_data(spectrum.gammas[static_cast<std::size_t>(j)]).tau != Complex(0.0, 0.0)) {
      d(j) = 2.0 * kPi * kI;
    }
  }
  return AntiHermitian::project(spectrum.rotation * d.asDiagonal() * spectrum.rotation.adjoint());
}

struct SynthesisOptions {
  std::vector<double> phases;         ///< φ_j; empty means all zero
  double tolerance = kTolSynthesis;   ///< acceptance bound on both boundary errors
  std::optional<Index> ambient_dim;   ///< must equal 2k when given
};

struct SynthesisReport {
  Controller controller;
  GateSpectrum spectrum;
  std::vector<double> phases;
  CMatrix holonomy;            ///< V0† e^X V0 e^{-Ω}
  double closure_error;        ///< ‖e^X P0 e^{-X} - P0‖_F
  double holonomy_error;       ///< ‖Γ - U‖_F
  double length;
  double tolerance;
  bool passed;
  std::string diagnostic;
};

inline SynthesisReport synthesize(const UnitaryGate& gate, const SynthesisOptions& options = {}) {
  const Index k = gate.k();
  if (options.ambient_dim && *options.ambient_dim != 2 * k) {
    throw DomainError("ambient dimension N = " + std::to_string(*options.ambient_dim) +
                      " is not supported; this construction requires N = 2k = " +
                      std::to_string(2 * k));
  }
  GateSpectrum spectrum = diagonalize_gate(gate);
  std::vector<double> phases = options.phases;
  if (phases.empty()) phases.assign(static_cast<std::size_t>(k), 0.0);
  Controller controller = build_controller(spectrum, phases);

  const CMatrix ex = expm_antihermitian(controller.generator());
  const CMatrix v0 = CMatrix::Identity(2 * k, k);
  const CMatrix p0 = v0 * v0.adjoint();
  const double closure = (ex * p0 * ex.adjoint() - p0).norm();
  const CMatrix holonomy = v0.adjoint() * ex * v0 * expm_antihermitian(-controller.omega());
  const double holonomy_error = (holonomy - gate.matrix()).norm();

  const bool passed = closure <= options.tolerance && holonomy_error <= options.tolerance;
  std::string diagnostic;
  if (!passed) {
    diagnostic = "verification failed: closure error " + std::to_string(closure) +
                 ", holonomy error " + std::to_string(holonomy_error) + ", tolerance " +
                 std::to_string(options.tolerance);
  }
  const double length = analytic_length(controller);
  return {std::move(controller), std::move(spectrum), std::move(phases), holonomy, closure,
          holonomy_error, length, options.tolerance, passed, std::move(diagnostic)};
}

// ---------------------------------------------------------------------------
// Gate catalog

struct GateParameters {
  std::optional<Index> k = std::nullopt;
  std::optional<double> gamma = std::nullopt;
};

struct CatalogEntry {
  std::string_view name;
  std::string_view parameters;
  std::string_view description;
};

inline std::span<const CatalogEntry> gate_catalog_entries() {
  static constexpr CatalogEntry entries[] = {
      {"identity", "k (default 1)", "I_k"},
      {"phase", "gamma, k (default 1)", "e^{i gamma} I_k"},
      {"hadamard", "", "(1/sqrt 2)[[1, 1], [1, -1]]"},
      {"cnot", "", "controlled NOT on |00>,|01>,|10>,|11>"},
      {"dft", "k", "discrete Fourier transform, entries w^{mn}/sqrt k, w = e^{2 pi i/k}"},
  };
  return entries;
}

inline UnitaryGate gate_catalog(std::string_view name, const GateParameters& params = {}) {
  auto dimension = [&](Index fallback) {
    const Index k = params.k.value_or(fallback);
    if (k < 1 || k > 64) throw DomainError("gate dimension k = " + std::to_string(k) + " is out of range");
    return k;
  };
  if (name == "identity") {
    const Index k = dimension(1);
    return UnitaryGate(CMatrix::Identity(k, k), "identity(" + std::to_string(k) + ")");
  }
  if (name == "phase") {
    if (!params.gamma) throw DomainError("phase gate needs a gamma parameter");
    if (!std::isfinite(*params.gamma)) throw DomainError("phase gate gamma must be finite");
    const Index k = dimension(1);
    return UnitaryGate(CMatrix(std::polar(1.0, *params.gamma) * CMatrix::Identity(k, k)),
                       "phase(" + std::to_string(*params.gamma) + ")");
  }
  if (name == "hadamard") {
    CMatrix u(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return UnitaryGate(std::move(u), "hadamard");
  }
  if (name == "cnot") {
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = u(1, 1) = 1.0;
    u(2, 3) = u(3, 2) = 1.0;
    return UnitaryGate(std::move(u), "cnot");
  }
  if (name == "dft") {
    if (!params.k) throw DomainError("dft gate needs a k parameter");
    const Index k = dimension(1);
    CMatrix u(k, k);
    const double norm = 1.0 / std::sqrt(static_cast<double>(k));
    for (Index m = 0; m < k; ++m) {
      for (Index n = 0; n < k; ++n) {
        const auto power = static_cast<double>((m * n) % k);
        u(m, n) = std::polar(norm, 2.0 * kPi * power / static_cast<double>(k));
      }
    }
    return UnitaryGate(std::move(u), "dft(" + std::to_string(k) + ")");
  }
  throw DomainError("unknown gate '" + std::string(name) + "'");
}

}  // namespace holo
