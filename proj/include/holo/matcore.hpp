#pragma once

// Dense complex-matrix kernels shared by every other module: Hermitian
// eigendecomposition, exponentials of anti-Hermitian matrices, the polar
// retraction onto orthonormal frames, and Frobenius distances.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "holo/errors.hpp"

namespace holo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

/// Structural tolerance for Hermitian / anti-Hermitian checks (scaled by max(1, ‖·‖_F)).
inline constexpr double kTolStruct = 1e-12;

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) {
  return m.allFinite();
}

inline void require_finite(const CMatrix& m, const char* what) {
  if (!all_finite(m)) throw StructuralInputError(std::string(what) + " has non-finite entries", 0.0);
}

inline void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + " must be square, got " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()));
  }
}

/// max |H - H†|
inline double hermiticity_defect(const CMatrix& h) {
  return max_abs(h - h.adjoint());
}

/// max |X + X†|
inline double anti_hermiticity_defect(const CMatrix& x) {
  return max_abs(x + x.adjoint());
}

/// max |U†U - I|
inline double unitarity_defect(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

inline double structural_scale(const CMatrix& m) {
  return std::max(1.0, m.norm());
}

/// Element of u(n): an n×n matrix with X† = -X.
class AntiHermitian {
 public:
  AntiHermitian() = default;

  explicit AntiHermitian(CMatrix x, double tol = kTolStruct) : x_(std::move(x)) {
    require_square(x_, "anti-Hermitian matrix");
    require_finite(x_, "anti-Hermitian matrix");
    const double defect = anti_hermiticity_defect(x_);
    if (defect > tol * structural_scale(x_)) {
      throw StructuralInputError("matrix is not anti-Hermitian", defect);
    }
  }

  static AntiHermitian zero(Index n) { return AntiHermitian(CMatrix::Zero(n, n)); }

  /// Anti-Hermitian part (M - M†)/2 of an arbitrary square matrix.
  static AntiHermitian project(const CMatrix& m) {
    require_square(m, "matrix");
    return AntiHermitian(CMatrix(0.5 * (m - m.adjoint())));
  }

  Index dim() const noexcept { return x_.rows(); }
  const CMatrix& matrix() const noexcept { return x_; }

  AntiHermitian operator*(double s) const { return AntiHermitian(CMatrix(s * x_)); }
  AntiHermitian operator-() const { return AntiHermitian(CMatrix(-x_)); }

 private:
  CMatrix x_;
};

struct HermitianEigen {
  RVector eigenvalues;   ///< ascending
  CMatrix eigenvectors;  ///< unitary, columns match eigenvalues
};

/// Spectral decomposition H = Q diag(λ) Q† of a Hermitian matrix.
inline HermitianEigen hermitian_eig(const CMatrix& h) {
  require_square(h, "Hermitian matrix");
  require_finite(h, "Hermitian matrix");
  const double defect = hermiticity_defect(h);
  if (defect > kTolStruct * structural_scale(h)) {
    throw StructuralInputError("matrix is not Hermitian", defect);
  }
  if (h.rows() == 0) return {RVector(0), CMatrix(0, 0)};
  // Symmetrize so the solver sees an exactly Hermitian input.
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge",
                         static_cast<std::size_t>(Eigen::SelfAdjointEigenSolver<CMatrix>::m_maxIterations) *
                             static_cast<std::size_t>(h.rows()));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// The one-parameter unitary group t ↦ exp(tX) of an anti-Hermitian X.
///
/// The Hermitian matrix -iX is diagonalized once, so exp(tX) = Q diag(e^{iλt}) Q†
/// is exactly unitary up to the orthonormality of Q for every t.
class UnitaryFlow {
 public:
  UnitaryFlow() = default;

  explicit UnitaryFlow(const AntiHermitian& x) {
    auto eig = hermitian_eig(CMatrix(-kI * x.matrix()));
    freq_ = std::move(eig.eigenvalues);
    q_ = std::move(eig.eigenvectors);
  }

  Index dim() const noexcept { return q_.rows(); }

  CMatrix at(double t) const {
    if (t == 0.0) return CMatrix::Identity(dim(), dim());
    CVector phases(freq_.size());
    for (Index j = 0; j < freq_.size(); ++j) phases(j) = std::polar(1.0, freq_(j) * t);
    return q_ * phases.asDiagonal() * q_.adjoint();
  }

  /// Eigenvalues of -iX.
  const RVector& frequencies() const noexcept { return freq_; }

 private:
  CMatrix q_;
  RVector freq_;
};

inline CMatrix expm_antihermitian(const AntiHermitian& x) {
  return UnitaryFlow(x).at(1.0);
}

inline constexpr double kTolRank = 1e-12;

/// Polar factor M(M†M)^{-1/2}: the orthonormal frame nearest to M in Frobenius distance.
inline CMatrix polar_retract(const CMatrix& m) {
  require_finite(m, "frame");
  if (m.cols() > m.rows() || m.cols() == 0) {
    throw ShapeError("polar retraction needs 1 <= k <= N, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_min = svd.singularValues().minCoeff();
  if (!(sigma_min > kTolRank)) {
    throw DegenerateInputError("frame is rank deficient", sigma_min);
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// √tr((A-B)†(A-B))
inline double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("frobenius_distance: shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
  return (a - b).norm();
}

}  // namespace holo
