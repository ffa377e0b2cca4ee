#pragma once

// The homogeneous bundle S_{N,k}(C) -> G_{N,k}(C): orthonormal frames, rank-k
// projectors, sampled paths, the canonical connection V†dV, the two metrics
// and the constrained length functional.

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "holo/matcore.hpp"

namespace holo {

inline constexpr double kTolStiefel = 1e-10;
inline constexpr double kTolGrassmann = 1e-10;
inline constexpr double kTolGrassmannTrace = 1e-8;

/// N×k matrix with orthonormal columns.
class StiefelFrame {
 public:
  explicit StiefelFrame(CMatrix v, double tol = kTolStiefel) : v_(std::move(v)) {
    require_finite(v_, "Stiefel frame");
    if (v_.cols() < 1 || v_.cols() > v_.rows()) {
      throw ShapeError("Stiefel frame needs 1 <= k <= N, got " + std::to_string(v_.rows()) + "x" +
                       std::to_string(v_.cols()));
    }
    const double defect = unitarity_defect(v_);
    if (defect > tol) throw StructuralInputError("columns are not orthonormal", defect);
  }

  /// (I_k; 0)
  static StiefelFrame canonical(Index n, Index k) {
    return StiefelFrame(CMatrix::Identity(n, k));
  }

  static StiefelFrame retract(const CMatrix& m) { return StiefelFrame(polar_retract(m)); }

  Index ambient_dim() const noexcept { return v_.rows(); }
  Index rank() const noexcept { return v_.cols(); }
  const CMatrix& matrix() const noexcept { return v_; }

  /// Right action V ↦ V h of h ∈ U(k).
  StiefelFrame gauge(const CMatrix& h) const { return StiefelFrame(CMatrix(v_ * h)); }

 private:
  CMatrix v_;
};

/// Orthogonal projector of rank k in C^N.
class GrassmannPoint {
 public:
  explicit GrassmannPoint(CMatrix p) : p_(std::move(p)) {
    require_square(p_, "projector");
    require_finite(p_, "projector");
    const double idem = max_abs(p_ * p_ - p_);
    if (idem > kTolGrassmann) throw StructuralInputError("projector is not idempotent", idem);
    const double herm = hermiticity_defect(p_);
    if (herm > kTolGrassmann) throw StructuralInputError("projector is not Hermitian", herm);
    const double trace = p_.trace().real();
    rank_ = static_cast<Index>(std::lround(trace));
    if (std::abs(trace - static_cast<double>(rank_)) > kTolGrassmannTrace) {
      throw StructuralInputError("projector trace is not an integer",
                                 std::abs(trace - static_cast<double>(rank_)));
    }
  }

  Index ambient_dim() const noexcept { return p_.rows(); }
  Index rank() const noexcept { return rank_; }
  const CMatrix& matrix() const noexcept { return p_; }

 private:
  CMatrix p_;
  Index rank_ = 0;
};

struct FrameSample {
  double t;
  StiefelFrame frame;
};

/// Time-ordered samples of a frame curve V(t); grid may be non-uniform.
class FramePath {
 public:
  explicit FramePath(std::vector<FrameSample> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) throw DomainError("a frame path needs at least 2 samples");
    const Index n = samples_.front().frame.ambient_dim();
    const Index k = samples_.front().frame.rank();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto& s = samples_[i];
      if (s.frame.ambient_dim() != n || s.frame.rank() != k) {
        throw ShapeError("frame path samples disagree in (N, k) at index " + std::to_string(i));
      }
      if (i > 0 && !(s.t > samples_[i - 1].t)) {
        throw DomainError("frame path times must be strictly increasing (index " +
                          std::to_string(i) + ")");
      }
    }
  }

  std::size_t size() const noexcept { return samples_.size(); }
  const FrameSample& operator[](std::size_t i) const { return samples_[i]; }
  const FrameSample& front() const { return samples_.front(); }
  const FrameSample& back() const { return samples_.back(); }
  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }
  Index ambient_dim() const { return samples_.front().frame.ambient_dim(); }
  Index rank() const { return samples_.front().frame.rank(); }
  double duration() const { return samples_.back().t - samples_.front().t; }

 private:
  std::vector<FrameSample> samples_;
};

struct ProjectorSample {
  double t;
  GrassmannPoint point;
};
using ProjectorPath = std::vector<ProjectorSample>;

/// π: V ↦ VV†
inline GrassmannPoint project(const StiefelFrame& v) {
  return GrassmannPoint(CMatrix(v.matrix() * v.matrix().adjoint()));
}

inline ProjectorPath projector_path(const FramePath& path) {
  ProjectorPath out;
  out.reserve(path.size());
  for (const auto& s : path) out.push_back({s.t, project(s.frame)});
  return out;
}

/// V†·V̇, the canonical connection evaluated on a tangent sample.
inline CMatrix connection_sample(const StiefelFrame& v, const CMatrix& vdot) {
  if (vdot.rows() != v.ambient_dim() || vdot.cols() != v.rank()) {
    throw ShapeError("connection_sample: velocity shape does not match frame");
  }
  require_finite(vdot, "frame velocity");
  return v.matrix().adjoint() * vdot;
}

namespace detail {

// Three-point derivative weights at the middle node for spacings h_minus, h_plus.
inline std::array<double, 3> centered_weights(double hm, double hp) {
  return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

}  // namespace detail

/// dV/dt at every sample: centered (non-uniform three-point) in the interior,
/// one-sided three-point at the ends (two-point when only two samples exist).
inline std::vector<CMatrix> frame_velocities(const FramePath& path) {
  const std::size_t n = path.size();
  std::vector<CMatrix> out(n);
  auto v = [&](std::size_t i) -> const CMatrix& { return path[i].frame.matrix(); };
  auto t = [&](std::size_t i) { return path[i].t; };
  if (n == 2) {
    const CMatrix d = (v(1) - v(0)) / (t(1) - t(0));
    out[0] = d;
    out[1] = d;
    return out;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto w = detail::centered_weights(t(i) - t(i - 1), t(i + 1) - t(i));
    out[i] = w[0] * v(i - 1) + w[1] * v(i) + w[2] * v(i + 1);
  }
  {
    const double h1 = t(1) - t(0), h2 = t(2) - t(1);
    const double a = -(2 * h1 + h2) / (h1 * (h1 + h2));
    const double b = (h1 + h2) / (h1 * h2);
    const double c = -h1 / (h2 * (h1 + h2));
    out[0] = a * v(0) + b * v(1) + c * v(2);
  }
  {
    const std::size_t m = n - 1;
    const double h1 = t(m) - t(m - 1), h2 = t(m - 1) - t(m - 2);
    const double a = (2 * h1 + h2) / (h1 * (h1 + h2));
    const double b = -(h1 + h2) / (h1 * h2);
    const double c = h1 / (h2 * (h1 + h2));
    out[m] = a * v(m) + b * v(m - 1) + c * v(m - 2);
  }
  return out;
}

struct HorizontalityCheck {
  bool horizontal;
  double max_violation;
};

/// Max over interior samples of ‖V†·dV/dt‖_F against `tol`.
inline HorizontalityCheck is_horizontal(const FramePath& path, double tol) {
  if (path.size() < 3) throw DomainError("is_horizontal needs at least 3 samples");
  const auto vel = frame_velocities(path);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    worst = std::max(worst, connection_sample(path[i].frame, vel[i]).norm());
  }
  return {worst <= tol, worst};
}

/// ∫ { tr(V̇†V̇) - tr(Ω V†V̇) } dt by the trapezoidal rule. An empty
/// `omega_path` means Ω ≡ 0.
inline double action_functional(const FramePath& path, std::span<const AntiHermitian> omega_path = {}) {
  if (!omega_path.empty() && omega_path.size() != path.size()) {
    throw ShapeError("action_functional: multiplier path has " + std::to_string(omega_path.size()) +
                     " samples, frame path has " + std::to_string(path.size()));
  }
  for (const auto& om : omega_path) {
    if (om.dim() != path.rank()) throw ShapeError("action_functional: multiplier must be k×k");
  }
  const auto vel = frame_velocities(path);
  std::vector<double> integrand(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    double value = (vel[i].adjoint() * vel[i]).trace().real();
    if (!omega_path.empty()) {
      value -= (omega_path[i].matrix() * connection_sample(path[i].frame, vel[i])).trace().real();
    }
    integrand[i] = value;
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    total += 0.5 * (integrand[i] + integrand[i + 1]) * (path[i + 1].t - path[i].t);
  }
  return total;
}

/// Chordal length Σ √tr(ΔP ΔP) in the metric ‖dP‖² = tr(dP dP).
inline double grassmann_path_length(const ProjectorPath& path) {
  if (path.size() < 2) throw DomainError("grassmann_path_length needs at least 2 samples");
  const Index n = path.front().point.ambient_dim();
  const Index k = path.front().point.rank();
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& a = path[i].point;
    const auto& b = path[i + 1].point;
    if (b.ambient_dim() != n || b.rank() != k) {
      throw ShapeError("grassmann_path_length: samples disagree in (N, k)");
    }
    const CMatrix d = b.matrix() - a.matrix();
    length += std::sqrt(std::max(0.0, (d * d).trace().real()));
  }
  return length;
}

/// Chordal length Σ ‖ΔV‖_F in the metric ‖dV‖² = tr(dV† dV).
inline double stiefel_path_length(const FramePath& path) {
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    length += frobenius_distance(path[i + 1].frame.matrix(), path[i].frame.matrix());
  }
  return length;
}

}  // namespace holo
