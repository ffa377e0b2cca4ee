#pragma once

// Closed-form horizontal extremal curves V(t) = e^{tX} V0 e^{-tΩ} with
// Ω = V0† X V0, generated by a constant controller X = [[Ω, W], [-W†, 0]].

#include <string>
#include <utility>
#include <vector>

#include "holo/holonomy.hpp"
#include "holo/manifold.hpp"

namespace holo {

/// The controller X ∈ u(2k) in block form. Ω and W are stored separately and
/// X is assembled on demand, so the lower-right block is zero by construction.
class Controller {
 public:
  Controller(AntiHermitian omega, CMatrix w) : omega_(std::move(omega)), w_(std::move(w)) {
    require_finite(w_, "controller block W");
    if (w_.rows() != omega_.dim() || w_.cols() != omega_.dim()) {
      throw ShapeError("controller block W must be k×k (N = 2k); got " + std::to_string(w_.rows()) +
                       "x" + std::to_string(w_.cols()) + " for k = " + std::to_string(omega_.dim()));
    }
    if (omega_.dim() < 1) throw ShapeError("controller needs k >= 1");
  }

  Index k() const noexcept { return omega_.dim(); }
  Index ambient_dim() const noexcept { return 2 * omega_.dim(); }
  const AntiHermitian& omega() const noexcept { return omega_; }
  const CMatrix& w() const noexcept { return w_; }

  AntiHermitian generator() const {
    const Index k = this->k();
    CMatrix x = CMatrix::Zero(2 * k, 2 * k);
    x.topLeftCorner(k, k) = omega_.matrix();
    x.topRightCorner(k, k) = w_;
    x.bottomLeftCorner(k, k) = -w_.adjoint();
    return AntiHermitian(std::move(x));
  }

 private:
  AntiHermitian omega_;
  CMatrix w_;
};

/// Horizontal extremal curve on [0, T]. The controller is normalized to unit
/// time: V(t) = B e^{(t/T)X} V0 e^{-(t/T)Ω}, where B is an optional unitary
/// moving the canonical base point V0 = (I_k; 0) to B·V0.
class ExtremalCurve {
 public:
  explicit ExtremalCurve(Controller controller, double duration = 1.0)
      : ExtremalCurve(controller, duration, CMatrix::Identity(controller.ambient_dim(), controller.ambient_dim())) {}

  ExtremalCurve(Controller controller, double duration, CMatrix base_rotation)
      : controller_(std::move(controller)), duration_(duration), base_(std::move(base_rotation)) {
    if (!(duration_ > 0.0)) throw DomainError("extremal curve duration must be positive");
    const Index n = controller_.ambient_dim();
    if (base_.rows() != n || base_.cols() != n) throw ShapeError("base rotation must be N×N");
    const double defect = unitarity_defect(base_);
    if (defect > 1e-10) throw StructuralInputError("base rotation is not unitary", defect);
    x_flow_ = UnitaryFlow(controller_.generator());
    omega_flow_ = UnitaryFlow(controller_.omega());
  }

  const Controller& controller() const noexcept { return controller_; }
  double duration() const noexcept { return duration_; }
  const CMatrix& base_rotation() const noexcept { return base_; }
  Index ambient_dim() const noexcept { return controller_.ambient_dim(); }
  Index rank() const noexcept { return controller_.k(); }

  StiefelFrame initial_frame() const {
    return StiefelFrame(CMatrix(base_.leftCols(controller_.k())));
  }

  /// B X B†, the generator acting on the rotated base point.
  CMatrix effective_generator() const {
    return base_ * controller_.generator().matrix() * base_.adjoint();
  }

  StiefelFrame evaluate(double t) const {
    if (!(t >= 0.0 && t <= duration_)) {
      throw DomainError("extremal curve evaluated at t = " + std::to_string(t) + " outside [0, " +
                        std::to_string(duration_) + "]");
    }
    const double s = t / duration_;
    const Index k = controller_.k();
    const CMatrix head = x_flow_.at(s).leftCols(k);
    return StiefelFrame(CMatrix(base_ * head * omega_flow_.at(-s)));
  }

  /// Uniform grid t_i = T·i/(n-1).
  FramePath sample(std::size_t n_samples) const {
    if (n_samples < 2) throw DomainError("sample needs n_samples >= 2");
    std::vector<FrameSample> out;
    out.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double t = i + 1 == n_samples ? duration_
                                          : duration_ * static_cast<double>(i) /
                                                static_cast<double>(n_samples - 1);
      out.push_back({t, evaluate(t)});
    }
    return FramePath(std::move(out));
  }

 private:
  Controller controller_;
  double duration_;
  CMatrix base_;
  UnitaryFlow x_flow_;
  UnitaryFlow omega_flow_;
};

/// Samples of the gauge-transformed frame V(t)·e^{(t/T)Θ}: the same projector
/// loop traversed by a non-horizontal frame. Θ with spectrum in 2πiZ keeps the
/// frame loop closed.
inline FramePath gauge_twisted_sample(const ExtremalCurve& curve, const AntiHermitian& twist,
                                      std::size_t n_samples) {
  if (twist.dim() != curve.rank()) throw ShapeError("gauge twist must be k×k");
  const UnitaryFlow flow(twist);
  const FramePath base = curve.sample(n_samples);
  std::vector<FrameSample> out;
  out.reserve(base.size());
  for (const auto& s : base) {
    out.push_back({s.t, s.frame.gauge(flow.at(s.t / curve.duration()))});
  }
  return FramePath(std::move(out));
}

/// ‖X - (PX + XP - PXP)‖_F with P = V0 V0†. Accepts a raw X so that
/// externally supplied generators with Z ≠ 0 can be measured.
inline double constraint_residual(const CMatrix& x, const StiefelFrame& v0) {
  if (x.rows() != v0.ambient_dim() || x.cols() != v0.ambient_dim()) {
    throw ShapeError("constraint_residual: generator must be N×N");
  }
  const CMatrix p = v0.matrix() * v0.matrix().adjoint();
  return (x - (p * x + x * p - p * x * p)).norm();
}

inline double constraint_residual(const Controller& controller, const StiefelFrame& v0) {
  return constraint_residual(controller.generator().matrix(), v0);
}

/// max_t ‖V(t)† X V(t) - Ω‖_F over a uniform grid.
inline double omega_drift(const ExtremalCurve& curve, std::size_t n_samples) {
  const CMatrix x = curve.effective_generator();
  const CMatrix& omega = curve.controller().omega().matrix();
  double worst = 0.0;
  for (const auto& s : curve.sample(n_samples)) {
    const CMatrix& v = s.frame.matrix();
    worst = std::max(worst, (v.adjoint() * x * v - omega).norm());
  }
  return worst;
}

/// Length √tr(WW†)·T of t ↦ e^{tX} V0 e^{-tΩ} on [0, T]; the speed is constant
/// because V̇†V̇ = W W† along the curve.
inline double analytic_length(const Controller& controller, double duration = 1.0) {
  return controller.w().norm() * duration;
}

/// Γ = V(0)† V(T) = V0† e^X V0 e^{-Ω} evaluated in closed form.
inline HolonomyReport analytic_holonomy(const ExtremalCurve& curve) {
  const StiefelFrame v0 = curve.initial_frame();
  const StiefelFrame vt = curve.evaluate(curve.duration());
  const CMatrix raw = v0.matrix().adjoint() * vt.matrix();
  const CMatrix p0 = v0.matrix() * v0.matrix().adjoint();
  const CMatrix pt = vt.matrix() * vt.matrix().adjoint();
  return {raw, (pt - p0).norm(), 0.0, unitarity_defect(raw), HolonomyMethod::analytic};
}

}  // namespace holo
