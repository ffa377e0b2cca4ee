#pragma once

// Numerical holonomy engines: the time-ordered product of the connection along
// an arbitrary frame loop, the horizontal-lift transporter over a projector
// loop, and holonomy extraction from a horizontal frame loop.

#include <algorithm>
#include <future>
#include <string_view>
#include <vector>

#include "holo/manifold.hpp"

namespace holo {

enum class HolonomyMethod { analytic, ordered_product, lifted_ode };

inline std::string_view to_string(HolonomyMethod m) {
  switch (m) {
    case HolonomyMethod::analytic: return "analytic";
    case HolonomyMethod::ordered_product: return "ordered_product";
    case HolonomyMethod::lifted_ode: return "lifted_ode";
  }
  return "unknown";
}

struct HolonomyReport {
  CMatrix gamma;  ///< k×k, projected onto U(k)
  double closure_error = 0.0;
  double horizontal_violation = 0.0;
  double unitarity_defect = 0.0;  ///< of the raw estimate, before projection
  HolonomyMethod method = HolonomyMethod::analytic;
};

struct LoopTolerances {
  double loop = 1e-6;
  double horizontal = 1e-2;
};

/// ‖V(T)V(T)† - V(0)V(0)†‖_F
inline double closure_error(const FramePath& path) {
  const CMatrix& a = path.front().frame.matrix();
  const CMatrix& b = path.back().frame.matrix();
  return (b * b.adjoint() - a * a.adjoint()).norm();
}

/// Midpoint estimate of A(t_mid)·Δt between consecutive frames: the
/// anti-Hermitian part of V̄†(V_b - V_a), with V̄ the polar retraction of the
/// frame average. Error O(Δt³) per step.
inline AntiHermitian connection_increment(const CMatrix& va, const CMatrix& vb) {
  const CMatrix mid = polar_retract(0.5 * (va + vb));
  return AntiHermitian::project(mid.adjoint() * (vb - va));
}

namespace detail {

// E_{end-1} ··· E_{begin} with E_m = exp(-K_m).
inline CMatrix ordered_segment(const std::vector<AntiHermitian>& increments, std::size_t begin,
                               std::size_t end, Index k) {
  CMatrix product = CMatrix::Identity(k, k);
  for (std::size_t m = begin; m < end; ++m) product = expm_antihermitian(-increments[m]) * product;
  return product;
}

inline CMatrix unitary_part(const CMatrix& g) {
  return polar_retract(g);
}

}  // namespace detail

/// Γ = V(0)† V(T) · T exp(-∫ V†dV), the time-ordered exponential discretized as
/// the midpoint product Π exp(-A(t_m + Δ/2) Δ). `segments > 1` evaluates
/// contiguous partial products concurrently and multiplies them in order.
inline HolonomyReport ordered_product_holonomy(const FramePath& path, double tol_loop = 1e-6,
                                               unsigned segments = 1) {
  const double closure = closure_error(path);
  if (closure > tol_loop) throw NotALoopError(closure, tol_loop);

  const Index k = path.rank();
  const std::size_t steps = path.size() - 1;
  std::vector<AntiHermitian> increments;
  increments.reserve(steps);
  double violation = 0.0;
  for (std::size_t m = 0; m < steps; ++m) {
    increments.push_back(connection_increment(path[m].frame.matrix(), path[m + 1].frame.matrix()));
    violation = std::max(violation, increments.back().matrix().norm() / (path[m + 1].t - path[m].t));
  }

  segments = std::clamp<unsigned>(segments, 1u, static_cast<unsigned>(std::max<std::size_t>(steps, 1)));
  CMatrix transport;
  if (segments == 1) {
    transport = detail::ordered_segment(increments, 0, steps, k);
  } else {
    std::vector<std::future<CMatrix>> parts;
    for (unsigned s = 0; s < segments; ++s) {
      const std::size_t begin = steps * s / segments;
      const std::size_t end = steps * (s + 1) / segments;
      parts.push_back(std::async(std::launch::async, [&increments, begin, end, k] {
        return detail::ordered_segment(increments, begin, end, k);
      }));
    }
    transport = CMatrix::Identity(k, k);
    for (auto& part : parts) transport = part.get() * transport;
  }

  const CMatrix raw = path.front().frame.matrix().adjoint() * path.back().frame.matrix() * transport;
  return {detail::unitary_part(raw), closure, violation, unitarity_defect(raw),
          HolonomyMethod::ordered_product};
}

inline constexpr double kMaxProjectorJump = 0.5;
inline constexpr double kTolStartFrame = 1e-8;

/// Horizontal lift of a sampled projector curve starting at `start`.
///
/// Integrates dV/dt = [Ṗ, P] V, whose solution satisfies V†V̇ = 0 and
/// VV† = P. Each step applies exp of the midpoint generator; with Ṗ taken as
/// the difference quotient across the step and P as the step average, the
/// generator collapses to [P_{m+1}, P_m]. The frame is polar-retracted after
/// every step.
inline FramePath horizontal_lift(const ProjectorPath& projectors, const StiefelFrame& start) {
  if (projectors.size() < 2) throw DomainError("horizontal_lift needs at least 2 projector samples");
  const Index n = projectors.front().point.ambient_dim();
  if (start.ambient_dim() != n || start.rank() != projectors.front().point.rank()) {
    throw ShapeError("horizontal_lift: start frame shape does not match the projector path");
  }
  const double mismatch = (project(start).matrix() - projectors.front().point.matrix()).norm();
  if (mismatch > kTolStartFrame) {
    throw DomainError("horizontal_lift: start frame does not project to P(0) (mismatch " +
                      std::to_string(mismatch) + ")");
  }

  std::vector<FrameSample> out;
  out.reserve(projectors.size());
  out.push_back({projectors.front().t, start});
  CMatrix v = start.matrix();
  for (std::size_t m = 0; m + 1 < projectors.size(); ++m) {
    const CMatrix& pa = projectors[m].point.matrix();
    const CMatrix& pb = projectors[m + 1].point.matrix();
    if (projectors[m + 1].point.ambient_dim() != n) {
      throw ShapeError("horizontal_lift: projector samples disagree in N");
    }
    const double jump = (pb - pa).norm();
    if (jump >= kMaxProjectorJump) throw RefineSamplingError(m, jump);
    const AntiHermitian step(CMatrix(pb * pa - pa * pb), 1e-10);
    v = polar_retract(expm_antihermitian(step) * v);
    out.push_back({projectors[m + 1].t, StiefelFrame(v)});
  }
  return FramePath(std::move(out));
}

struct LiftedHolonomy {
  FramePath lift;
  HolonomyReport report;
};

/// Holonomy read off the horizontal lift of a closed projector loop:
/// Γ = polar(V(0)† V(T)). `report.closure_error` is the integrator drift of
/// the lifted endpoint away from the base loop.
inline LiftedHolonomy lifted_holonomy(const ProjectorPath& projectors, const StiefelFrame& start,
                                      double tol_loop = 1e-6) {
  if (projectors.size() < 2) throw DomainError("lifted_holonomy needs at least 2 projector samples");
  const double base_closure =
      (projectors.back().point.matrix() - projectors.front().point.matrix()).norm();
  if (base_closure > tol_loop) throw NotALoopError(base_closure, tol_loop);

  FramePath lift = horizontal_lift(projectors, start);
  const CMatrix raw = lift.front().frame.matrix().adjoint() * lift.back().frame.matrix();
  const double violation = lift.size() >= 3 ? is_horizontal(lift, 0.0).max_violation : 0.0;
  HolonomyReport report{detail::unitary_part(raw), closure_error(lift), violation,
                        unitarity_defect(raw), HolonomyMethod::lifted_ode};
  return {std::move(lift), std::move(report)};
}

/// ‖V(T) - V(0)Γ‖_F: residual of the defining relation V(T) = V(0)Γ.
inline double transport_residual(const FramePath& lift, const CMatrix& gamma) {
  return (lift.back().frame.matrix() - lift.front().frame.matrix() * gamma).norm();
}

/// Γ = V(0)† V(T) for a horizontal loop, projected onto U(k).
inline HolonomyReport holonomy_of_horizontal_loop(const FramePath& path, LoopTolerances tol = {}) {
  const double closure = closure_error(path);
  const double violation = is_horizontal(path, tol.horizontal).max_violation;
  if (closure > tol.loop || violation > tol.horizontal) {
    throw HorizontalityError(violation, closure);
  }
  const CMatrix raw = path.front().frame.matrix().adjoint() * path.back().frame.matrix();
  // Closed-form reduction of the ordered product, so it reports as analytic.
  return {detail::unitary_part(raw), closure, violation, unitarity_defect(raw),
          HolonomyMethod::analytic};
}

}  // namespace holo
