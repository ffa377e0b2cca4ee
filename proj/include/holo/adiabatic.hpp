#pragma once

// Schrödinger-equation verification of synthesized holonomies (ħ = 1).
//
// The Hamiltonian H(τ) = ε1(τ) P(τ) + ε2(τ) (I - P(τ)) drags its lower band
// P = VV† around an extremal loop during physical time T_total, τ = t/T_total.
// For slow traversal the state stays in the band and returns multiplied by
// the holonomy times the dynamical phase e^{-i∫ε1 dt}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "holo/extremal.hpp"
#include "holo/holonomy.hpp"

namespace holo {

/// How the curve parameter advances with scaled time τ ∈ [0, 1].
enum class Traversal {
  uniform,  ///< s = τ
  smooth,   ///< s = τ - sin(2πτ)/(2π): zero velocity at both ends
};

inline double traversal_position(Traversal traversal, double tau) {
  switch (traversal) {
    case Traversal::uniform: return tau;
    case Traversal::smooth: return tau - std::sin(2.0 * kPi * tau) / (2.0 * kPi);
  }
  return tau;
}

inline std::string_view to_string(Traversal t) {
  return t == Traversal::uniform ? "uniform" : "smooth";
}

using EnergyProfile = std::function<double(double)>;

inline constexpr double kDefaultGapMin = 1e-6;
inline constexpr std::size_t kGapGrid = 1001;

class HamiltonianSchedule {
 public:
  HamiltonianSchedule(ExtremalCurve curve, EnergyProfile eps1, EnergyProfile eps2, double t_total,
                      Traversal traversal = Traversal::smooth,
                      std::optional<AntiHermitian> gauge_twist = std::nullopt,
                      double gap_min = kDefaultGapMin)
      : curve_(std::move(curve)),
        eps1_(std::move(eps1)),
        eps2_(std::move(eps2)),
        t_total_(t_total),
        traversal_(traversal) {
    if (!(t_total_ > 0.0) || !std::isfinite(t_total_)) {
      throw DomainError("traversal time must be positive and finite");
    }
    if (!(gap_min > 0.0)) throw DomainError("minimum gap must be positive");
    if (gauge_twist) {
      if (gauge_twist->dim() != curve_.rank()) throw ShapeError("gauge twist must be k×k");
      twist_ = UnitaryFlow(*gauge_twist);
    }
    double smallest_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kGapGrid; ++i) {
      const double tau = static_cast<double>(i) / static_cast<double>(kGapGrid - 1);
      const double e1 = eps1_(tau), e2 = eps2_(tau);
      if (!std::isfinite(e1) || !std::isfinite(e2)) throw DomainError("band energy is not finite");
      smallest_gap = std::min(smallest_gap, e2 - e1);
      max_energy_ = std::max({max_energy_, std::abs(e1), std::abs(e2)});
    }
    if (smallest_gap < gap_min) {
      throw DomainError("band gap " + std::to_string(smallest_gap) + " is below the minimum " +
                        std::to_string(gap_min));
    }
  }

  /// Constant energies ε1 = 0, ε2 = gap.
  static HamiltonianSchedule two_band(ExtremalCurve curve, double gap, double t_total,
                                      Traversal traversal = Traversal::smooth) {
    return HamiltonianSchedule(std::move(curve), [](double) { return 0.0; },
                               [gap](double) { return gap; }, t_total, traversal);
  }

  const ExtremalCurve& curve() const noexcept { return curve_; }
  double t_total() const noexcept { return t_total_; }
  Traversal traversal() const noexcept { return traversal_; }
  /// max |ε| over the construction grid, i.e. the spectral norm bound of H.
  double max_energy() const noexcept { return max_energy_; }
  Index ambient_dim() const noexcept { return curve_.ambient_dim(); }
  Index rank() const noexcept { return curve_.rank(); }

  double eps1(double tau) const { return eps1_(tau); }
  double eps2(double tau) const { return eps2_(tau); }

  StiefelFrame frame(double tau) const {
    const double s = std::clamp(traversal_position(traversal_, tau), 0.0, 1.0);
    StiefelFrame v = curve_.evaluate(s * curve_.duration());
    if (twist_) return v.gauge(twist_->at(s));
    return v;
  }

  CMatrix band_projector(double tau) const {
    const StiefelFrame v = frame(tau);
    return v.matrix() * v.matrix().adjoint();
  }

  CMatrix hamiltonian(double tau) const {
    const Index n = ambient_dim();
    const double e1 = eps1_(tau), e2 = eps2_(tau);
    return e2 * CMatrix::Identity(n, n) + (e1 - e2) * band_projector(tau);
  }

 private:
  ExtremalCurve curve_;
  EnergyProfile eps1_;
  EnergyProfile eps2_;
  double t_total_;
  Traversal traversal_;
  std::optional<UnitaryFlow> twist_;
  double max_energy_ = 0.0;
};

inline constexpr double kTolNormalization = 1e-9;

/// Normalized state vector in C^N.
class StateVector {
 public:
  explicit StateVector(CVector psi) : psi_(std::move(psi)) {
    require_finite(psi_, "state vector");
    const double defect = std::abs(psi_.norm() - 1.0);
    if (defect > kTolNormalization) throw StructuralInputError("state vector is not normalized", defect);
  }

  const CVector& amplitudes() const noexcept { return psi_; }
  Index dim() const noexcept { return psi_.size(); }

 private:
  CVector psi_;
};

inline constexpr double kMaxStepPhase = 0.1;

/// Steps with max‖H‖·Δt = 0.02, but never fewer than 1000.
inline std::size_t default_steps(const HamiltonianSchedule& schedule) {
  const double needed = 50.0 * schedule.max_energy() * schedule.t_total();
  return std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil(needed)));
}

namespace detail {

inline void check_step_size(const HamiltonianSchedule& schedule, std::size_t n_steps) {
  if (n_steps == 0) throw StepSizeError("at least one integration step is required");
  const double phase = schedule.max_energy() * schedule.t_total() / static_cast<double>(n_steps);
  if (phase > kMaxStepPhase) {
    throw StepSizeError("step too large: max|H|·Δt = " + std::to_string(phase) + " exceeds " +
                        std::to_string(kMaxStepPhase) + "; use at least " +
                        std::to_string(static_cast<std::size_t>(std::ceil(
                            schedule.max_energy() * schedule.t_total() / kMaxStepPhase))) +
                        " steps");
  }
}

inline double midpoint(std::size_t m, std::size_t n) {
  return (static_cast<double>(m) + 0.5) / static_cast<double>(n);
}

inline double grid(std::size_t m, std::size_t n) {
  return m == n ? 1.0 : static_cast<double>(m) / static_cast<double>(n);
}

}  // namespace detail

struct Evolution {
  StateVector state;
  double peak_leakage;  ///< max over steps of ‖(I - P(τ))ψ(τ)‖
  std::size_t steps;
};

/// Integrates i dψ/dt = H(t)ψ with the exponential midpoint rule
/// ψ ← exp(-i H(t_m + Δt/2) Δt) ψ, which is exactly unitary per step.
inline Evolution evolve(const HamiltonianSchedule& schedule, const StateVector& psi0, std::size_t n_steps) {
  if (psi0.dim() != schedule.ambient_dim()) throw ShapeError("state dimension does not match schedule");
  detail::check_step_size(schedule, n_steps);
  const double dt = schedule.t_total() / static_cast<double>(n_steps);
  CVector psi = psi0.amplitudes();
  double peak = 0.0;
  for (std::size_t m = 0; m < n_steps; ++m) {
    const auto eig = hermitian_eig(schedule.hamiltonian(detail::midpoint(m, n_steps)));
    CVector phases(eig.eigenvalues.size());
    for (Index j = 0; j < phases.size(); ++j) phases(j) = std::polar(1.0, -eig.eigenvalues(j) * dt);
    psi = eig.eigenvectors * (phases.asDiagonal() * (eig.eigenvectors.adjoint() * psi));
    const CMatrix p = schedule.band_projector(detail::grid(m + 1, n_steps));
    peak = std::max(peak, (psi - p * psi).norm());
  }
  return {StateVector(std::move(psi)), peak, n_steps};
}

/// Integrates dφ/dt + V†(dV/dt) φ = -i ε1 φ on the schedule's frame, one
/// exponential factor exp(-A Δτ - i ε1 Δt) per step with A from the midpoint
/// connection increment.
inline CVector reduced_evolution(const HamiltonianSchedule& schedule, const CVector& phi0, std::size_t n_steps) {
  if (phi0.size() != schedule.rank()) throw ShapeError("reduced state dimension must equal k");
  require_finite(phi0, "reduced state");
  detail::check_step_size(schedule, n_steps);
  const double dt = schedule.t_total() / static_cast<double>(n_steps);
  const Index k = schedule.rank();
  CVector phi = phi0;
  CMatrix previous = schedule.frame(0.0).matrix();
  for (std::size_t m = 0; m < n_steps; ++m) {
    const CMatrix next = schedule.frame(detail::grid(m + 1, n_steps)).matrix();
    const AntiHermitian increment = connection_increment(previous, next);
    const double energy = schedule.eps1(detail::midpoint(m, n_steps));
    const CMatrix step = -increment.matrix() - kI * (energy * dt) * CMatrix::Identity(k, k);
    phi = expm_antihermitian(AntiHermitian(step)) * phi;
    previous = next;
  }
  return phi;
}

/// ∫_0^{T_total} ε1 dt by the same midpoint rule the integrators use.
inline double dynamical_phase_integral(const HamiltonianSchedule& schedule, std::size_t n_steps) {
  const double dt = schedule.t_total() / static_cast<double>(n_steps);
  double total = 0.0;
  for (std::size_t m = 0; m < n_steps; ++m) total += schedule.eps1(detail::midpoint(m, n_steps)) * dt;
  return total;
}

inline constexpr double kMaxLeakage = 0.5;
inline constexpr double kTolScheduleLoop = 1e-6;

struct HolonomyEstimate {
  CVector action;        ///< e^{+i∫ε1} V(0)† ψ(T), the simulated Γ φ(0)
  double leakage;        ///< ‖(I - V(0)V(0)†) ψ(T)‖
  double peak_leakage;   ///< largest out-of-band norm seen during the evolution
  double dynamical_phase;
};

/// Strips the dynamical phase and projects the final state onto the initial
/// band. Throws AdiabaticityError when the out-of-band norm exceeded 0.5 at
/// any point of the evolution.
inline HolonomyEstimate extract_holonomy(const Evolution& evolution, const HamiltonianSchedule& schedule) {
  const CMatrix p0 = schedule.band_projector(0.0);
  const double loop = (schedule.band_projector(1.0) - p0).norm();
  if (loop > kTolScheduleLoop) throw NotALoopError(loop, kTolScheduleLoop);
  const CVector& psi = evolution.state.amplitudes();
  const double leakage = (psi - p0 * psi).norm();
  const double peak = std::max(evolution.peak_leakage, leakage);
  if (peak > kMaxLeakage) throw AdiabaticityError(peak, leakage);
  const double dyn = dynamical_phase_integral(schedule, evolution.steps);
  const CVector action = std::polar(1.0, dyn) * (schedule.frame(0.0).matrix().adjoint() * psi);
  return {action, leakage, peak, dyn};
}

struct SimulatedHolonomy {
  CMatrix gamma;        ///< k×k, column j from the run started in V(0)e_j
  double leakage;       ///< max over runs
  double peak_leakage;  ///< max over runs
};

inline SimulatedHolonomy simulate_holonomy(const HamiltonianSchedule& schedule, std::size_t n_steps) {
  const Index k = schedule.rank();
  const CMatrix v0 = schedule.frame(0.0).matrix();
  SimulatedHolonomy out{CMatrix(k, k), 0.0, 0.0};
  for (Index j = 0; j < k; ++j) {
    const Evolution run = evolve(schedule, StateVector(CVector(v0.col(j))), n_steps);
    const HolonomyEstimate est = extract_holonomy(run, schedule);
    out.gamma.col(j) = est.action;
    out.leakage = std::max(out.leakage, est.leakage);
    out.peak_leakage = std::max(out.peak_leakage, est.peak_leakage);
  }
  return out;
}

}  // namespace holo
