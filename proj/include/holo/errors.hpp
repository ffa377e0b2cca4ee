#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural requirement (Hermitian, unitary, anti-Hermitian...).
class StructuralInputError : public Error {
 public:
  StructuralInputError(const std::string& what, double defect)
      : Error(what + " (defect " + std::to_string(defect) + ")"), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the admissible domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t iterations)
      : Error(what + " after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

class DegenerateInputError : public Error {
 public:
  DegenerateInputError(const std::string& what, double smallest_singular_value)
      : Error(what + " (smallest singular value " +
              std::to_string(smallest_singular_value) + ")"),
        sigma_min_(smallest_singular_value) {}
  double smallest_singular_value() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

/// Path endpoints do not project to the same Grassmann point.
class NotALoopError : public Error {
 public:
  NotALoopError(double closure_error, double tolerance)
      : Error("path is not a closed loop: closure error " + std::to_string(closure_error) +
              " exceeds " + std::to_string(tolerance)),
        closure_error_(closure_error) {}
  double closure_error() const noexcept { return closure_error_; }

 private:
  double closure_error_;
};

class HorizontalityError : public Error {
 public:
  HorizontalityError(double violation, double closure_error)
      : Error("path is not a horizontal loop: horizontal violation " +
              std::to_string(violation) + ", closure error " + std::to_string(closure_error)),
        violation_(violation),
        closure_error_(closure_error) {}
  double violation() const noexcept { return violation_; }
  double closure_error() const noexcept { return closure_error_; }

 private:
  double violation_;
  double closure_error_;
};

/// Projector samples are too far apart for the lift integrator.
class RefineSamplingError : public Error {
 public:
  RefineSamplingError(std::size_t step, double jump)
      : Error("projector jump " + std::to_string(jump) + " at step " + std::to_string(step) +
              " is too coarse; refine the sampling"),
        step_(step),
        jump_(jump) {}
  std::size_t step() const noexcept { return step_; }
  double jump() const noexcept { return jump_; }

 private:
  std::size_t step_;
  double jump_;
};

class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// The simulated state left the lower band: traversal too fast.
class AdiabaticityError : public Error {
 public:
  AdiabaticityError(double peak_leakage, double final_leakage)
      : Error("adiabaticity failure: peak leakage " + std::to_string(peak_leakage) +
              ", final leakage " + std::to_string(final_leakage)),
        peak_leakage_(peak_leakage),
        final_leakage_(final_leakage) {}
  double peak_leakage() const noexcept { return peak_leakage_; }
  double final_leakage() const noexcept { return final_leakage_; }

 private:
  double peak_leakage_;
  double final_leakage_;
};

}  // namespace holo
