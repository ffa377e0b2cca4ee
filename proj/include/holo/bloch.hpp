#pragma once

// Per-mode two-sphere geometry of a synthesized loop. In the basis
// diag(R, I_k) every mode j lives in span{(R e_j; 0), (0; e_j)}, where the
// loop's projector restricts to a rank-one 2×2 projector, i.e. a point on a
// Bloch sphere. Each nontrivial mode traces a circle on that sphere.

#include <span>
#include <vector>

#include "holo/synthesis.hpp"

namespace holo {

using Vec3 = Eigen::Vector3d;

/// N×2 isometry onto the two-level subspace of mode j.
inline CMatrix mode_basis(const CMatrix& rotation, Index j) {
  const Index k = rotation.rows();
  if (j < 0 || j >= k) throw DomainError("mode index " + std::to_string(j) + " out of range");
  CMatrix basis = CMatrix::Zero(2 * k, 2);
  basis.col(0).head(k) = rotation.col(j);
  basis(k + j, 1) = 1.0;
  return basis;
}

/// (tr Pσx, tr Pσy, tr Pσz) of the mode-restricted projector B† P B.
inline Vec3 bloch_vector(const CMatrix& projector, const CMatrix& basis) {
  const CMatrix p = basis.adjoint() * projector * basis;
  return {2.0 * p(0, 1).real(), -2.0 * p(0, 1).imag(), (p(0, 0) - p(1, 1)).real()};
}

/// Signed solid angle of the spherical triangle (r, a, b); positive when the
/// vertices run counterclockwise seen from outside the sphere.
inline double triangle_solid_angle(const Vec3& r, const Vec3& a, const Vec3& b) {
  const double numerator = r.dot(a.cross(b));
  const double denominator = 1.0 + r.dot(a) + r.dot(b) + a.dot(b);
  return 2.0 * std::atan2(numerator, denominator);
}

struct SolidAngleTrace {
  std::vector<double> accumulated;  ///< running solid angle, one per sample
  Vec3 axis;                        ///< circulation axis
};

/// Running area of the cap to the right of the direction of travel, i.e. the
/// cap the loop runs clockwise around; mode j then carries
/// Γ_j = exp(+iΘ_j/2).
///
/// a = normalize(Σ n_i × n_{i+1}) is the circulation axis. Each step adds
/// -T(-a, n_i, n_{i+1}) where T is the signed triangle area, evaluated as
/// 2Δφ - T(a, n_i, n_{i+1}) (Δφ the azimuth step about a) when the loop lies
/// nearer to -a, so the apex is never close to antipodal to the samples.
/// Loops that stay within 1e-9 of their start accumulate zero.
inline SolidAngleTrace accumulate_solid_angle(std::span<const Vec3> loop) {
  if (loop.size() < 2) throw DomainError("solid angle needs at least 2 samples");
  SolidAngleTrace trace{std::vector<double>(loop.size(), 0.0), Vec3(0.0, 0.0, 1.0)};
  double excursion = 0.0;
  for (const auto& n : loop) excursion = std::max(excursion, (n - loop.front()).norm());
  if (excursion <= 1e-9) return trace;

  Vec3 axis = Vec3::Zero();
  double height = 0.0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) axis += loop[i].cross(loop[i + 1]);
  axis.normalize();
  for (const auto& n : loop) height += axis.dot(n);
  trace.axis = axis;

  const bool near_axis = height > 0.0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[i + 1];
    double step;
    if (near_axis) {
      const Vec3 pa = a - axis.dot(a) * axis;
      const Vec3 pb = b - axis.dot(b) * axis;
      const double dphi = std::atan2(axis.dot(pa.cross(pb)), pa.dot(pb));
      step = 2.0 * dphi - triangle_solid_angle(axis, a, b);
    } else {
      step = -triangle_solid_angle(-axis, a, b);
    }
    trace.accumulated[i + 1] = trace.accumulated[i] + step;
  }
  return trace;
}

/// Bloch-sphere trajectory of mode j along a sampled frame path.
inline std::vector<Vec3> mode_bloch_loop(const FramePath& path, const CMatrix& rotation, Index j) {
  const CMatrix basis = mode_basis(rotation, j);
  std::vector<Vec3> out;
  out.reserve(path.size());
  for (const auto& s : path) {
    const CMatrix& v = s.frame.matrix();
    out.push_back(bloch_vector(v * v.adjoint(), basis));
  }
  return out;
}

}  // namespace holo
