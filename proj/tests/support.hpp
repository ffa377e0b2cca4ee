#pragma once

#include <random>

#include <Eigen/QR>

#include "holo/matcore.hpp"

namespace holo::test {

inline CMatrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  CMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = Complex(dist(rng), dist(rng));
  return m;
}

/// Haar-distributed U(k): QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q.
inline CMatrix haar_unitary(Index k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian(k, k, rng));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  const CMatrix g = gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

inline CMatrix random_antihermitian(Index n, std::mt19937_64& rng) {
  const CMatrix g = gaussian(n, n, rng);
  return 0.5 * (g - g.adjoint());
}

inline CMatrix random_frame(Index n, Index k, std::mt19937_64& rng) {
  return haar_unitary(n, rng).leftCols(k);
}

}  // namespace holo::test
