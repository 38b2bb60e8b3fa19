#pragma once

#include <cmath>
#include <cstdint>

#include "qfk/operator_core.hpp"

namespace qfk {

/// Deterministic 64-bit generator (splitmix64), fixed repo-wide so that
/// seeded test values reproduce across machines. Normal variates use
/// Box-Muller on the raw stream; no library distributions are involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4b7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Complex standard normal, E|z|^2 = 1.
  Complex cnormal() { return Complex(normal(), normal()) / std::sqrt(2.0); }

  Matrix matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cnormal();
    return m;
  }

  Matrix hermitian(int n) {
    Matrix g = matrix(n, n);
    return (g + Matrix(g.adjoint())) / 2.0;
  }

  /// Haar-ish unitary: QR of a Gaussian matrix with phase-fixed diagonal.
  Matrix unitary(int n) {
    Matrix g = matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
      Complex rjj = r(j, j);
      double a = std::abs(rjj);
      q.col(j) *= (a > 0) ? rjj / a : Complex(1.0, 0.0);
    }
    return q;
  }

  Vector vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

  Vector unit_vector(int n) {
    Vector v = vector(n);
    return v / v.norm();
  }

 private:
  std::uint64_t state_;
};

}  // namespace qfk
