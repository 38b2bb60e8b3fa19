#pragma once

#include "qfk/operator_core.hpp"
#include "qfk/rng.hpp"

namespace qfk {

/// Inner automorphism group alpha_s = Ad(exp(i s htilde)) with generator
/// delta = i[htilde, .], held in eigendecomposed form.
class AutomorphismGroup {
 public:
  explicit AutomorphismGroup(const Matrix& htilde);

  const Matrix& htilde() const { return htilde_; }
  const Matrix& eigenbasis() const { return eigvecs_; }
  const Eigen::VectorXd& eigenvalues() const { return eigvals_; }

  /// alpha_s(a) = e^{is htilde} a e^{-is htilde}.
  Matrix apply(double s, const Matrix& a) const;

  /// delta(x) = i [htilde, x].
  Matrix delta(const Matrix& x) const;

  /// Gaussian subordination: in the eigenbasis, entry (j,k) damps by
  /// exp(-(lambda_j - lambda_k)^2 t / 2).
  Matrix gaussian_semigroup(double t, const Matrix& a) const;

  /// E[alpha_{B_t}(a)] by Gauss-Hermite quadrature over the N(0,t) law.
  Matrix gauss_hermite(double t, const Matrix& a, int nodes) const;

  /// Seeded Monte Carlo average of alpha_{B_t}(a); demonstration only,
  /// never used in assertions.
  Matrix monte_carlo(double t, const Matrix& a, int samples, Rng& rng) const;

 private:
  Matrix htilde_;
  Matrix eigvecs_;
  Eigen::VectorXd eigvals_;
};

/// (1/2) delta^2(x) + delta(x) b.
Matrix ls_generator(const AutomorphismGroup& ag, const Matrix& b, const Matrix& x);

/// (1/2) delta^2(x) + b delta(x) + delta(x) b + b x b - (1/2)(b^2 x + x b^2);
/// b must be Hermitian.
Matrix bp_generator(const AutomorphismGroup& ag, const Matrix& b, const Matrix& x);

/// Physicists' Gauss-Hermite nodes and weights (weight exp(-x^2)) via the
/// Jacobi-matrix eigenproblem.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite_rule(int nodes);

}  // namespace qfk
