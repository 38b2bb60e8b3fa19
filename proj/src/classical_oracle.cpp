#include "qfk/classical_oracle.hpp"

#include <cmath>

namespace qfk {

AutomorphismGroup::AutomorphismGroup(const Matrix& htilde) : htilde_(htilde) {
  if (!is_hermitian(htilde_, 1e-12))
    throw std::invalid_argument("AutomorphismGroup: generator datum must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(htilde_);
  eigvecs_ = es.eigenvectors();
  eigvals_ = es.eigenvalues();
}

Matrix AutomorphismGroup::apply(double s, const Matrix& a) const {
  const Eigen::Index n = htilde_.rows();
  Vector phases(n);
  for (Eigen::Index j = 0; j < n; ++j) phases(j) = std::exp(kI * (s * eigvals_(j)));
  const Matrix u = eigvecs_ * phases.asDiagonal() * eigvecs_.adjoint();
  return u * a * u.adjoint();
}

Matrix AutomorphismGroup::delta(const Matrix& x) const {
  return kI * (htilde_ * x - x * htilde_);
}

Matrix AutomorphismGroup::gaussian_semigroup(double t, const Matrix& a) const {
  if (t < 0.0) throw std::invalid_argument("gaussian_semigroup: t must be nonnegative");
  Matrix ap = eigvecs_.adjoint() * a * eigvecs_;
  for (Eigen::Index j = 0; j < ap.rows(); ++j)
    for (Eigen::Index k = 0; k < ap.cols(); ++k) {
      const double gap = eigvals_(j) - eigvals_(k);
      ap(j, k) *= std::exp(-0.5 * gap * gap * t);
    }
  return eigvecs_ * ap * eigvecs_.adjoint();
}

Matrix AutomorphismGroup::gauss_hermite(double t, const Matrix& a, int nodes) const {
  if (nodes < 20) throw std::invalid_argument("gauss_hermite: at least 20 nodes required");
  const auto [x, w] = gauss_hermite_rule(nodes);
  const double scale = std::sqrt(2.0 * t);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (int i = 0; i < nodes; ++i) out += (w(i) * inv_sqrt_pi) * apply(scale * x(i), a);
  return out;
}

Matrix AutomorphismGroup::monte_carlo(double t, const Matrix& a, int samples, Rng& rng) const {
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  const double scale = std::sqrt(t);
  for (int i = 0; i < samples; ++i) out += apply(scale * rng.normal(), a);
  return out / double(samples);
}

Matrix ls_generator(const AutomorphismGroup& ag, const Matrix& b, const Matrix& x) {
  return 0.5 * ag.delta(ag.delta(x)) + ag.delta(x) * b;
}

Matrix bp_generator(const AutomorphismGroup& ag, const Matrix& b, const Matrix& x) {
  if (!is_hermitian(b, 1e-12))
    throw std::invalid_argument("bp_generator: b must be Hermitian");
  const Matrix dx = ag.delta(x);
  const Matrix b2 = b * b;
  return 0.5 * ag.delta(dx) + b * dx + dx * b + b * x * b - 0.5 * (b2 * x + x * b2);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite_rule(int nodes) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int i = 1; i < nodes; ++i) {
    const double beta = std::sqrt(i / 2.0);
    jacobi(i - 1, i) = beta;
    jacobi(i, i - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Eigen::VectorXd x = es.eigenvalues();
  Eigen::VectorXd w(nodes);
  const double mu0 = std::sqrt(M_PI);  // integral of exp(-x^2)
  for (int i = 0; i < nodes; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    w(i) = mu0 * v0 * v0;
  }
  return {x, w};
}

}  // namespace qfk
