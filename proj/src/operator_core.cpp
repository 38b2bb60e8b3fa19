#include "qfk/operator_core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qfk {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix matrix_exp(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("matrix_exp: input must be square");
  return a.exp();
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool assert_psd(const Matrix& a, double tol) {
  if (!is_hermitian(a, tol))
    throw std::invalid_argument("assert_psd: input is not Hermitian within tolerance");
  return hermitian_eigenvalues((a + Matrix(a.adjoint())) / 2.0).minCoeff() >= -tol;
}

Matrix identity(int n) { return Matrix::Identity(n, n); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Vector vec(const Matrix& x) {
  Vector v(x.size());
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) v(idx++) = x(i, j);
  return v;
}

Matrix unvec(const Vector& v, int n) {
  if (v.size() != Eigen::Index(n) * n)
    throw std::invalid_argument("unvec: size mismatch");
  Matrix x(n, n);
  Eigen::Index idx = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = v(idx++);
  return x;
}

Superoperator::Superoperator(int n, Matrix mat) : n_(n), mat_(std::move(mat)) {
  if (mat_.rows() != Eigen::Index(n) * n || mat_.cols() != Eigen::Index(n) * n)
    throw std::invalid_argument("Superoperator: matrix must be n^2 x n^2");
}

Superoperator Superoperator::zero(int n) {
  return Superoperator(n, Matrix::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n));
}

Superoperator Superoperator::identity_map(int n) {
  return Superoperator(n, Matrix::Identity(Eigen::Index(n) * n, Eigen::Index(n) * n));
}

Superoperator Superoperator::from_map(int n, const std::function<Matrix(const Matrix&)>& phi) {
  Matrix mat(Eigen::Index(n) * n, Eigen::Index(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = 1.0;
      mat.col(j * n + i) = vec(phi(unit));
    }
  }
  return Superoperator(n, std::move(mat));
}

Matrix Superoperator::apply(const Matrix& x) const { return unvec(mat_ * vec(x), n_); }

Superoperator Superoperator::operator-(const Superoperator& other) const {
  if (n_ != other.n_) throw std::invalid_argument("Superoperator: dimension mismatch");
  return Superoperator(n_, mat_ - other.mat_);
}

Superoperator Superoperator::operator+(const Superoperator& other) const {
  if (n_ != other.n_) throw std::invalid_argument("Superoperator: dimension mismatch");
  return Superoperator(n_, mat_ + other.mat_);
}

Superoperator& Superoperator::operator*=(double s) {
  mat_ *= s;
  return *this;
}

Superoperator superop_from_sandwich(const Matrix& left, const Matrix& right) {
  if (left.rows() != left.cols() || right.rows() != right.cols() || left.rows() != right.rows())
    throw std::invalid_argument("superop_from_sandwich: square matching dims required");
  // vec(L x R) = (R^T kron L) vec(x) under column stacking.
  return Superoperator(int(left.rows()), kron(right.transpose(), left));
}

Matrix choi_matrix(int n, const std::function<Matrix(const Matrix&)>& phi) {
  Matrix choi = Matrix::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = 1.0;
      choi.block(Eigen::Index(i) * n, Eigen::Index(j) * n, n, n) = phi(unit);
    }
  }
  return choi;
}

HermitianMatrix::HermitianMatrix(Matrix m, double tol) : m_(std::move(m)) {
  if (!is_hermitian(m_, tol))
    throw std::invalid_argument("HermitianMatrix: not Hermitian within tolerance");
}

UnitaryMatrix::UnitaryMatrix(Matrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw std::invalid_argument("UnitaryMatrix: not square");
  Matrix residual = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
  if (spectral_norm(residual) > tol)
    throw std::invalid_argument("UnitaryMatrix: not unitary within tolerance");
}

}  // namespace qfk
