#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace qfk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Conjugate transpose.
inline Matrix adjoint(const Matrix& a) { return a.adjoint(); }

/// Kronecker product, row-major block convention:
/// (a ⊗ b)[(i,k),(j,l)] = a(i,j) b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Matrix exponential by scaling-and-squaring (Padé); square input only.
Matrix matrix_exp(const Matrix& a);

/// Largest singular value.
double spectral_norm(const Matrix& a);

/// Entrywise Hermiticity test: max |a - a*| <= tol.
bool is_hermitian(const Matrix& a, double tol = 1e-12);

/// Eigenvalues of a Hermitian matrix, ascending. Backed by Eigen's
/// self-adjoint solver (Householder tridiagonalisation + implicit QL/QR).
Eigen::VectorXd hermitian_eigenvalues(const Matrix& a);

/// True iff min eigenvalue >= -tol. Rejects input that is not Hermitian
/// within tol.
bool assert_psd(const Matrix& a, double tol);

Matrix identity(int n);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// Column-stacking vectorisation, fixed repo-wide.
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, int n);

/// Linear map on M_n represented as an n^2 x n^2 matrix acting on
/// column-stacked matrices.
class Superoperator {
 public:
  Superoperator(int n, Matrix mat);
  static Superoperator zero(int n);
  static Superoperator identity_map(int n);
  /// Sample a linear map on the n x n matrix units.
  static Superoperator from_map(int n, const std::function<Matrix(const Matrix&)>& phi);

  int dim() const { return n_; }
  const Matrix& matrix() const { return mat_; }
  Matrix apply(const Matrix& x) const;

  Superoperator operator-(const Superoperator& other) const;
  Superoperator operator+(const Superoperator& other) const;
  Superoperator& operator*=(double s);

 private:
  int n_;
  Matrix mat_;  // n^2 x n^2
};

/// x |-> left * x * right as a superoperator.
Superoperator superop_from_sandwich(const Matrix& left, const Matrix& right);

/// Choi matrix of a linear map on M_n: block (i,j) holds phi(E_ij).
/// The map is completely positive iff the result is PSD.
Matrix choi_matrix(int n, const std::function<Matrix(const Matrix&)>& phi);

/// Square matrix validated to be Hermitian within tol.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix m, double tol = 1e-12);
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

/// Square matrix validated to be unitary within tol in spectral norm.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, double tol = 1e-10);
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

}  // namespace qfk
