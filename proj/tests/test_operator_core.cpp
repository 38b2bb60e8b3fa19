#include <doctest.h>

#include "qfk/operator_core.hpp"
#include "qfk/rng.hpp"

using namespace qfk;

namespace {

// Series oracle: sum_{m<=terms} A^m / m!, independent of matrix_exp.
Matrix exp_series(const Matrix& a, int terms) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  Matrix term = out;
  for (int m = 1; m <= terms; ++m) {
    term = term * a / double(m);
    out += term;
  }
  return out;
}

}  // namespace

TEST_SUITE("operator-core") {

TEST_CASE("adjoint on basic matrices") {
  CHECK((adjoint(identity(2)) - identity(2)).norm() == 0.0);

  Matrix e01 = Matrix::Zero(2, 2);
  e01(0, 1) = 1.0;
  Matrix e10 = Matrix::Zero(2, 2);
  e10(1, 0) = 1.0;
  CHECK((adjoint(e01) - e10).norm() == 0.0);

  CHECK((adjoint(pauli_y()) - pauli_y()).norm() == 0.0);
}

TEST_CASE("kron basics and compatibilities") {
  CHECK((kron(identity(2), identity(3)) - identity(6)).norm() == 0.0);

  Matrix two(1, 1);
  two << 2.0;
  Matrix expect(2, 2);
  expect << 0, 2, 2, 0;
  CHECK((kron(pauli_x(), two) - expect).norm() == 0.0);

  Matrix d12 = Vector{{1.0, 2.0}}.asDiagonal();
  Matrix d34 = Vector{{3.0, 4.0}}.asDiagonal();
  Matrix d = Vector{{3.0, 4.0, 6.0, 8.0}}.asDiagonal();
  CHECK((kron(d12, d34) - d).norm() == 0.0);

  Rng rng(11);
  // Exact associativity on small-integer entries (products stay exact);
  // generic complex entries carry one rounding per factor.
  auto int_matrix = [&rng](int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        m(i, j) = Complex(double(int(rng.next_u64() % 5)) - 2.0,
                          double(int(rng.next_u64() % 5)) - 2.0);
    return m;
  };
  const Matrix ai = int_matrix(2, 3), bi = int_matrix(3, 2), ci = int_matrix(2, 2);
  CHECK((kron(kron(ai, bi), ci) - kron(ai, kron(bi, ci))).norm() == 0.0);
  const Matrix a = rng.matrix(2, 3), b = rng.matrix(3, 2), c = rng.matrix(2, 2);
  CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((adjoint(kron(a, b)) - kron(adjoint(a), adjoint(b))).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("matrix_exp against the series oracle") {
  CHECK((matrix_exp(Matrix::Zero(3, 3)) - identity(3)).cwiseAbs().maxCoeff() == 0.0);

  Matrix diag = Vector{{1.0, 2.0}}.asDiagonal();
  Matrix ediag = Vector{{std::exp(1.0), std::exp(2.0)}}.asDiagonal();
  CHECK(spectral_norm(matrix_exp(diag) - ediag) < 1e-13);

  const Matrix arg = kI * (M_PI / 2.0) * pauli_x();
  const Matrix oracle = exp_series(arg, 20);
  CHECK(spectral_norm(oracle - Matrix(kI * pauli_x())) < 1e-12);
  CHECK(spectral_norm(matrix_exp(arg) - oracle) < 1e-12);

  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = rng.matrix(4, 4);
    a *= 10.0 / spectral_norm(a);
    CHECK(spectral_norm(matrix_exp(a) * matrix_exp(Matrix(-a)) - identity(4)) < 1e-10);
  }

  CHECK_THROWS_AS(matrix_exp(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("matrix_exp is multiplicative on commuting pairs") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = Matrix(rng.vector(3).asDiagonal());
    const Matrix b = Matrix(rng.vector(3).asDiagonal());
    CHECK(spectral_norm(matrix_exp(a + b) - matrix_exp(a) * matrix_exp(b)) < 1e-10);
  }
}

TEST_CASE("spectral_norm values and submultiplicativity") {
  CHECK(spectral_norm(identity(4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_norm(Matrix(Vector{{3.0, -5.0}}.asDiagonal())) ==
        doctest::Approx(5.0).epsilon(1e-12));
  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 2.0;
  CHECK(spectral_norm(nil) == doctest::Approx(2.0).epsilon(1e-12));

  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = rng.matrix(3, 3), b = rng.matrix(3, 3);
    CHECK(spectral_norm(a * b) <= spectral_norm(a) * spectral_norm(b) + 1e-9);
  }
}

TEST_CASE("choi matrix characterises complete positivity") {
  const Matrix choi_id = choi_matrix(2, [](const Matrix& x) { return x; });
  const Eigen::VectorXd eig = hermitian_eigenvalues(choi_id);
  CHECK(eig(3) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(eig(0)) < 1e-12);
  CHECK(std::abs(eig(1)) < 1e-12);
  CHECK(std::abs(eig(2)) < 1e-12);

  const Matrix choi_dep =
      choi_matrix(2, [](const Matrix& x) { return Matrix(x.trace() * identity(2) / 2.0); });
  CHECK(spectral_norm(choi_dep - identity(4) / 2.0) < 1e-14);

  const Matrix choi_tr = choi_matrix(2, [](const Matrix& x) { return Matrix(x.transpose()); });
  CHECK(hermitian_eigenvalues(choi_tr).minCoeff() == doctest::Approx(-1.0).epsilon(1e-12));

  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix v = rng.matrix(2, 2);
    const Matrix choi =
        choi_matrix(2, [&](const Matrix& x) { return Matrix(v.adjoint() * x * v); });
    CHECK(assert_psd(choi, 1e-10));
  }
}

TEST_CASE("assert_psd tolerances and Hermiticity guard") {
  CHECK(assert_psd(identity(3), 1e-10));
  CHECK_FALSE(assert_psd(Matrix(Vector{{1.0, -1e-3}}.asDiagonal()), 1e-10));
  CHECK(assert_psd(Matrix(Vector{{1.0, -1e-12}}.asDiagonal()), 1e-10));

  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(assert_psd(skew, 1e-10), std::invalid_argument);
}

TEST_CASE("superop_from_sandwich acts as left.x.right") {
  const Superoperator id = superop_from_sandwich(identity(2), identity(2));
  Rng rng(16);
  const Matrix x = rng.matrix(2, 2);
  CHECK(spectral_norm(id.apply(x) - x) < 1e-14);

  const Superoperator leftz = superop_from_sandwich(pauli_z(), identity(2));
  CHECK(spectral_norm(leftz.apply(pauli_x()) - Matrix(kI * pauli_y())) < 1e-14);

  const Superoperator flip = superop_from_sandwich(pauli_x(), pauli_x());
  CHECK(spectral_norm(flip.apply(Matrix(Vector{{1.0, 0.0}}.asDiagonal())) -
                      Matrix(Vector{{0.0, 1.0}}.asDiagonal())) < 1e-14);

  // Action on matrix units matches the dense construction.
  const Matrix l = rng.matrix(3, 3), r = rng.matrix(3, 3);
  const Superoperator s = superop_from_sandwich(l, r);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix unit = Matrix::Zero(3, 3);
      unit(i, j) = 1.0;
      CHECK(spectral_norm(s.apply(unit) - l * unit * r) < 1e-13);
    }
}

TEST_CASE("vec and unvec invert each other") {
  Rng rng(17);
  const Matrix x = rng.matrix(4, 4);
  CHECK((unvec(vec(x), 4) - x).norm() == 0.0);
}

TEST_CASE("validated matrix wrappers") {
  CHECK_NOTHROW(HermitianMatrix(pauli_y()));
  CHECK_THROWS_AS(HermitianMatrix(Matrix(kI * pauli_x())), std::invalid_argument);
  CHECK_NOTHROW(UnitaryMatrix(Matrix((pauli_x() + pauli_z()) / std::sqrt(2.0))));
  CHECK_THROWS_AS(UnitaryMatrix(Matrix(2.0 * identity(2))), std::invalid_argument);
}

}  // TEST_SUITE
