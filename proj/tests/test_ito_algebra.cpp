#include <doctest.h>

#include <cmath>

#include "qfk/flow_engine.hpp"
#include "qfk/ito_algebra.hpp"
#include "qfk/rng.hpp"

using namespace qfk;

namespace {

Matrix pure_time_block(int n, int d, const Matrix& x) {
  Matrix b = Matrix::Zero((1 + d) * n, (1 + d) * n);
  b.block(0, 0, n, n) = x;
  return b;
}

Matrix pure_creation_block(int n, int d, const Matrix& l) {
  Matrix b = Matrix::Zero((1 + d) * n, (1 + d) * n);
  for (int k = 0; k < d; ++k) b.block((1 + k) * n, 0, n, n) = l;
  return b;
}

HPGenerator random_generator(Rng& rng, int n, int d) {
  std::vector<Matrix> l;
  for (int k = 0; k < d; ++k) l.push_back(rng.matrix(n, n));
  return HPGenerator(n, d, rng.hermitian(n), l, rng.unitary(d * n));
}

}  // namespace

TEST_SUITE("ito-algebra") {

TEST_CASE("zero integrand integrates to zero") {
  const LatticeParams params(2, 1, 4, 0.1);
  Rng rng(61);
  const BlockIntegrand g = constant_integrand(params, Matrix::Zero(4, 4));
  const StateVector v(params, rng.vector(int(params.dim())));
  CHECK(discrete_integral(g, 0, 4, v).norm() == 0.0);
}

TEST_CASE("pure time block is a Riemann sum") {
  const LatticeParams params(2, 1, 5, 0.07);
  Rng rng(62);
  const Matrix x = rng.matrix(2, 2);
  const BlockIntegrand g = constant_integrand(params, pure_time_block(2, 1, x));

  const Vector u = rng.vector(2), w = rng.vector(2);
  const Complex lhs =
      vacuum_vector(params, u).dot(discrete_integral(g, 0, 5, vacuum_vector(params, w)));
  const double t = 5 * params.h;
  CHECK(std::abs(lhs - t * u.dot(Vector(x * w))) < 1e-14);
}

TEST_CASE("integral norm estimate") {
  const LatticeParams params(2, 1, 6, 0.08);
  Rng rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix blocks = rng.matrix(4, 4);
    const BlockIntegrand g = constant_integrand(params, blocks);
    StateVector v(params, rng.vector(int(params.dim())));
    v *= 1.0 / v.norm();
    const double t = 6 * params.h;
    CHECK(discrete_integral(g, 0, 6, v).norm() <= g.norms().total(t) + 1e-12);
  }
}

TEST_CASE("matrix elements against discrete exponential vectors") {
  // Defining property of the integral: against exponential vectors the
  // matrix element is the integral of the fhat* G ghat contraction taken
  // through the vacuum-adapted pinch. On the lattice that Riemann sum is
  // exact; the continuum integral is approached at first order in h.
  Rng rng(64);
  const int n = 2, d = 1;
  const Matrix blocks = 0.7 * rng.matrix(4, 4);
  const Vector fval = 0.6 * rng.vector(d), gval = 0.6 * rng.vector(d);
  const Vector u = rng.vector(n), w = rng.vector(n);

  // fhat* G ghat contracts the khat components into an n x n matrix.
  Vector fhat(1 + d), ghat(1 + d);
  fhat(0) = 1.0;
  ghat(0) = 1.0;
  for (int k = 0; k < d; ++k) {
    fhat(1 + k) = fval(k);
    ghat(1 + k) = gval(k);
  }
  Matrix contracted = Matrix::Zero(n, n);
  for (int mu = 0; mu <= d; ++mu)
    for (int nu = 0; nu <= d; ++nu)
      contracted += std::conj(fhat(mu)) * ghat(nu) * blocks.block(mu * n, nu * n, n, n);

  // Continuum value for step functions constant in time:
  // int_0^t <u, c w> exp(s <f, g>) ds.
  const Complex fg = fval.dot(gval);
  const double t = 0.4;
  const Complex continuum =
      u.dot(Vector(contracted * w)) * (std::exp(t * fg) - 1.0) / fg;

  double prev = -1.0;
  for (int slices : {4, 8, 16}) {
    const double h = t / slices;
    const LatticeParams params(n, d, slices, h);
    const BlockIntegrand g = constant_integrand(params, blocks);

    const Vector fnoise = discrete_exponential(params, std::vector<Vector>(slices, fval));
    const Vector gnoise = discrete_exponential(params, std::vector<Vector>(slices, gval));
    const StateVector uf = tensor_with_initial(params, u, fnoise);
    const StateVector wg = tensor_with_initial(params, w, gnoise);

    const Complex lhs = uf.dot(discrete_integral(g, 0, slices, wg));

    // Slicewise pinched Riemann sum: exact on the lattice.
    Complex riemann = 0.0;
    for (int i = 0; i < slices; ++i)
      riemann += h * vacuum_projection(i, uf).dot(
                         apply_initial(contracted, vacuum_projection(i, wg)));
    CHECK(std::abs(lhs - riemann) < 1e-12);

    const double err = std::abs(lhs - continuum);
    if (prev > 0.0) {
      const double ratio = prev / err;
      CHECK(ratio > 1.4);
      CHECK(ratio < 2.9);
    }
    prev = err;
  }
}

TEST_CASE("product integrand structure") {
  const LatticeParams params(2, 1, 4, 0.1);
  Rng rng(65);

  SUBCASE("vanishing second factor") {
    const BlockIntegrand g = constant_integrand(params, rng.matrix(4, 4));
    const BlockIntegrand zero = constant_integrand(params, Matrix::Zero(4, 4));
    const BlockIntegrand h =
        ito_product_integrand(g, zero, integral_handle(g), integral_handle(zero));
    BlockVec in = BlockVec::zero(params);
    in.comp[0] = StateVector(params, rng.vector(int(params.dim())));
    in.comp[1] = StateVector(params, rng.vector(int(params.dim())));
    const BlockVec out = h.at(2, in);
    CHECK(out.comp[0].norm() == 0.0);
    CHECK(out.comp[1].norm() == 0.0);
  }

  SUBCASE("pure time blocks obey the classical product rule") {
    const Matrix x = rng.matrix(2, 2), y = rng.matrix(2, 2);
    const BlockIntegrand g = constant_integrand(params, pure_time_block(2, 1, x));
    const BlockIntegrand gp = constant_integrand(params, pure_time_block(2, 1, y));
    const ProcessHandle z = integral_handle(g), zp = integral_handle(gp);
    const BlockIntegrand h = ito_product_integrand(g, gp, z, zp);

    BlockVec in = BlockVec::zero(params);
    const StateVector v(params, rng.vector(int(params.dim())));
    in.comp[0] = v;
    in.comp[1] = StateVector(params, rng.vector(int(params.dim())));
    const BlockVec out = h.at(3, in);
    CHECK(out.comp[1].norm() == 0.0);  // no noise components
    const StateVector expected =
        z(3, apply_initial(y, v)) + apply_initial(x, zp(3, v));
    CHECK((out.comp[0] - expected).norm() < 1e-13);
  }

  SUBCASE("creation against creation has no Ito correction") {
    const Matrix b = rng.matrix(2, 2);
    const BlockIntegrand g = constant_integrand(params, pure_creation_block(2, 1, b));
    // The Delta-contraction term G Delta G' vanishes: creation columns
    // feed the time row of nothing.
    BlockVec in = BlockVec::zero(params);
    in.comp[0] = StateVector(params, rng.vector(int(params.dim())));
    const BlockVec g_of_in = g.at(1, in);
    BlockVec delta_only = g_of_in;
    delta_only.comp[0] = StateVector::zero(params);
    const BlockVec contraction = g.at(1, delta_only);
    CHECK(contraction.comp[0].norm() == 0.0);
    CHECK(contraction.comp[1].norm() == 0.0);
  }
}

TEST_CASE("two-factor product converges at first order") {
  Rng rng(66);
  const Matrix ga = 0.6 * rng.matrix(4, 4);
  const Matrix gb = 0.6 * rng.matrix(4, 4);

  Rng r1(101), r2(102);
  const LatticeParams coarse(2, 1, 5, 0.1);
  const LatticeParams fine(2, 1, 10, 0.05);
  const double res_coarse =
      ito_product_residual(constant_integrand(coarse, ga), constant_integrand(coarse, gb), 5, 3, r1);
  const double res_fine =
      ito_product_residual(constant_integrand(fine, ga), constant_integrand(fine, gb), 10, 3, r2);
  const double ratio = res_coarse / res_fine;
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.8);
}

TEST_CASE("three-factor product converges at first order") {
  Rng rng(67);
  const Matrix ga = 0.6 * rng.matrix(4, 4);
  const Matrix gb = 0.6 * rng.matrix(4, 4);
  const Matrix gc = 0.6 * rng.matrix(4, 4);

  Rng r1(103), r2(104);
  const LatticeParams coarse(2, 1, 5, 0.1);
  const LatticeParams fine(2, 1, 10, 0.05);
  const double res_coarse =
      ito_triple_residual(constant_integrand(coarse, ga), constant_integrand(coarse, gb),
                          constant_integrand(coarse, gc), 5, 3, r1);
  const double res_fine =
      ito_triple_residual(constant_integrand(fine, ga), constant_integrand(fine, gb),
                          constant_integrand(fine, gc), 10, 3, r2);
  const double ratio = res_coarse / res_fine;
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.8);
}

TEST_CASE("adapted operators pass inside the integral") {
  Rng rng(68);
  const LatticeParams params(2, 1, 6, 0.08);
  const HPGenerator gen = random_generator(rng, 2, 1);
  const FlowHandle flow(gen, params, Adaptedness::Vacuum);
  Matrix blocks = pure_creation_block(2, 1, rng.matrix(2, 2));
  blocks.block(0, 0, 2, 2) = rng.matrix(2, 2);  // time column allowed
  const BlockIntegrand g = constant_integrand(params, blocks);

  const int s = 3;
  const Matrix a = rng.matrix(2, 2);
  const LatticeOp x_s = [&](const StateVector& v) { return flow.flow_apply(a, s, v); };
  CHECK(inside_integral_residual(g, x_s, s, 6, 5, rng) <= 1e-10);
  CHECK(inside_integral_residual(g, x_s, s, s, 2, rng) == 0.0);  // empty window

  const LatticeOp id = [](const StateVector& v) { return v; };
  CHECK(inside_integral_residual(g, id, 2, 6, 2, rng) <= 1e-12);

  const BlockIntegrand bad = constant_integrand(params, rng.matrix(4, 4));
  CHECK_THROWS_AS(inside_integral_residual(bad, id, 0, 4, 1, rng), std::invalid_argument);
}

TEST_CASE("adjoint relation for constant integrands") {
  Rng rng(69);
  const LatticeParams params(2, 1, 5, 0.09);
  const Matrix blocks = rng.matrix(4, 4);
  const BlockIntegrand g = constant_integrand(params, blocks);
  const BlockIntegrand gdag = constant_integrand(params, Matrix(blocks.adjoint()));
  for (int trial = 0; trial < 5; ++trial) {
    const StateVector u(params, rng.vector(int(params.dim())));
    const StateVector v(params, rng.vector(int(params.dim())));
    const Complex lhs = discrete_integral(g, 0, 5, u).dot(v);
    const Complex rhs = u.dot(discrete_integral(gdag, 0, 5, v));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("positivity through the product formula") {
  // <v, (int H dL) v> with H built for Z* Z stays nonnegative.
  Rng rng(70);
  const LatticeParams params(2, 1, 5, 0.09);
  const Matrix blocks = rng.matrix(4, 4);
  const BlockIntegrand g = constant_integrand(params, blocks);
  const BlockIntegrand gdag = constant_integrand(params, Matrix(blocks.adjoint()));
  const BlockIntegrand h =
      ito_product_integrand(gdag, g, integral_handle(gdag), integral_handle(g));
  for (int trial = 0; trial < 5; ++trial) {
    StateVector v = vacuum_projection(5, StateVector(params, rng.vector(int(params.dim()))));
    v *= 1.0 / v.norm();
    // Compare the quadratic form against |Zv|^2 up to the lattice error,
    // and check it never dips below the tolerance floor.
    const double qform = v.dot(discrete_integral(h, 0, 5, v)).real();
    CHECK(qform >= -1e-10);
  }
}

}  // TEST_SUITE
