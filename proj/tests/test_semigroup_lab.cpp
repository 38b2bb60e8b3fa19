#include <doctest.h>

#include <cmath>

#include "qfk/classical_oracle.hpp"
#include "qfk/rng.hpp"
#include "qfk/semigroup_lab.hpp"

using namespace qfk;

namespace {

HPGenerator trivial_generator(int n, int d) {
  return HPGenerator(n, d, Matrix::Zero(n, n), std::vector<Matrix>(d, Matrix::Zero(n, n)),
                     identity(d * n));
}

HPGenerator random_generator(Rng& rng, int n, int d) {
  std::vector<Matrix> l;
  for (int k = 0; k < d; ++k) l.push_back(rng.matrix(n, n));
  return HPGenerator(n, d, rng.hermitian(n), l, rng.unitary(d * n));
}

PerturbedSemigroup make_ps(const HPGenerator& gen, const LatticeParams& params,
                           const MultiplierCoeff& c, const MultiplierCoeff& d) {
  return PerturbedSemigroup(FlowHandle(gen, params, Adaptedness::Vacuum), c, d);
}

}  // namespace

TEST_SUITE("semigroup-lab") {

TEST_CASE("element values") {
  Rng rng(81);
  const LatticeParams params(2, 1, 6, 0.05);
  const HPGenerator gen = gaussian_generator(pauli_z());
  const MultiplierCoeff zero = MultiplierCoeff::zero(2, 1);
  const PerturbedSemigroup ps = make_ps(gen, params, zero, zero);

  const Matrix a = rng.matrix(2, 2);
  CHECK(spectral_norm(ps.element(a, 0) - a) == 0.0);

  // Zero coefficients reproduce the vacuum-expectation semigroup.
  const FlowHandle flow(gen, params, Adaptedness::Vacuum);
  CHECK(spectral_norm(ps.element(a, 6) - flow.vacuum_semigroup_element(a, 6)) <= 1e-13);

  // Conservative coefficients keep the identity near the identity.
  const MultiplierCoeff uc = unitary_conj_coeff(pauli_z(), {pauli_x()});
  const PerturbedSemigroup psu = make_ps(gen, params, uc, uc);
  CHECK(spectral_norm(psu.element(identity(2), 6) - identity(2)) < 5 * params.h);
}

TEST_CASE("semigroup law on the lattice") {
  Rng rng(82);
  const LatticeParams params(2, 1, 8, 0.06);

  SUBCASE("degenerate splits are exact") {
    const PerturbedSemigroup ps = make_ps(gaussian_generator(pauli_z()), params,
                                          MultiplierCoeff::zero(2, 1),
                                          MultiplierCoeff::zero(2, 1));
    CHECK(ps.semigroup_property_residual(0, 5) <= 1e-12);
    CHECK(ps.semigroup_property_residual(5, 0) <= 1e-12);
  }

  SUBCASE("gaussian preset") {
    const PerturbedSemigroup ps = make_ps(gaussian_generator(pauli_z()), params,
                                          MultiplierCoeff::zero(2, 1),
                                          MultiplierCoeff::zero(2, 1));
    for (int s : {1, 4, 7}) CHECK(ps.semigroup_property_residual(s, 8 - s) <= 1e-9);
  }

  SUBCASE("asymmetric coefficients with a random flow") {
    const HPGenerator gen = random_generator(rng, 2, 1);
    const MultiplierCoeff c(rng.matrix(2, 2), {rng.matrix(2, 2)});
    const MultiplierCoeff d(rng.matrix(2, 2), {rng.matrix(2, 2)});
    const PerturbedSemigroup ps = make_ps(gen, params, c, d);
    for (int s : {2, 4, 6}) CHECK(ps.semigroup_property_residual(s, 8 - s) <= 1e-9);
  }
}

TEST_CASE("complete positivity via the Choi matrix") {
  const LatticeParams params(2, 1, 6, 0.08);
  const HPGenerator gen = gaussian_generator(pauli_z());
  const MultiplierCoeff zero = MultiplierCoeff::zero(2, 1);

  SUBCASE("vacuum-expectation semigroup") {
    const PerturbedSemigroup ps = make_ps(gen, params, zero, zero);
    for (int t = 0; t <= 6; ++t) CHECK(ps.cp_min_choi_eigenvalue(t) >= -1e-9);
    // At t = 0 the Choi spectrum is that of the identity map.
    const PerturbedSemigroup ps0 = make_ps(gen, params, zero, zero);
    const Matrix choi = choi_matrix(2, [&](const Matrix& x) { return ps0.element(x, 0); });
    CHECK(hermitian_eigenvalues(choi).maxCoeff() == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("unitary-conjugation coefficients") {
    const MultiplierCoeff uc = unitary_conj_coeff(pauli_z(), {pauli_x()});
    const PerturbedSemigroup ps = make_ps(gen, params, uc, uc);
    for (int t = 0; t <= 6; ++t) CHECK(ps.cp_min_choi_eigenvalue(t) >= -1e-9);
  }

  SUBCASE("mismatched coefficients are rejected") {
    Rng rng(83);
    const MultiplierCoeff d(rng.matrix(2, 2), {rng.matrix(2, 2)});
    const PerturbedSemigroup ps = make_ps(gen, params, zero, d);
    CHECK_THROWS_AS(ps.cp_min_choi_eigenvalue(2), std::invalid_argument);
  }
}

TEST_CASE("finite-difference generator extraction") {
  SUBCASE("trivial flow is exact") {
    const LatticeParams params(2, 1, 2, 0.05);
    const MultiplierCoeff zero = MultiplierCoeff::zero(2, 1);
    const PerturbedSemigroup ps = make_ps(trivial_generator(2, 1), params, zero, zero);
    const GeneratorEstimate est = generator_fd(ps, FdScheme::Euler);
    CHECK(spectral_norm(est.tau_exact.matrix()) == 0.0);
    CHECK(est.error <= 1e-12);
  }

  SUBCASE("gaussian generator value and Euler order") {
    const HPGenerator gen = gaussian_generator(pauli_z());
    const MultiplierCoeff zero = MultiplierCoeff::zero(2, 1);
    const Superoperator tau = exact_tau_superop(gen, zero, zero);
    CHECK(spectral_norm(tau.apply(pauli_x()) + 2.0 * pauli_x()) < 1e-13);

    double prev = -1.0;
    for (double h : {0.1, 0.05, 0.025}) {
      const LatticeParams params(2, 1, 2, h);
      const GeneratorEstimate est =
          generator_fd(make_ps(gen, params, zero, zero), FdScheme::Euler);
      if (prev > 0.0) {
        const double ratio = prev / est.error;
        CHECK(ratio > 1.6);
        CHECK(ratio < 2.5);
      }
      prev = est.error;
    }
  }

  SUBCASE("Richardson cancels the first-order bias") {
    const HPGenerator gen = gaussian_generator(pauli_z());
    const Matrix b = pauli_x();
    const MultiplierCoeff bp(Matrix(-0.5 * b * b), {b});
    const LatticeParams params(2, 1, 2, 0.025);
    const PerturbedSemigroup ps = make_ps(gen, params, bp, bp);
    const GeneratorEstimate rich = generator_fd(ps, FdScheme::Richardson);
    const GeneratorEstimate euler = generator_fd(ps, FdScheme::Euler);
    CHECK(rich.error <= 0.05);
    CHECK(rich.error < euler.error);

    const LatticeParams short_lattice(2, 1, 1, 0.025);
    CHECK_THROWS_AS(generator_fd(make_ps(gen, short_lattice, bp, bp), FdScheme::Richardson),
                    std::invalid_argument);
  }
}

TEST_CASE("superoperator exponential oracle") {
  Rng rng(84);
  const Matrix a = rng.matrix(2, 2);
  const Superoperator zero = Superoperator::zero(2);
  CHECK(spectral_norm(oracle_semigroup(zero, 0.7, a) - a) < 1e-14);

  const HPGenerator gen = gaussian_generator(pauli_z());
  const MultiplierCoeff z = MultiplierCoeff::zero(2, 1);
  const Superoperator tau0 = exact_tau_superop(gen, z, z);
  CHECK(spectral_norm(oracle_semigroup(tau0, 0.0, a) - a) < 1e-14);
  CHECK(spectral_norm(oracle_semigroup(tau0, 0.5, pauli_x()) - std::exp(-1.0) * pauli_x()) <
        1e-12);
}

TEST_CASE("convergence study") {
  const MultiplierCoeff zero = MultiplierCoeff::zero(2, 1);

  SUBCASE("trivial flow is flagged exact") {
    const auto points = convergence_study(trivial_generator(2, 1), zero, zero, pauli_x(), 0.4,
                                          {0.1, 0.05, 0.025});
    for (const auto& p : points) CHECK(p.error <= 1e-12);
    for (double order : fitted_orders(points)) CHECK(std::isnan(order));
  }

  SUBCASE("gaussian and unitary-conjugation instances converge at order one") {
    const HPGenerator gen = gaussian_generator(pauli_z());
    const auto points =
        convergence_study(gen, zero, zero, pauli_x(), 0.5, {0.1, 0.05, 0.025});
    for (double order : fitted_orders(points)) {
      CHECK(order > 0.7);
      CHECK(order < 1.3);
    }

    const MultiplierCoeff uc = unitary_conj_coeff(pauli_z(), {pauli_x()});
    const auto points_uc = convergence_study(gen, uc, uc, pauli_x(), 0.5, {0.1, 0.05, 0.025});
    for (double order : fitted_orders(points_uc)) {
      CHECK(order > 0.7);
      CHECK(order < 1.3);
    }
  }

  SUBCASE("misaligned times are rejected") {
    CHECK_THROWS_AS(convergence_study(trivial_generator(2, 1), zero, zero, pauli_x(), 0.5,
                                      {0.15}),
                    std::invalid_argument);
  }
}

TEST_CASE("hermiticity of the perturbed semigroup") {
  Rng rng(85);
  const LatticeParams params(2, 1, 6, 0.07);
  const HPGenerator gen = random_generator(rng, 2, 1);
  const MultiplierCoeff c(rng.matrix(2, 2), {rng.matrix(2, 2)});
  const MultiplierCoeff d(rng.matrix(2, 2), {rng.matrix(2, 2)});
  const PerturbedSemigroup ps = make_ps(gen, params, c, d);
  const PerturbedSemigroup swapped = make_ps(gen, params, d, c);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = rng.matrix(2, 2);
    CHECK(spectral_norm(Matrix(ps.element(x, 6).adjoint()) -
                        swapped.element(Matrix(x.adjoint()), 6)) <= 1e-10);
  }
}

}  // TEST_SUITE
