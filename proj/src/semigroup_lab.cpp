#include "qfk/semigroup_lab.hpp"

#include <cmath>
#include <limits>

namespace qfk {

PerturbedSemigroup::PerturbedSemigroup(FlowHandle flow, MultiplierCoeff c, MultiplierCoeff d)
    : flow_(flow), left_(std::move(c), flow), right_(std::move(d), flow) {
  if (flow_.mode() != Adaptedness::Vacuum)
    throw std::invalid_argument("PerturbedSemigroup: flow must be vacuum-adapted");
}

Matrix PerturbedSemigroup::element(const Matrix& a, int t_idx) const {
  const LatticeParams& params = flow_.params();
  const int n = params.n;
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("PerturbedSemigroup: a must match the algebra dimension");
  if (t_idx < 0 || t_idx > params.num_slices)
    throw std::invalid_argument("PerturbedSemigroup: time index out of range");

  std::vector<StateVector> bras;
  bras.reserve(n);
  Matrix out(n, n);
  for (int p = 0; p < n; ++p) {
    Vector e = Vector::Zero(n);
    e(p) = 1.0;
    bras.push_back(left_.apply(t_idx, vacuum_vector(params, e)));
  }
  for (int q = 0; q < n; ++q) {
    Vector e = Vector::Zero(n);
    e(q) = 1.0;
    const StateVector ket =
        flow_.flow_apply(a, t_idx, right_.apply(t_idx, vacuum_vector(params, e)));
    for (int p = 0; p < n; ++p) out(p, q) = bras[p].dot(ket);
  }
  return out;
}

Superoperator PerturbedSemigroup::superop(int t_idx) const {
  return Superoperator::from_map(flow_.params().n,
                                 [&](const Matrix& x) { return element(x, t_idx); });
}

double PerturbedSemigroup::semigroup_property_residual(int s_idx, int t_idx) const {
  const int n = flow_.params().n;
  if (s_idx + t_idx > flow_.params().num_slices)
    throw std::invalid_argument("semigroup_property_residual: s + t exceeds the lattice");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = 1.0;
      const Matrix lhs = element(unit, s_idx + t_idx);
      const Matrix rhs = element(element(unit, t_idx), s_idx);
      worst = std::max(worst, spectral_norm(lhs - rhs));
    }
  return worst;
}

double PerturbedSemigroup::cp_min_choi_eigenvalue(int t_idx) const {
  if (!(left_.coeff() == right_.coeff()))
    throw std::invalid_argument(
        "cp_min_choi_eigenvalue: complete positivity is only claimed for equal coefficients");
  const int n = flow_.params().n;
  const Matrix choi = choi_matrix(n, [&](const Matrix& x) { return element(x, t_idx); });
  const Matrix herm = (choi + Matrix(choi.adjoint())) / 2.0;
  return hermitian_eigenvalues(herm).minCoeff();
}

Superoperator exact_tau_superop(const HPGenerator& gen, const MultiplierCoeff& c,
                                const MultiplierCoeff& d) {
  const StructureBlocks psi = psi_from_phi(phi_from_hp(gen));
  return Superoperator::from_map(gen.n,
                                 [&](const Matrix& x) { return tau_gen(psi, c, d, x); });
}

namespace {

Superoperator one_step_quotient(const HPGenerator& gen, const MultiplierCoeff& c,
                                const MultiplierCoeff& d, double h) {
  const LatticeParams params(gen.n, gen.d, 1, h);
  const PerturbedSemigroup ps(FlowHandle(gen, params, Adaptedness::Vacuum), c, d);
  const Superoperator t_h = ps.superop(1);
  Superoperator diff = t_h - Superoperator::identity_map(gen.n);
  diff *= 1.0 / h;
  return diff;
}

}  // namespace

GeneratorEstimate generator_fd(const PerturbedSemigroup& ps, FdScheme scheme) {
  const HPGenerator& gen = ps.flow().generator();
  const double h = ps.flow().params().h;
  const Superoperator tau_exact = exact_tau_superop(gen, ps.left_coeff(), ps.right_coeff());

  Superoperator tau_hat = Superoperator::zero(gen.n);
  if (scheme == FdScheme::Euler) {
    tau_hat = one_step_quotient(gen, ps.left_coeff(), ps.right_coeff(), h);
  } else {
    if (ps.flow().params().num_slices < 2)
      throw std::invalid_argument("generator_fd: Richardson needs at least two slices");
    const Superoperator d1 = one_step_quotient(gen, ps.left_coeff(), ps.right_coeff(), h);
    const Superoperator d2 = one_step_quotient(gen, ps.left_coeff(), ps.right_coeff(), 2.0 * h);
    Superoperator two_d1 = d1;
    two_d1 *= 2.0;
    tau_hat = two_d1 - d2;
  }
  const double error = spectral_norm(tau_hat.matrix() - tau_exact.matrix());
  return {tau_hat, tau_exact, error, h};
}

Matrix oracle_semigroup(const Superoperator& tau, double t, const Matrix& a) {
  if (a.rows() != tau.dim() || a.cols() != tau.dim())
    throw std::invalid_argument("oracle_semigroup: dimension mismatch");
  return unvec(matrix_exp(t * tau.matrix()) * vec(a), tau.dim());
}

std::vector<ConvergencePoint> convergence_study(const HPGenerator& gen,
                                                const MultiplierCoeff& c,
                                                const MultiplierCoeff& d, const Matrix& a,
                                                double t, const std::vector<double>& ladder) {
  const Superoperator tau = exact_tau_superop(gen, c, d);
  const Matrix reference = oracle_semigroup(tau, t, a);
  std::vector<ConvergencePoint> out;
  for (double h : ladder) {
    const double steps_real = t / h;
    const int steps = int(std::llround(steps_real));
    if (steps <= 0 || std::abs(steps * h - t) > 1e-9 * std::max(1.0, t))
      throw std::invalid_argument("convergence_study: t is not an integer multiple of h");
    const LatticeParams params(gen.n, gen.d, steps, h);
    const PerturbedSemigroup ps(FlowHandle(gen, params, Adaptedness::Vacuum), c, d);
    out.push_back({h, steps, spectral_norm(ps.element(a, steps) - reference)});
  }
  return out;
}

std::vector<double> fitted_orders(const std::vector<ConvergencePoint>& points) {
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i].error < 1e-13 || points[i + 1].error < 1e-13) {
      orders.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      orders.push_back(std::log2(points[i].error / points[i + 1].error));
    }
  }
  return orders;
}

}  // namespace qfk
