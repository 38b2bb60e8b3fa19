#include "qfk/flow_engine.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qfk {

namespace {

// Principal anti-Hermitian logarithm of a unitary via Schur form; each
// eigenphase taken in (-pi, pi].
Matrix principal_unitary_log(const Matrix& w) {
  const Eigen::Index m = w.rows();
  if ((w - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() == 0.0)
    return Matrix::Zero(m, m);
  Eigen::ComplexSchur<Matrix> schur(w);
  const Matrix& q = schur.matrixU();
  Vector phases(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex lambda = schur.matrixT()(j, j);
    const double theta = std::arg(lambda);
    if (std::abs(lambda + 1.0) < 1e-9)
      throw std::invalid_argument(
          "build_one_step: W has an eigenvalue at -1; principal logarithm ill-conditioned");
    phases(j) = Complex(0.0, theta);
  }
  return q * phases.asDiagonal() * q.adjoint();
}

}  // namespace

Matrix build_one_step(const HPGenerator& gen, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("build_one_step: h must be positive");
  const int n = gen.n;
  const int d = gen.d;
  const int bd = (1 + d) * n;
  const double rh = std::sqrt(h);

  Matrix x = Matrix::Zero(bd, bd);
  x.block(0, 0, n, n) = -kI * h * gen.H;
  for (int k = 0; k < d; ++k) {
    x.block(Eigen::Index(k + 1) * n, 0, n, n) = rh * gen.L[k];
    x.block(0, Eigen::Index(k + 1) * n, n, n) = -rh * gen.L[k].adjoint();
  }
  x.block(n, n, Eigen::Index(d) * n, Eigen::Index(d) * n) = principal_unitary_log(gen.W);
  return matrix_exp(x);
}

DiscreteCocycle::DiscreteCocycle(HPGenerator gen_, LatticeParams params_)
    : gen(std::move(gen_)), params(params_), one_step(build_one_step(gen, params.h)),
      one_step_adjoint(one_step.adjoint()) {
  if (gen.n != params.n || gen.d != params.d)
    throw std::invalid_argument("DiscreteCocycle: generator and lattice dimensions differ");
}

FlowHandle::FlowHandle(HPGenerator gen, LatticeParams params, Adaptedness mode)
    : cocycle_(std::move(gen), params), mode_(mode) {}

StateVector FlowHandle::apply_cocycle_window(int begin, int end, const StateVector& v,
                                             Direction dir) const {
  if (begin < 0 || end < begin || end > cocycle_.params.num_slices)
    throw std::invalid_argument("apply_cocycle_window: slice range invalid");
  StateVector out = v;
  if (dir == Direction::Forward) {
    for (int i = begin; i < end; ++i)
      out = apply_khat_block(cocycle_.one_step, i, out);
  } else {
    for (int i = end - 1; i >= begin; --i)
      out = apply_khat_block(cocycle_.one_step_adjoint, i, out);
  }
  return out;
}

StateVector FlowHandle::flow_apply_window(const Matrix& a, int begin, int end,
                                          const StateVector& v) const {
  StateVector w = (mode_ == Adaptedness::Vacuum) ? vacuum_projection(end, v) : v;
  w = apply_cocycle_window(begin, end, w, Direction::Forward);
  w = apply_initial(a, w);
  w = apply_cocycle_window(begin, end, w, Direction::Adjoint);
  if (mode_ == Adaptedness::Vacuum) w = vacuum_projection(end, w);
  return w;
}

Matrix FlowHandle::vacuum_semigroup_element(const Matrix& a, int t_idx) const {
  return vacuum_compression(cocycle_.params, [&](const StateVector& v) {
    return flow_apply(a, t_idx, v);
  });
}

HPGenerator gaussian_generator(const Matrix& htilde) {
  const int n = int(htilde.rows());
  if (!is_hermitian(htilde, 1e-12))
    throw std::invalid_argument("gaussian_generator: htilde must be Hermitian");
  return HPGenerator(n, 1, Matrix::Zero(n, n), {Matrix(-kI * htilde)}, identity(n));
}

double flow_homomorphism_check(const FlowHandle& fh, const Matrix& a, const Matrix& b,
                               int t_idx, int trials, Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    StateVector v(fh.params(), rng.vector(int(fh.params().dim())));
    v *= 1.0 / v.norm();
    const StateVector lhs = fh.flow_apply(a * b, t_idx, v);
    const StateVector rhs = fh.flow_apply(a, t_idx, fh.flow_apply(b, t_idx, v));
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

StateVector shifted_operator_apply(const FlowHandle& fh, int s_idx, const WindowOp& op,
                                   const StateVector& v) {
  StateVector w = fh.apply_cocycle(s_idx, v, Direction::Forward);
  w = op(s_idx, w);
  return fh.apply_cocycle(s_idx, w, Direction::Adjoint);
}

}  // namespace qfk
