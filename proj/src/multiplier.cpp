#include "qfk/multiplier.hpp"

#include <cmath>

namespace qfk {

MultiplierProcess::MultiplierProcess(MultiplierCoeff coeff, FlowHandle flow)
    : coeff_(std::move(coeff)), flow_(std::move(flow)) {
  if (coeff_.n() != flow_.params().n || coeff_.d() != flow_.params().d)
    throw std::invalid_argument("MultiplierProcess: coefficient does not match lattice");
}

StateVector MultiplierProcess::apply_window(int begin, int end, const StateVector& v) const {
  const LatticeParams& params = flow_.params();
  if (begin < 0 || end < begin || end > params.num_slices)
    throw std::invalid_argument("MultiplierProcess: slice range invalid");
  if (coeff_.is_zero()) return v;  // M^0 is the identity process

  // Work with y_i = U_[begin,i) w_i; the flow conjugations then collapse
  // to plain initial-space actions and one unitary factor per step.
  StateVector y = v;
  for (int i = begin; i < end; ++i) {
    const StateVector py = vacuum_projection(i, y);
    StateVector incr = apply_initial(coeff_.c0, py) * params.h;
    for (int k = 1; k <= params.d; ++k)
      incr += apply_slice(SliceOperatorKind::create(k), i,
                          apply_initial(coeff_.ck[k - 1], py));
    y += incr;
    y = apply_khat_block(flow_.one_step(), i, y);
  }
  return flow_.apply_cocycle_window(begin, end, y, Direction::Adjoint);
}

namespace {

// [h j_i(c0) + sum_k CREATE(k, i) j_i(c_k)] P_i z, with j evaluated at
// absolute slice i by direct cocycle conjugation.
StateVector integrand_step(const MultiplierCoeff& coeff, const FlowHandle& flow, int i,
                           const StateVector& z) {
  const LatticeParams& params = flow.params();
  const StateVector w = flow.apply_cocycle(i, vacuum_projection(i, z), Direction::Forward);
  StateVector out =
      flow.apply_cocycle(i, apply_initial(coeff.c0, w), Direction::Adjoint) * params.h;
  for (int k = 1; k <= params.d; ++k) {
    const StateVector yk =
        flow.apply_cocycle(i, apply_initial(coeff.ck[k - 1], w), Direction::Adjoint);
    out += apply_slice(SliceOperatorKind::create(k), i, yk);
  }
  return out;
}

}  // namespace

StateVector picard_apply(const MultiplierCoeff& coeff, const FlowHandle& flow, int t_idx,
                         const StateVector& v, int n_iter) {
  const LatticeParams& params = flow.params();
  if (t_idx < 0 || t_idx > params.num_slices)
    throw std::invalid_argument("picard_apply: slice range invalid");

  // Level 0: the running integral X^(0)_i v for every i <= t_idx.
  std::vector<StateVector> level;
  level.reserve(t_idx + 1);
  level.push_back(StateVector::zero(params));
  for (int i = 0; i < t_idx; ++i) level.push_back(level.back() + integrand_step(coeff, flow, i, v));

  StateVector total = level[t_idx];
  for (int m = 1; m <= n_iter; ++m) {
    std::vector<StateVector> next;
    next.reserve(t_idx + 1);
    next.push_back(StateVector::zero(params));
    for (int i = 0; i < t_idx; ++i)
      next.push_back(next.back() + integrand_step(coeff, flow, i, level[i]));
    level.swap(next);
    total += level[t_idx];
  }
  return total;
}

double multiplier_cocycle_residual(const MultiplierProcess& mp, int s_idx, int t_idx,
                                   int trials, Rng& rng) {
  const LatticeParams& params = mp.flow().params();
  if (s_idx + t_idx > params.num_slices)
    throw std::invalid_argument("multiplier_cocycle_residual: s + t exceeds the lattice");
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const StateVector base = vacuum_vector(params, rng.unit_vector(params.n));
    const StateVector lhs = mp.apply(s_idx + t_idx, base);
    const StateVector ms = mp.apply(s_idx, base);
    const StateVector rhs = shifted_operator_apply(
        mp.flow(), s_idx,
        [&](int off, const StateVector& w) { return mp.apply_window(off, off + t_idx, w); }, ms);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

NormBoundResult norm_bound_check(const MultiplierProcess& mp, int t_idx, int trials, Rng& rng) {
  const LatticeParams& params = mp.flow().params();
  const double t = t_idx * params.h;
  const double k_norm = spectral_norm(mp.coeff().c0);
  double l_sq = 0.0;
  for (const Matrix& ck : mp.coeff().ck) {
    const double s = spectral_norm(ck);
    l_sq += s * s;
  }
  const double x_norm = t * k_norm + std::sqrt(t * l_sq);
  const double bound = std::sqrt(2.0) * x_norm * std::exp(2.0 * t * l_sq + 2.0 * t * t * k_norm * k_norm);

  double observed = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    StateVector v = vacuum_projection(t_idx, StateVector(params, rng.vector(int(params.dim()))));
    const double nv = v.norm();
    if (nv == 0.0) continue;
    v *= 1.0 / nv;
    observed = std::max(observed, (mp.apply(t_idx, v) - v).norm());
  }
  return {observed, bound};
}

}  // namespace qfk
