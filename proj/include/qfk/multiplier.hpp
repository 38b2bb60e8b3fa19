#pragma once

#include "qfk/flow_engine.hpp"

namespace qfk {

/// Multiplier process M^c driven by the flow j: the discrete solution of
///   M_{i+1} = M_i + h j_i(c0) P_i M_i + sum_k CREATE(k, i) j_i(c_k) P_i M_i,
/// started from the identity. Never materialised as a matrix; applied
/// slice by slice with the cocycle unitary carried forward.
class MultiplierProcess {
 public:
  MultiplierProcess(MultiplierCoeff coeff, FlowHandle flow);

  const MultiplierCoeff& coeff() const { return coeff_; }
  const FlowHandle& flow() const { return flow_; }

  /// M_t v.
  StateVector apply(int t_idx, const StateVector& v) const {
    return apply_window(0, t_idx, v);
  }

  /// sigma_begin-shifted segment: the recursion run over slices
  /// [begin, end) with the flow conjugations anchored at begin.
  StateVector apply_window(int begin, int end, const StateVector& v) const;

 private:
  MultiplierCoeff coeff_;
  FlowHandle flow_;
};

/// Partial Picard sum Sum_{m <= n_iter} X^(m)_t v with X^(0) = int G dLambda
/// and X^(m+1) = int G (id tensor X^(m)) dLambda; converges to (M_t - id) v.
StateVector picard_apply(const MultiplierCoeff& coeff, const FlowHandle& flow, int t_idx,
                         const StateVector& v, int n_iter);

/// max over random initial vectors of |M_{s+t}(u Omega) - J_s(M_t) M_s(u Omega)|.
double multiplier_cocycle_residual(const MultiplierProcess& mp, int s_idx, int t_idx,
                                   int trials, Rng& rng);

struct NormBoundResult {
  double observed;
  double bound;
};

/// Observed sup of |(M_t - id)v| over random unit vacuum-rooted vectors
/// against the a-priori bound sqrt(2) |X| exp(2|l|^2 + 2|k|^2) with
/// |k|_{1,t} = t|c0|, |l|_{2,t}^2 = t sum_k |c_k|^2 and
/// |X| <= t|c0| + sqrt(t) (sum_k |c_k|^2)^{1/2}.
NormBoundResult norm_bound_check(const MultiplierProcess& mp, int t_idx, int trials, Rng& rng);

}  // namespace qfk
