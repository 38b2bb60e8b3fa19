#pragma once

#include "qfk/fock_lattice.hpp"
#include "qfk/rng.hpp"
#include "qfk/structure_maps.hpp"

namespace qfk {

/// One-step interaction unitary G_h = exp(X_h) on khat tensor C^n with
/// X_h[0,0] = -i h H, X_h[k,0] = sqrt(h) L_k, X_h[0,k] = -sqrt(h) L_k*,
/// and gauge block Theta, the principal anti-Hermitian logarithm of W.
/// Rejects W with an eigenvalue at -1 (principal branch ill-defined).
Matrix build_one_step(const HPGenerator& gen, double h);

/// Exact discrete unitary cocycle: U_t = G^(t-1) ... G^(0), the slice-0
/// factor acting first.
struct DiscreteCocycle {
  HPGenerator gen;
  LatticeParams params;
  Matrix one_step;          // (1+d)n x (1+d)n
  Matrix one_step_adjoint;

  DiscreteCocycle(HPGenerator gen_, LatticeParams params_);
};

enum class Adaptedness { Identity, Vacuum };
enum class Direction { Forward, Adjoint };

/// Flow j_t(a) = U_t* (a tensor id) U_t, optionally compressed by the
/// vacuum projection P_t on both sides (vacuum-adapted mode).
class FlowHandle {
 public:
  FlowHandle(HPGenerator gen, LatticeParams params, Adaptedness mode);

  const HPGenerator& generator() const { return cocycle_.gen; }
  const LatticeParams& params() const { return cocycle_.params; }
  Adaptedness mode() const { return mode_; }
  const Matrix& one_step() const { return cocycle_.one_step; }

  /// U over slices [begin, end), or its adjoint.
  StateVector apply_cocycle_window(int begin, int end, const StateVector& v,
                                   Direction dir) const;
  StateVector apply_cocycle(int t_idx, const StateVector& v, Direction dir) const {
    return apply_cocycle_window(0, t_idx, v, dir);
  }

  /// sigma_begin(j_{end-begin}(a)) v; with begin = 0 this is j_t(a) v.
  StateVector flow_apply_window(const Matrix& a, int begin, int end,
                                const StateVector& v) const;
  StateVector flow_apply(const Matrix& a, int t_idx, const StateVector& v) const {
    return flow_apply_window(a, 0, t_idx, v);
  }

  /// n x n matrix of vacuum matrix elements of j_t(a).
  Matrix vacuum_semigroup_element(const Matrix& a, int t_idx) const;

 private:
  DiscreteCocycle cocycle_;
  Adaptedness mode_;
};

/// d = 1, H = 0, W = I, L = -i htilde: the flow whose vacuum-expectation
/// semigroup is Gaussian subordination of the automorphism group
/// generated by htilde.
HPGenerator gaussian_generator(const Matrix& htilde);

/// max over random vectors of |j_t(ab)v - j_t(a) j_t(b) v|.
double flow_homomorphism_check(const FlowHandle& fh, const Matrix& a, const Matrix& b,
                               int t_idx, int trials, Rng& rng);

/// Operator-valued argument for the shifted evaluation J_s: the callable
/// receives the base slice at which its window starts.
using WindowOp = std::function<StateVector(int base_slice, const StateVector&)>;

/// J_s(op) v = U_s* sigma_s(op) U_s v.
StateVector shifted_operator_apply(const FlowHandle& fh, int s_idx, const WindowOp& op,
                                   const StateVector& v);

}  // namespace qfk
