#pragma once

#include "qfk/fock_lattice.hpp"
#include "qfk/rng.hpp"
#include "qfk/structure_maps.hpp"

namespace qfk {

/// Vector in khat tensor (initial tensor noise): one StateVector per
/// khat component, component 0 the time direction.
struct BlockVec {
  std::vector<StateVector> comp;

  explicit BlockVec(std::vector<StateVector> c) : comp(std::move(c)) {}
  static BlockVec zero(const LatticeParams& params);

  BlockVec& operator+=(const BlockVec& other);
};

struct IntegrandNorms {
  double k = 0.0;  // time block
  double l = 0.0;  // creation column
  double m = 0.0;  // annihilation row
  double n = 0.0;  // gauge block

  /// |G|_t = |k|_{1,t} + |l|_{2,t} + |m|_{2,t} + |n|_{inf,t} for a
  /// time-constant integrand.
  double total(double t) const;
};

/// Step integrand process: for each slice an operator on khat tensor the
/// carrier space, acting as its value tensor vacuum beyond that slice
/// (the integral inserts the P_i sandwich).
class BlockIntegrand {
 public:
  using Eval = std::function<BlockVec(int slice, const BlockVec&)>;

  BlockIntegrand(LatticeParams params, Eval eval, IntegrandNorms norms, bool delta_columns_zero);

  const LatticeParams& params() const { return params_; }
  BlockVec at(int slice, const BlockVec& in) const { return eval_(slice, in); }
  const IntegrandNorms& norms() const { return norms_; }
  bool delta_columns_zero() const { return delta_columns_zero_; }

 private:
  LatticeParams params_;
  Eval eval_;
  IntegrandNorms norms_;
  bool delta_columns_zero_;
};

/// Integrand constant in time, given as a (1+d)n x (1+d)n block matrix
/// acting on khat tensor initial space.
BlockIntegrand constant_integrand(const LatticeParams& params, const Matrix& blocks);

/// int_begin^end G dLambda applied to v: per slice
///   h k_i + CREATE l_i + m_i ANNIHILATE + gauge contraction of n_i,
/// each factor compressed by P_i.
StateVector discrete_integral(const BlockIntegrand& g, int begin, int end, const StateVector& v);

inline StateVector discrete_integral(const BlockIntegrand& g, int end, const StateVector& v) {
  return discrete_integral(g, 0, end, v);
}

/// Slice-indexed operator process.
using ProcessHandle = std::function<StateVector(int slice, const StateVector&)>;

/// Lazy running integral Z_i = int_0^i G dLambda.
ProcessHandle integral_handle(const BlockIntegrand& g);

/// Integrand of the product Z Z' per the vacuum-adapted Ito formula:
/// H = (id tensor Z) Dperp G' + G Dperp (id tensor Z') + G D G'.
BlockIntegrand ito_product_integrand(const BlockIntegrand& g, const BlockIntegrand& gp,
                                     const ProcessHandle& z, const ProcessHandle& zp);

/// Integrand of the triple product Z Z' Z''.
BlockIntegrand ito_triple_integrand(const BlockIntegrand& g, const BlockIntegrand& gp,
                                    const BlockIntegrand& gpp, const ProcessHandle& z,
                                    const ProcessHandle& zp, const ProcessHandle& zpp);

/// G (id tensor X) for a fixed operator X.
BlockIntegrand compose_with_fixed(const BlockIntegrand& g, const LatticeOp& x);

/// max over random vacuum-rooted v of |Z_t Z'_t v - (int H dLambda)_t v|.
double ito_product_residual(const BlockIntegrand& g, const BlockIntegrand& gp, int t_idx,
                            int trials, Rng& rng);

/// Triple-product variant.
double ito_triple_residual(const BlockIntegrand& g, const BlockIntegrand& gp,
                           const BlockIntegrand& gpp, int t_idx, int trials, Rng& rng);

/// Product residuals at the base lattice and at its halving (same physical
/// time, twice the slices); the first-order Ito-table error makes the pair
/// shrink by roughly two.
std::pair<double, double> ito_verify(const Matrix& g_blocks, const Matrix& gp_blocks,
                                     const LatticeParams& base, int t_idx, int trials,
                                     Rng& rng);

/// Three-factor variant of ito_verify.
std::pair<double, double> ito_verify_triple(const Matrix& g_blocks, const Matrix& gp_blocks,
                                            const Matrix& gpp_blocks, const LatticeParams& base,
                                            int t_idx, int trials, Rng& rng);

/// Residual of int_s^t G dLambda X_s = int_s^t G (id tensor X_s) dLambda;
/// requires G Delta = 0 (no annihilation or gauge columns).
double inside_integral_residual(const BlockIntegrand& g, const LatticeOp& x_s, int s_idx,
                                int t_idx, int trials, Rng& rng);

}  // namespace qfk
