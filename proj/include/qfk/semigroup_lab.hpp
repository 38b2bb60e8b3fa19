#pragma once

#include "qfk/multiplier.hpp"

namespace qfk {

/// Perturbed expectation semigroup T_t(a) with matrix elements
/// <M^c_t(e_p Omega), j_t(a) M^d_t(e_q Omega)>.
class PerturbedSemigroup {
 public:
  PerturbedSemigroup(FlowHandle flow, MultiplierCoeff c, MultiplierCoeff d);

  const FlowHandle& flow() const { return flow_; }
  const MultiplierCoeff& left_coeff() const { return left_.coeff(); }
  const MultiplierCoeff& right_coeff() const { return right_.coeff(); }

  Matrix element(const Matrix& a, int t_idx) const;
  Superoperator superop(int t_idx) const;

  /// max over matrix units of |T_{s+t}(E_ij) - T_s(T_t(E_ij))|.
  double semigroup_property_residual(int s_idx, int t_idx) const;

  /// Min eigenvalue of the Choi matrix of a -> T_t(a); only defined for
  /// equal left and right coefficients.
  double cp_min_choi_eigenvalue(int t_idx) const;

 private:
  FlowHandle flow_;
  MultiplierProcess left_;
  MultiplierProcess right_;
};

struct GeneratorEstimate {
  Superoperator tau_hat;
  Superoperator tau_exact;
  double error;  // spectral norm of the difference
  double h;
};

enum class FdScheme { Euler, Richardson };

/// The generator of the perturbed semigroup as a superoperator, from the
/// block map of the flow datum.
Superoperator exact_tau_superop(const HPGenerator& gen, const MultiplierCoeff& c,
                                const MultiplierCoeff& d);

/// Finite-difference generator at t = 0 sampled on matrix units.
/// Euler: (T_h(x) - x)/h on a one-step lattice. Richardson: 2 D(h) - D(2h)
/// with D(s) the one-step Euler quotient of the step-s lattice, cancelling
/// the first-order bias; requires at least two slices.
GeneratorEstimate generator_fd(const PerturbedSemigroup& ps, FdScheme scheme);

/// exp(t tau) applied to a.
Matrix oracle_semigroup(const Superoperator& tau, double t, const Matrix& a);

struct ConvergencePoint {
  double h;
  int steps;
  double error;
};

/// Lattice semigroup against exp(t tau_exact) over a ladder of step sizes;
/// t/h must be integral for each entry.
std::vector<ConvergencePoint> convergence_study(const HPGenerator& gen,
                                                const MultiplierCoeff& c,
                                                const MultiplierCoeff& d, const Matrix& a,
                                                double t, const std::vector<double>& ladder);

/// log2(e_i / e_{i+1}) per halving; NaN where an error is below 1e-13
/// (exact case, no order defined).
std::vector<double> fitted_orders(const std::vector<ConvergencePoint>& points);

}  // namespace qfk
