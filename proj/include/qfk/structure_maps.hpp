#pragma once

#include <functional>
#include <vector>

#include "qfk/operator_core.hpp"

namespace qfk {

/// Block-matrix constants on khat tensor C^n, letter-major: component 0
/// is the time/vacuum direction, components 1..d the noise colors.
Matrix khat_delta(int n, int d);        // projection onto the color sector
Matrix khat_delta_perp(int n, int d);   // projection onto the time sector
Matrix khat_e_omega(int n, int d);      // E_omega: C^n -> khat tensor C^n
Matrix khat_ampliation(const Matrix& x, int d);  // diag(x, I_d tensor x)

/// pi(x) = W* (I_d tensor x) W on C^d tensor C^n.
Matrix pi_apply(const Matrix& w, int d, const Matrix& x);

/// Flow datum (H, L, W): Hermitian drift H, d coupling matrices L_k, and
/// a unitary W on C^d tensor C^n implementing the gauge homomorphism.
/// The derived block F = [[K, -L*W], [L, W-I]] with K = -iH - (1/2) sum L_k*L_k
/// satisfies F + F* + F* Delta F = 0, which the constructor verifies.
struct HPGenerator {
  int n;
  int d;
  Matrix H;                // n x n, Hermitian
  std::vector<Matrix> L;   // d matrices, n x n
  Matrix W;                // dn x dn, unitary

  HPGenerator(int n_, int d_, Matrix H_, std::vector<Matrix> L_, Matrix W_);

  Matrix stacked_l() const;  // (dn) x n column
  Matrix drift() const;      // K = -iH - (1/2) sum L_k* L_k
  Matrix flow_block() const; // F on khat tensor C^n
};

/// x |-> (1+d)n x (1+d)n block map, either in identity-adapted form (phi)
/// or vacuum-adapted form (psi = phi + Delta (I tensor x) Delta), with
/// component extractors tau0 (time block), delta0 (creation column),
/// delta0_dagger (annihilation row) and pi0 (gauge block).
class StructureBlocks {
 public:
  using BlockMap = std::function<Matrix(const Matrix&)>;

  StructureBlocks(int n, int d, bool vacuum_form, BlockMap map);

  int n() const { return n_; }
  int d() const { return d_; }
  bool vacuum_form() const { return vacuum_; }

  Matrix operator()(const Matrix& x) const { return map_(x); }

  Matrix tau0(const Matrix& x) const;
  Matrix delta0(const Matrix& x) const;
  Matrix delta0_dagger(const Matrix& x) const;
  Matrix pi0(const Matrix& x) const;

 private:
  int n_;
  int d_;
  bool vacuum_;
  BlockMap map_;
};

/// phi(x) = F* i(x) + i(x) F + F* Delta i(x) Delta F with i the ampliation;
/// the identity-adapted block map of the flow generated by (H, L, W).
StructureBlocks phi_from_hp(const HPGenerator& gen);

/// psi(x) = phi(x) + Delta (I tensor x) Delta, the vacuum-adapted form.
StructureBlocks psi_from_phi(const StructureBlocks& blocks);

/// Column coefficient c = (c0; c1; ...; cd) driving a multiplier process.
struct MultiplierCoeff {
  Matrix c0;
  std::vector<Matrix> ck;

  MultiplierCoeff(Matrix c0_, std::vector<Matrix> ck_);
  static MultiplierCoeff zero(int n, int d);

  int n() const { return int(c0.rows()); }
  int d() const { return int(ck.size()); }
  Matrix stacked() const;  // (1+d)n x n
  bool is_zero() const;
  bool operator==(const MultiplierCoeff& o) const;
};

/// Generator of the perturbed expectation semigroup, assembled from the
/// vacuum block map by compression:
/// tau(x) = E^w psi(x) E_w + c* D psi(x) E_w + E^w psi(x) D d
///        + c* D psi(x) D d + c* E_w x + x E^w d.
Matrix tau_gen(const StructureBlocks& blocks, const MultiplierCoeff& c,
               const MultiplierCoeff& d, const Matrix& x);

/// Same generator through the component extractors:
/// tau(x) = tau0(x) + l1* delta0(x) + delta0_dagger(x) l2 + l1* pi0(x) l2
///        + c0* x + x d0.
Matrix tau_block(const StructureBlocks& blocks, const MultiplierCoeff& c,
                 const MultiplierCoeff& d, const Matrix& x);

/// Coefficient (-i h - (1/2) sum l_k* l_k ; l_1 .. l_d) whose symmetric
/// perturbation reproduces conjugation by a unitary process.
MultiplierCoeff unitary_conj_coeff(const Matrix& h, const std::vector<Matrix>& l);

}  // namespace qfk
