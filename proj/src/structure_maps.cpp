#include "qfk/structure_maps.hpp"

namespace qfk {

Matrix khat_delta(int n, int d) {
  Matrix p = Matrix::Zero(1 + d, 1 + d);
  for (int k = 1; k <= d; ++k) p(k, k) = 1.0;
  return kron(p, identity(n));
}

Matrix khat_delta_perp(int n, int d) {
  Matrix p = Matrix::Zero(1 + d, 1 + d);
  p(0, 0) = 1.0;
  return kron(p, identity(n));
}

Matrix khat_e_omega(int n, int d) {
  Matrix e = Matrix::Zero(1 + d, 1);
  e(0, 0) = 1.0;
  return kron(e, identity(n));
}

Matrix khat_ampliation(const Matrix& x, int d) { return kron(identity(1 + d), x); }

Matrix pi_apply(const Matrix& w, int d, const Matrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("pi_apply: x must be square");
  const int n = int(x.rows());
  if (w.rows() != Eigen::Index(d) * n || w.cols() != Eigen::Index(d) * n)
    throw std::invalid_argument("pi_apply: W must act on C^d tensor C^n");
  return w.adjoint() * kron(identity(d), x) * w;
}

HPGenerator::HPGenerator(int n_, int d_, Matrix H_, std::vector<Matrix> L_, Matrix W_)
    : n(n_), d(d_), H(std::move(H_)), L(std::move(L_)), W(std::move(W_)) {
  if (n <= 0 || d <= 0) throw std::invalid_argument("HPGenerator: dimensions must be positive");
  if (H.rows() != n || H.cols() != n)
    throw std::invalid_argument("HPGenerator: H must be n x n");
  if (!is_hermitian(H, 1e-12)) throw std::invalid_argument("HPGenerator: H must be Hermitian");
  if (int(L.size()) != d) throw std::invalid_argument("HPGenerator: need d coupling matrices");
  for (const Matrix& lk : L)
    if (lk.rows() != n || lk.cols() != n)
      throw std::invalid_argument("HPGenerator: each L_k must be n x n");
  UnitaryMatrix check_w(W, 1e-10);

  const Matrix f = flow_block();
  const Matrix delta = khat_delta(n, d);
  const double residual = spectral_norm(f + Matrix(f.adjoint()) + f.adjoint() * delta * f);
  if (residual > 1e-10)
    throw std::invalid_argument("HPGenerator: cocycle block relation F + F* + F*DF = 0 violated");
}

Matrix HPGenerator::stacked_l() const {
  Matrix lb(Eigen::Index(d) * n, n);
  for (int k = 0; k < d; ++k) lb.block(Eigen::Index(k) * n, 0, n, n) = L[k];
  return lb;
}

Matrix HPGenerator::drift() const {
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& lk : L) sum += lk.adjoint() * lk;
  return -kI * H - 0.5 * sum;
}

Matrix HPGenerator::flow_block() const {
  const int bd = (1 + d) * n;
  const Matrix lb = stacked_l();
  Matrix f = Matrix::Zero(bd, bd);
  f.block(0, 0, n, n) = drift();
  f.block(0, n, n, Eigen::Index(d) * n) = -lb.adjoint() * W;
  f.block(n, 0, Eigen::Index(d) * n, n) = lb;
  f.block(n, n, Eigen::Index(d) * n, Eigen::Index(d) * n) =
      W - Matrix::Identity(Eigen::Index(d) * n, Eigen::Index(d) * n);
  return f;
}

StructureBlocks::StructureBlocks(int n, int d, bool vacuum_form, BlockMap map)
    : n_(n), d_(d), vacuum_(vacuum_form), map_(std::move(map)) {}

Matrix StructureBlocks::tau0(const Matrix& x) const { return map_(x).block(0, 0, n_, n_); }

Matrix StructureBlocks::delta0(const Matrix& x) const {
  return map_(x).block(n_, 0, Eigen::Index(d_) * n_, n_);
}

Matrix StructureBlocks::delta0_dagger(const Matrix& x) const {
  return map_(x).block(0, n_, n_, Eigen::Index(d_) * n_);
}

Matrix StructureBlocks::pi0(const Matrix& x) const {
  return map_(x).block(n_, n_, Eigen::Index(d_) * n_, Eigen::Index(d_) * n_);
}

StructureBlocks phi_from_hp(const HPGenerator& gen) {
  const Matrix f = gen.flow_block();
  const Matrix delta = khat_delta(gen.n, gen.d);
  const int d = gen.d;
  const int n = gen.n;
  return StructureBlocks(n, d, false, [f, delta, d, n](const Matrix& x) {
    if (x.rows() != n || x.cols() != n)
      throw std::invalid_argument("phi: x must match the algebra dimension");
    const Matrix amp = khat_ampliation(x, d);
    return Matrix(f.adjoint() * amp + amp * f + f.adjoint() * delta * amp * delta * f);
  });
}

StructureBlocks psi_from_phi(const StructureBlocks& blocks) {
  const int n = blocks.n();
  const int d = blocks.d();
  const Matrix delta = khat_delta(n, d);
  return StructureBlocks(n, d, true, [blocks, delta, d, n](const Matrix& x) {
    return Matrix(blocks(x) + delta * khat_ampliation(x, d) * delta);
  });
}

namespace {

StructureBlocks as_vacuum(const StructureBlocks& blocks) {
  return blocks.vacuum_form() ? blocks : psi_from_phi(blocks);
}

}  // namespace

MultiplierCoeff::MultiplierCoeff(Matrix c0_, std::vector<Matrix> ck_)
    : c0(std::move(c0_)), ck(std::move(ck_)) {
  if (c0.rows() != c0.cols()) throw std::invalid_argument("MultiplierCoeff: c0 must be square");
  for (const Matrix& m : ck)
    if (m.rows() != c0.rows() || m.cols() != c0.cols())
      throw std::invalid_argument("MultiplierCoeff: component dimension mismatch");
}

MultiplierCoeff MultiplierCoeff::zero(int n, int d) {
  return MultiplierCoeff(Matrix::Zero(n, n), std::vector<Matrix>(d, Matrix::Zero(n, n)));
}

Matrix MultiplierCoeff::stacked() const {
  const int nn = n();
  Matrix s(Eigen::Index(1 + d()) * nn, nn);
  s.block(0, 0, nn, nn) = c0;
  for (int k = 0; k < d(); ++k) s.block(Eigen::Index(k + 1) * nn, 0, nn, nn) = ck[k];
  return s;
}

bool MultiplierCoeff::is_zero() const {
  if (!c0.isZero(0.0)) return false;
  for (const Matrix& m : ck)
    if (!m.isZero(0.0)) return false;
  return true;
}

bool MultiplierCoeff::operator==(const MultiplierCoeff& o) const {
  if (n() != o.n() || d() != o.d()) return false;
  if ((c0 - o.c0).cwiseAbs().maxCoeff() != 0.0) return false;
  for (int k = 0; k < d(); ++k)
    if ((ck[k] - o.ck[k]).cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

Matrix tau_gen(const StructureBlocks& blocks, const MultiplierCoeff& c,
               const MultiplierCoeff& d, const Matrix& x) {
  const int n = blocks.n();
  const int dd = blocks.d();
  if (c.n() != n || d.n() != n || c.d() != dd || d.d() != dd)
    throw std::invalid_argument("tau_gen: coefficient dimensions do not match the blocks");
  if (x.rows() != n || x.cols() != n)
    throw std::invalid_argument("tau_gen: x must match the algebra dimension");
  const StructureBlocks psi = as_vacuum(blocks);
  const Matrix m = psi(x);
  const Matrix e = khat_e_omega(n, dd);
  const Matrix delta = khat_delta(n, dd);
  const Matrix cs = c.stacked();
  const Matrix ds = d.stacked();
  return e.adjoint() * m * e + cs.adjoint() * delta * m * e + e.adjoint() * m * delta * ds +
         cs.adjoint() * delta * m * delta * ds + cs.adjoint() * e * x + x * e.adjoint() * ds;
}

Matrix tau_block(const StructureBlocks& blocks, const MultiplierCoeff& c,
                 const MultiplierCoeff& d, const Matrix& x) {
  const int n = blocks.n();
  const int dd = blocks.d();
  if (c.n() != n || d.n() != n || c.d() != dd || d.d() != dd)
    throw std::invalid_argument("tau_block: coefficient dimensions do not match the blocks");
  if (x.rows() != n || x.cols() != n)
    throw std::invalid_argument("tau_block: x must match the algebra dimension");
  const StructureBlocks psi = as_vacuum(blocks);
  Matrix l1(Eigen::Index(dd) * n, n), l2(Eigen::Index(dd) * n, n);
  for (int k = 0; k < dd; ++k) {
    l1.block(Eigen::Index(k) * n, 0, n, n) = c.ck[k];
    l2.block(Eigen::Index(k) * n, 0, n, n) = d.ck[k];
  }
  return psi.tau0(x) + l1.adjoint() * psi.delta0(x) + psi.delta0_dagger(x) * l2 +
         l1.adjoint() * psi.pi0(x) * l2 + c.c0.adjoint() * x + x * d.c0;
}

MultiplierCoeff unitary_conj_coeff(const Matrix& h, const std::vector<Matrix>& l) {
  if (!is_hermitian(h, 1e-12))
    throw std::invalid_argument("unitary_conj_coeff: h must be Hermitian");
  Matrix sum = Matrix::Zero(h.rows(), h.cols());
  for (const Matrix& lk : l) sum += lk.adjoint() * lk;
  return MultiplierCoeff(-kI * h - 0.5 * sum, l);
}

}  // namespace qfk
