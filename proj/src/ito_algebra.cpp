#include "qfk/ito_algebra.hpp"

#include <cmath>

namespace qfk {

BlockVec BlockVec::zero(const LatticeParams& params) {
  return BlockVec(std::vector<StateVector>(1 + params.d, StateVector::zero(params)));
}

BlockVec& BlockVec::operator+=(const BlockVec& other) {
  for (std::size_t i = 0; i < comp.size(); ++i) comp[i] += other.comp[i];
  return *this;
}

double IntegrandNorms::total(double t) const {
  if (t <= 0.0) return 0.0;
  return t * k + std::sqrt(t) * (l + m) + n;
}

BlockIntegrand::BlockIntegrand(LatticeParams params, Eval eval, IntegrandNorms norms,
                               bool delta_columns_zero)
    : params_(params), eval_(std::move(eval)), norms_(norms),
      delta_columns_zero_(delta_columns_zero) {}

BlockIntegrand constant_integrand(const LatticeParams& params, const Matrix& blocks) {
  const int n = params.n;
  const int d = params.d;
  const Eigen::Index bd = Eigen::Index(1 + d) * n;
  if (blocks.rows() != bd || blocks.cols() != bd)
    throw std::invalid_argument("constant_integrand: block matrix has wrong dimension");

  IntegrandNorms norms;
  norms.k = spectral_norm(blocks.block(0, 0, n, n));
  norms.l = spectral_norm(blocks.block(n, 0, Eigen::Index(d) * n, n));
  norms.m = spectral_norm(blocks.block(0, n, n, Eigen::Index(d) * n));
  norms.n = spectral_norm(blocks.block(n, n, Eigen::Index(d) * n, Eigen::Index(d) * n));
  const bool delta_zero = (norms.m == 0.0 && norms.n == 0.0);

  // n x n pieces indexed by khat components.
  std::vector<std::vector<Matrix>> piece(1 + d, std::vector<Matrix>(1 + d));
  for (int mu = 0; mu <= d; ++mu)
    for (int nu = 0; nu <= d; ++nu)
      piece[mu][nu] = blocks.block(Eigen::Index(mu) * n, Eigen::Index(nu) * n, n, n);

  auto eval = [piece, d, params](int, const BlockVec& in) {
    BlockVec out = BlockVec::zero(params);
    for (int mu = 0; mu <= d; ++mu)
      for (int nu = 0; nu <= d; ++nu) {
        if (piece[mu][nu].isZero(0.0)) continue;
        out.comp[mu] += apply_initial(piece[mu][nu], in.comp[nu]);
      }
    return out;
  };
  return BlockIntegrand(params, std::move(eval), norms, delta_zero);
}

StateVector discrete_integral(const BlockIntegrand& g, int begin, int end,
                              const StateVector& v) {
  const LatticeParams& params = g.params();
  if (!(v.params() == params))
    throw std::invalid_argument("discrete_integral: state does not match the integrand lattice");
  if (begin < 0 || end < begin || end > params.num_slices)
    throw std::invalid_argument("discrete_integral: slice range invalid");
  const double rh = std::sqrt(params.h);

  StateVector out = StateVector::zero(params);
  for (int i = begin; i < end; ++i) {
    BlockVec in = BlockVec::zero(params);
    in.comp[0] = vacuum_projection(i, v) * rh;
    for (int k = 1; k <= params.d; ++k)
      in.comp[k] = vacuum_projection(i, slice_transition(0, k, i, v));
    BlockVec res = g.at(i, in);
    out += vacuum_projection(i, res.comp[0]) * rh;
    for (int k = 1; k <= params.d; ++k)
      out += slice_transition(k, 0, i, vacuum_projection(i, res.comp[k]));
  }
  return out;
}

ProcessHandle integral_handle(const BlockIntegrand& g) {
  return [&g](int slice, const StateVector& v) { return discrete_integral(g, 0, slice, v); };
}

namespace {

BlockVec delta_part(const LatticeParams& params, const BlockVec& in) {
  BlockVec out = in;
  out.comp[0] = StateVector::zero(params);
  return out;
}

BlockVec omega_only(const LatticeParams& params, const StateVector& w) {
  BlockVec out = BlockVec::zero(params);
  out.comp[0] = w;
  return out;
}

}  // namespace

BlockIntegrand ito_product_integrand(const BlockIntegrand& g, const BlockIntegrand& gp,
                                     const ProcessHandle& z, const ProcessHandle& zp) {
  const LatticeParams params = g.params();
  if (!(gp.params() == params))
    throw std::invalid_argument("ito_product_integrand: integrand lattices differ");
  auto eval = [&g, &gp, z, zp, params](int slice, const BlockVec& in) {
    // (id tensor Z) Dperp G'
    const BlockVec gp_in = gp.at(slice, in);
    BlockVec out = omega_only(params, z(slice, gp_in.comp[0]));
    // G Dperp (id tensor Z')
    out += g.at(slice, omega_only(params, zp(slice, in.comp[0])));
    // G D G'
    out += g.at(slice, delta_part(params, gp_in));
    return out;
  };
  return BlockIntegrand(params, std::move(eval), IntegrandNorms{}, false);
}

BlockIntegrand ito_triple_integrand(const BlockIntegrand& g, const BlockIntegrand& gp,
                                    const BlockIntegrand& gpp, const ProcessHandle& z,
                                    const ProcessHandle& zp, const ProcessHandle& zpp) {
  const LatticeParams params = g.params();
  if (!(gp.params() == params) || !(gpp.params() == params))
    throw std::invalid_argument("ito_triple_integrand: integrand lattices differ");
  auto eval = [&g, &gp, &gpp, z, zp, zpp, params](int slice, const BlockVec& in) {
    const BlockVec gpp_in = gpp.at(slice, in);
    // (id tensor Z Z') Dperp G''
    BlockVec out = omega_only(params, z(slice, zp(slice, gpp_in.comp[0])));
    // (id tensor Z) Dperp G' Dperp (id tensor Z'') and G D G' Dperp (id tensor Z'')
    const BlockVec gp_z = gp.at(slice, omega_only(params, zpp(slice, in.comp[0])));
    out += omega_only(params, z(slice, gp_z.comp[0]));
    out += g.at(slice, delta_part(params, gp_z));
    // G Dperp (id tensor Z' Z'')
    out += g.at(slice, omega_only(params, zp(slice, zpp(slice, in.comp[0]))));
    // (id tensor Z) Dperp G' D G'' and G D G' D G''
    const BlockVec gp_d = gp.at(slice, delta_part(params, gpp_in));
    out += omega_only(params, z(slice, gp_d.comp[0]));
    out += g.at(slice, delta_part(params, gp_d));
    return out;
  };
  return BlockIntegrand(params, std::move(eval), IntegrandNorms{}, false);
}

BlockIntegrand compose_with_fixed(const BlockIntegrand& g, const LatticeOp& x) {
  const LatticeParams params = g.params();
  auto eval = [&g, x, params](int slice, const BlockVec& in) {
    BlockVec mapped = BlockVec::zero(params);
    for (int mu = 0; mu <= params.d; ++mu) mapped.comp[mu] = x(in.comp[mu]);
    return g.at(slice, mapped);
  };
  return BlockIntegrand(params, std::move(eval), g.norms(), g.delta_columns_zero());
}

namespace {

StateVector random_rooted(const LatticeParams& params, int t_idx, Rng& rng) {
  StateVector v = vacuum_projection(t_idx, StateVector(params, rng.vector(int(params.dim()))));
  return v * (1.0 / v.norm());
}

}  // namespace

double ito_product_residual(const BlockIntegrand& g, const BlockIntegrand& gp, int t_idx,
                            int trials, Rng& rng) {
  const ProcessHandle z = integral_handle(g);
  const ProcessHandle zp = integral_handle(gp);
  const BlockIntegrand h = ito_product_integrand(g, gp, z, zp);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const StateVector v = random_rooted(g.params(), t_idx, rng);
    const StateVector lhs = discrete_integral(g, 0, t_idx, discrete_integral(gp, 0, t_idx, v));
    const StateVector rhs = discrete_integral(h, 0, t_idx, v);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

double ito_triple_residual(const BlockIntegrand& g, const BlockIntegrand& gp,
                           const BlockIntegrand& gpp, int t_idx, int trials, Rng& rng) {
  const ProcessHandle z = integral_handle(g);
  const ProcessHandle zp = integral_handle(gp);
  const ProcessHandle zpp = integral_handle(gpp);
  const BlockIntegrand h = ito_triple_integrand(g, gp, gpp, z, zp, zpp);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const StateVector v = random_rooted(g.params(), t_idx, rng);
    const StateVector lhs = discrete_integral(
        g, 0, t_idx, discrete_integral(gp, 0, t_idx, discrete_integral(gpp, 0, t_idx, v)));
    const StateVector rhs = discrete_integral(h, 0, t_idx, v);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

std::pair<double, double> ito_verify(const Matrix& g_blocks, const Matrix& gp_blocks,
                                     const LatticeParams& base, int t_idx, int trials,
                                     Rng& rng) {
  const LatticeParams fine(base.n, base.d, 2 * base.num_slices, base.h / 2.0);
  Rng coarse_rng(rng.next_u64());
  Rng fine_rng(rng.next_u64());
  const double coarse = ito_product_residual(constant_integrand(base, g_blocks),
                                             constant_integrand(base, gp_blocks), t_idx,
                                             trials, coarse_rng);
  const double refined = ito_product_residual(constant_integrand(fine, g_blocks),
                                              constant_integrand(fine, gp_blocks), 2 * t_idx,
                                              trials, fine_rng);
  return {coarse, refined};
}

std::pair<double, double> ito_verify_triple(const Matrix& g_blocks, const Matrix& gp_blocks,
                                            const Matrix& gpp_blocks, const LatticeParams& base,
                                            int t_idx, int trials, Rng& rng) {
  const LatticeParams fine(base.n, base.d, 2 * base.num_slices, base.h / 2.0);
  Rng coarse_rng(rng.next_u64());
  Rng fine_rng(rng.next_u64());
  const double coarse = ito_triple_residual(
      constant_integrand(base, g_blocks), constant_integrand(base, gp_blocks),
      constant_integrand(base, gpp_blocks), t_idx, trials, coarse_rng);
  const double refined = ito_triple_residual(
      constant_integrand(fine, g_blocks), constant_integrand(fine, gp_blocks),
      constant_integrand(fine, gpp_blocks), 2 * t_idx, trials, fine_rng);
  return {coarse, refined};
}

double inside_integral_residual(const BlockIntegrand& g, const LatticeOp& x_s, int s_idx,
                                int t_idx, int trials, Rng& rng) {
  if (!g.delta_columns_zero())
    throw std::invalid_argument("inside_integral_residual: integrand must satisfy G Delta = 0");
  const BlockIntegrand composed = compose_with_fixed(g, x_s);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const StateVector v = random_rooted(g.params(), g.params().num_slices, rng);
    const StateVector lhs = discrete_integral(g, s_idx, t_idx, x_s(v));
    const StateVector rhs = discrete_integral(composed, s_idx, t_idx, v);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

}  // namespace qfk
