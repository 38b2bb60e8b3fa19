#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qfk/operator_core.hpp"

namespace qfk {

/// Repeated-interaction lattice for the noise space: N time slices of
/// width h, each a (1+d)-level system (vacuum + one particle of one of
/// d colors). Full carrier space is C^n tensor (C^{1+d})^N.
struct LatticeParams {
  int n;           // initial-space dimension
  int d;           // multiplicity (color) dimension
  int num_slices;  // N
  double h;        // slice width

  LatticeParams(int n_, int d_, int num_slices_, double h_);

  std::int64_t noise_dim() const;             // (1+d)^N
  std::int64_t dim() const;                   // n * (1+d)^N
  std::int64_t slice_stride(int slice) const; // (1+d)^slice
  double horizon() const { return num_slices * h; }

  bool operator==(const LatticeParams& o) const {
    return n == o.n && d == o.d && num_slices == o.num_slices && h == o.h;
  }
};

/// Amplitude vector on C^n tensor (C^{1+d})^N. Basis index is
/// p * (1+d)^N + sum_i w_i (1+d)^i: initial-space index slowest,
/// slice 0 fastest; letter 0 is the slice vacuum.
class StateVector {
 public:
  StateVector(LatticeParams params, Vector amps);
  static StateVector zero(const LatticeParams& params);

  const LatticeParams& params() const { return params_; }
  const Vector& amps() const { return amps_; }
  Vector& amps() { return amps_; }

  double norm() const { return amps_.norm(); }
  Complex dot(const StateVector& other) const;  // conjugate-linear in *this

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(Complex s);
  StateVector operator+(const StateVector& other) const;
  StateVector operator-(const StateVector& other) const;
  StateVector operator*(Complex s) const;

 private:
  LatticeParams params_;
  Vector amps_;
};

/// One of the four fundamental integrator kinds, slice-local:
/// Create/Annihilate carry sqrt(h), Gauge carries 1, Time carries h.
struct SliceOperatorKind {
  enum class Kind { Create, Annihilate, Gauge, Time };
  Kind kind;
  int color_out = 0;  // target letter (Create, Gauge)
  int color_in = 0;   // source letter (Annihilate, Gauge)

  static SliceOperatorKind create(int k) { return {Kind::Create, k, 0}; }
  static SliceOperatorKind annihilate(int k) { return {Kind::Annihilate, 0, k}; }
  static SliceOperatorKind gauge(int k_out, int k_in) { return {Kind::Gauge, k_out, k_in}; }
  static SliceOperatorKind time() { return {Kind::Time, 0, 0}; }
};

/// u tensor vacuum word.
StateVector vacuum_vector(const LatticeParams& params, const Vector& u);

/// P_i: zeroes every amplitude with a particle in any slice >= i.
StateVector vacuum_projection(int slice, const StateVector& v);

StateVector apply_slice(const SliceOperatorKind& op, int slice, const StateVector& v);

/// Unscaled letter map |letter_out><letter_in| on one slice (letters in
/// 0..d). The scaled integrators are sqrt(h) or h multiples of these.
StateVector slice_transition(int letter_out, int letter_in, int slice, const StateVector& v);

/// Noise factor of the discrete exponential vector of a step function f
/// (one C^d value per slice): tensor over slices of (1, sqrt(h) f(i)).
Vector discrete_exponential(const LatticeParams& params, const std::vector<Vector>& f);

/// u tensor a given noise factor.
StateVector tensor_with_initial(const LatticeParams& params, const Vector& u,
                                const Vector& noise_factor);

/// Right shift by s slices; requires vacuum in the last s slices.
StateVector shift_slices(int s, const StateVector& v);

using LatticeOp = std::function<StateVector(const StateVector&)>;

/// <u, P_i A(P_i w)>.
Complex conditional_expectation(int slice, const StateVector& u, const StateVector& w,
                                const LatticeOp& a);

/// (a tensor id) on the initial space.
StateVector apply_initial(const Matrix& a, const StateVector& v);

/// Apply a (1+d)n x (1+d)n letter-major block matrix to the
/// initial-space/slice pair (slice letter index major, initial minor).
StateVector apply_khat_block(const Matrix& block, int slice, const StateVector& v);

/// Vacuum compression E[A]: the n x n matrix <e_p Omega, A e_q Omega>.
Matrix vacuum_compression(const LatticeParams& params, const LatticeOp& a);

}  // namespace qfk
