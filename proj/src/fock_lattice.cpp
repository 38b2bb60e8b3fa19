#include "qfk/fock_lattice.hpp"

#include <cmath>

namespace qfk {

namespace {
constexpr std::int64_t kAmpBudget = std::int64_t(1) << 26;
}

LatticeParams::LatticeParams(int n_, int d_, int num_slices_, double h_)
    : n(n_), d(d_), num_slices(num_slices_), h(h_) {
  if (n <= 0 || d <= 0 || num_slices < 0)
    throw std::invalid_argument("LatticeParams: n, d must be positive, N nonnegative");
  if (!(h > 0.0)) throw std::invalid_argument("LatticeParams: h must be positive");
  std::int64_t total = n;
  for (int i = 0; i < num_slices; ++i) {
    total *= (1 + d);
    if (total > kAmpBudget)
      throw std::invalid_argument("LatticeParams: amplitude count exceeds 2^26 budget");
  }
}

std::int64_t LatticeParams::noise_dim() const {
  std::int64_t total = 1;
  for (int i = 0; i < num_slices; ++i) total *= (1 + d);
  return total;
}

std::int64_t LatticeParams::dim() const { return n * noise_dim(); }

std::int64_t LatticeParams::slice_stride(int slice) const {
  std::int64_t s = 1;
  for (int i = 0; i < slice; ++i) s *= (1 + d);
  return s;
}

StateVector::StateVector(LatticeParams params, Vector amps)
    : params_(params), amps_(std::move(amps)) {
  if (amps_.size() != params_.dim())
    throw std::invalid_argument("StateVector: amplitude count does not match lattice");
}

StateVector StateVector::zero(const LatticeParams& params) {
  return StateVector(params, Vector::Zero(params.dim()));
}

Complex StateVector::dot(const StateVector& other) const {
  if (!(params_ == other.params_))
    throw std::invalid_argument("StateVector: lattice mismatch");
  return amps_.dot(other.amps_);
}

StateVector& StateVector::operator+=(const StateVector& other) {
  if (!(params_ == other.params_))
    throw std::invalid_argument("StateVector: lattice mismatch");
  amps_ += other.amps_;
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  if (!(params_ == other.params_))
    throw std::invalid_argument("StateVector: lattice mismatch");
  amps_ -= other.amps_;
  return *this;
}

StateVector& StateVector::operator*=(Complex s) {
  amps_ *= s;
  return *this;
}

StateVector StateVector::operator+(const StateVector& other) const {
  StateVector out = *this;
  out += other;
  return out;
}

StateVector StateVector::operator-(const StateVector& other) const {
  StateVector out = *this;
  out -= other;
  return out;
}

StateVector StateVector::operator*(Complex s) const {
  StateVector out = *this;
  out *= s;
  return out;
}

StateVector vacuum_vector(const LatticeParams& params, const Vector& u) {
  if (u.size() != params.n)
    throw std::invalid_argument("vacuum_vector: initial vector has wrong dimension");
  StateVector out = StateVector::zero(params);
  const std::int64_t noise = params.noise_dim();
  for (int p = 0; p < params.n; ++p) out.amps()(std::int64_t(p) * noise) = u(p);
  return out;
}

StateVector vacuum_projection(int slice, const StateVector& v) {
  const LatticeParams& params = v.params();
  if (slice < 0 || slice > params.num_slices)
    throw std::invalid_argument("vacuum_projection: slice out of range");
  const std::int64_t noise = params.noise_dim();
  const std::int64_t stride = params.slice_stride(slice);
  StateVector out = v;
  for (std::int64_t idx = 0; idx < out.amps().size(); ++idx) {
    if ((idx % noise) / stride != 0) out.amps()(idx) = 0.0;
  }
  return out;
}

StateVector apply_slice(const SliceOperatorKind& op, int slice, const StateVector& v) {
  const LatticeParams& params = v.params();
  if (slice < 0 || slice >= params.num_slices)
    throw std::invalid_argument("apply_slice: slice out of range");
  const int width = 1 + params.d;
  const std::int64_t stride = params.slice_stride(slice);
  const std::int64_t dim = params.dim();
  const double rh = std::sqrt(params.h);

  auto check_color = [&](int k) {
    if (k < 1 || k > params.d) throw std::invalid_argument("apply_slice: color out of range");
  };

  if (op.kind == SliceOperatorKind::Kind::Time) {
    StateVector out = v;
    out *= params.h;
    return out;
  }

  StateVector out = StateVector::zero(params);
  // Enumerate all letter-0 positions for this slice: blocks of `stride`
  // contiguous entries repeating with period stride*(1+d).
  const std::int64_t period = stride * width;
  for (std::int64_t base = 0; base < dim; base += period) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t i0 = base + inner;
      switch (op.kind) {
        case SliceOperatorKind::Kind::Create:
          check_color(op.color_out);
          out.amps()(i0 + op.color_out * stride) = rh * v.amps()(i0);
          break;
        case SliceOperatorKind::Kind::Annihilate:
          check_color(op.color_in);
          out.amps()(i0) = rh * v.amps()(i0 + op.color_in * stride);
          break;
        case SliceOperatorKind::Kind::Gauge:
          check_color(op.color_out);
          check_color(op.color_in);
          out.amps()(i0 + op.color_out * stride) = v.amps()(i0 + op.color_in * stride);
          break;
        case SliceOperatorKind::Kind::Time:
          break;
      }
    }
  }
  return out;
}

StateVector slice_transition(int letter_out, int letter_in, int slice, const StateVector& v) {
  const LatticeParams& params = v.params();
  if (slice < 0 || slice >= params.num_slices)
    throw std::invalid_argument("slice_transition: slice out of range");
  if (letter_out < 0 || letter_out > params.d || letter_in < 0 || letter_in > params.d)
    throw std::invalid_argument("slice_transition: letter out of range");
  const std::int64_t stride = params.slice_stride(slice);
  const std::int64_t period = stride * (1 + params.d);
  StateVector out = StateVector::zero(params);
  for (std::int64_t base = 0; base < params.dim(); base += period)
    for (std::int64_t inner = 0; inner < stride; ++inner)
      out.amps()(base + inner + letter_out * stride) =
          v.amps()(base + inner + letter_in * stride);
  return out;
}

Vector discrete_exponential(const LatticeParams& params, const std::vector<Vector>& f) {
  if (std::int64_t(f.size()) != params.num_slices)
    throw std::invalid_argument("discrete_exponential: one value per slice required");
  const double rh = std::sqrt(params.h);
  Vector cur(1);
  cur(0) = 1.0;
  for (int i = 0; i < params.num_slices; ++i) {
    if (f[i].size() != params.d)
      throw std::invalid_argument("discrete_exponential: step value has wrong dimension");
    const std::int64_t m = cur.size();
    Vector next = Vector::Zero(m * (1 + params.d));
    next.segment(0, m) = cur;
    for (int k = 1; k <= params.d; ++k) next.segment(k * m, m) = (rh * f[i](k - 1)) * cur;
    cur.swap(next);
  }
  return cur;
}

StateVector tensor_with_initial(const LatticeParams& params, const Vector& u,
                                const Vector& noise_factor) {
  if (u.size() != params.n || noise_factor.size() != params.noise_dim())
    throw std::invalid_argument("tensor_with_initial: dimension mismatch");
  StateVector out = StateVector::zero(params);
  const std::int64_t noise = params.noise_dim();
  for (int p = 0; p < params.n; ++p)
    out.amps().segment(std::int64_t(p) * noise, noise) = u(p) * noise_factor;
  return out;
}

StateVector shift_slices(int s, const StateVector& v) {
  const LatticeParams& params = v.params();
  if (s < 0 || s > params.num_slices)
    throw std::invalid_argument("shift_slices: shift out of range");
  if (s == 0) return v;
  const std::int64_t noise = params.noise_dim();
  const std::int64_t keep = params.slice_stride(params.num_slices - s);
  const std::int64_t mult = params.slice_stride(s);
  StateVector out = StateVector::zero(params);
  for (std::int64_t idx = 0; idx < v.amps().size(); ++idx) {
    const Complex a = v.amps()(idx);
    if (a == 0.0) continue;
    const std::int64_t word = idx % noise;
    if (word / keep != 0)
      throw std::invalid_argument("shift_slices: nonvacuum content would leave the lattice");
    out.amps()(idx - word + word * mult) = a;
  }
  return out;
}

Complex conditional_expectation(int slice, const StateVector& u, const StateVector& w,
                                const LatticeOp& a) {
  return vacuum_projection(slice, u).dot(vacuum_projection(slice, a(vacuum_projection(slice, w))));
}

StateVector apply_initial(const Matrix& a, const StateVector& v) {
  const LatticeParams& params = v.params();
  if (a.rows() != params.n || a.cols() != params.n)
    throw std::invalid_argument("apply_initial: matrix does not match initial space");
  const std::int64_t noise = params.noise_dim();
  StateVector out = StateVector::zero(params);
  for (int p = 0; p < params.n; ++p)
    for (int q = 0; q < params.n; ++q)
      out.amps().segment(std::int64_t(p) * noise, noise) +=
          a(p, q) * v.amps().segment(std::int64_t(q) * noise, noise);
  return out;
}

StateVector apply_khat_block(const Matrix& block, int slice, const StateVector& v) {
  const LatticeParams& params = v.params();
  const int n = params.n;
  const int width = 1 + params.d;
  const int bd = width * n;
  if (block.rows() != bd || block.cols() != bd)
    throw std::invalid_argument("apply_khat_block: block has wrong dimension");
  if (slice < 0 || slice >= params.num_slices)
    throw std::invalid_argument("apply_khat_block: slice out of range");

  const std::int64_t noise = params.noise_dim();
  const std::int64_t stride = params.slice_stride(slice);
  const std::int64_t period = stride * width;
  StateVector out = StateVector::zero(params);
  Vector in_fiber(bd), out_fiber(bd);
  for (std::int64_t base = 0; base < noise; base += period) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t w0 = base + inner;
      for (int mu = 0; mu < width; ++mu)
        for (int p = 0; p < n; ++p)
          in_fiber(mu * n + p) = v.amps()(std::int64_t(p) * noise + w0 + mu * stride);
      out_fiber.noalias() = block * in_fiber;
      for (int mu = 0; mu < width; ++mu)
        for (int p = 0; p < n; ++p)
          out.amps()(std::int64_t(p) * noise + w0 + mu * stride) = out_fiber(mu * n + p);
    }
  }
  return out;
}

Matrix vacuum_compression(const LatticeParams& params, const LatticeOp& a) {
  Matrix out(params.n, params.n);
  const std::int64_t noise = params.noise_dim();
  for (int q = 0; q < params.n; ++q) {
    Vector e = Vector::Zero(params.n);
    e(q) = 1.0;
    StateVector img = a(vacuum_vector(params, e));
    for (int p = 0; p < params.n; ++p) out(p, q) = img.amps()(std::int64_t(p) * noise);
  }
  return out;
}

}  // namespace qfk
