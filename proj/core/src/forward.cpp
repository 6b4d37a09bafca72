#include "redpro/forward.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "redpro/fft_utils.hpp"

namespace redpro {

void validate_kernel(const Kernel& k) {
  if (k.size <= 0 || k.size % 2 == 0)
    throw std::invalid_argument("Kernel: side must be odd and positive, got " +
                                std::to_string(k.size));
  if (k.taps.size() != static_cast<size_t>(k.size) * k.size)
    throw std::invalid_argument("Kernel: tap count does not match side");
  double sum = 0.0;
  for (double t : k.taps) sum += t;
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("Kernel: taps must sum to 1, got " + std::to_string(sum));
}

Kernel make_delta_kernel() {
  Kernel k;
  k.size = 1;
  k.taps = {1.0};
  return k;
}

Kernel make_uniform_kernel(int size) {
  Kernel k;
  k.size = size;
  k.taps.assign(static_cast<size_t>(size) * size, 1.0 / (static_cast<double>(size) * size));
  validate_kernel(k);
  return k;
}

Kernel make_gaussian_kernel(int size, double std_dev) {
  if (std_dev <= 0.0) throw std::invalid_argument("make_gaussian_kernel: std must be positive");
  Kernel k;
  k.size = size;
  k.taps.resize(static_cast<size_t>(size) * size);
  const int c = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double d2 = (i - c) * double(i - c) + (j - c) * double(j - c);
      const double v = std::exp(-d2 / (2.0 * std_dev * std_dev));
      k.taps[static_cast<size_t>(i) * size + j] = v;
      sum += v;
    }
  }
  for (double& t : k.taps) t /= sum;
  validate_kernel(k);
  return k;
}

namespace {

int pos_mod(int a, int n) {
  const int m = a % n;
  return m < 0 ? m + n : m;
}

// Kernel embedded on an h x w grid with its center tap at the origin and
// periodic wraparound, so DFT(embedding) is the operator's transfer function.
Spectrum transfer_function(const Kernel& k, int h, int w) {
  ImagePlane e(h, w, 0.0);
  const int c = k.size / 2;
  for (int i = 0; i < k.size; ++i)
    for (int j = 0; j < k.size; ++j)
      e.at(pos_mod(i - c, h), pos_mod(j - c, w)) += k.at(i, j);
  return dft2(e);
}

class CirculantConvOp final : public LinearOperator {
 public:
  CirculantConvOp(const Kernel& k, int h, int w) : h_(h), w_(w) {
    validate_kernel(k);
    if (h <= 0 || w <= 0) throw std::invalid_argument("circulant operator: empty plane");
    identity_ = k.size == 1 && k.taps[0] == 1.0;
    otf_ = transfer_function(k, h, w);
  }

  ImagePlane apply(const ImagePlane& x) const override {
    check_shape_in(x);
    if (identity_) return x;  // exact pass-through, no transform roundoff
    Spectrum s = dft2(x);
    for (size_t i = 0; i < s.size(); ++i) s[i] *= otf_[i];
    return idft2_real(s, h_, w_);
  }

  ImagePlane apply_adjoint(const ImagePlane& u) const override {
    check_shape_in(u);
    if (identity_) return u;
    Spectrum s = dft2(u);
    for (size_t i = 0; i < s.size(); ++i) s[i] *= std::conj(otf_[i]);
    return idft2_real(s, h_, w_);
  }

  OperatorShape shape() const override { return {h_, w_, h_, w_}; }

  const std::vector<std::complex<double>>* frequency_response() const override {
    return &otf_;
  }

 private:
  void check_shape_in(const ImagePlane& x) const {
    if (x.height != h_ || x.width != w_)
      throw std::invalid_argument("circulant operator: plane shape mismatch");
  }
  int h_, w_;
  bool identity_ = false;
  Spectrum otf_;
};

class BlurDecimateOp final : public LinearOperator {
 public:
  BlurDecimateOp(const Kernel& k, int factor, int h, int w)
      : blur_(k, h, w), factor_(factor), h_(h), w_(w) {
    if (factor <= 0) throw std::invalid_argument("decimation factor must be positive");
    if (h % factor != 0 || w % factor != 0)
      throw std::invalid_argument("decimation: dimensions " + std::to_string(h) + "x" +
                                  std::to_string(w) + " not divisible by factor " +
                                  std::to_string(factor));
  }

  ImagePlane apply(const ImagePlane& x) const override {
    ImagePlane blurred = blur_.apply(x);
    ImagePlane out(h_ / factor_, w_ / factor_);
    for (int r = 0; r < out.height; ++r)
      for (int c = 0; c < out.width; ++c) out.at(r, c) = blurred.at(r * factor_, c * factor_);
    return out;
  }

  ImagePlane apply_adjoint(const ImagePlane& u) const override {
    if (u.height != h_ / factor_ || u.width != w_ / factor_)
      throw std::invalid_argument("blur_decimate adjoint: plane shape mismatch");
    ImagePlane up(h_, w_, 0.0);
    for (int r = 0; r < u.height; ++r)
      for (int c = 0; c < u.width; ++c) up.at(r * factor_, c * factor_) = u.at(r, c);
    return blur_.apply_adjoint(up);
  }

  OperatorShape shape() const override { return {h_, w_, h_ / factor_, w_ / factor_}; }

 private:
  CirculantConvOp blur_;
  int factor_, h_, w_;
};

class DenseMatrixOp final : public LinearOperator {
 public:
  DenseMatrixOp(std::vector<double> m, OperatorShape s) : m_(std::move(m)), s_(s) {
    in_n_ = static_cast<size_t>(s.in_height) * s.in_width;
    out_n_ = static_cast<size_t>(s.out_height) * s.out_width;
    if (m_.size() != in_n_ * out_n_)
      throw std::invalid_argument("dense operator: matrix size does not match shape");
  }

  ImagePlane apply(const ImagePlane& x) const override {
    if (x.size() != in_n_) throw std::invalid_argument("dense operator: input shape mismatch");
    ImagePlane out(s_.out_height, s_.out_width);
    for (size_t r = 0; r < out_n_; ++r) {
      double acc = 0.0;
      for (size_t c = 0; c < in_n_; ++c) acc += m_[r * in_n_ + c] * x.data[c];
      out.data[r] = acc;
    }
    return out;
  }

  ImagePlane apply_adjoint(const ImagePlane& u) const override {
    if (u.size() != out_n_) throw std::invalid_argument("dense operator: output shape mismatch");
    ImagePlane out(s_.in_height, s_.in_width, 0.0);
    for (size_t r = 0; r < out_n_; ++r)
      for (size_t c = 0; c < in_n_; ++c) out.data[c] += m_[r * in_n_ + c] * u.data[r];
    return out;
  }

  OperatorShape shape() const override { return s_; }

 private:
  std::vector<double> m_;
  OperatorShape s_;
  size_t in_n_, out_n_;
};

}  // namespace

std::shared_ptr<const LinearOperator> make_circulant_operator(const Kernel& k, int height,
                                                              int width) {
  return std::make_shared<CirculantConvOp>(k, height, width);
}

std::shared_ptr<const LinearOperator> make_blur_decimate_operator(const Kernel& k, int factor,
                                                                  int height, int width) {
  return std::make_shared<BlurDecimateOp>(k, factor, height, width);
}

std::shared_ptr<const LinearOperator> make_dense_operator(std::vector<double> matrix,
                                                          OperatorShape shape) {
  return std::make_shared<DenseMatrixOp>(std::move(matrix), shape);
}

std::shared_ptr<const LinearOperator> make_operator(const DegradationModel& m, int height,
                                                    int width) {
  switch (m.kind) {
    case DegradationKind::blur:
      return make_circulant_operator(m.kernel, height, width);
    case DegradationKind::blur_then_decimate:
      return make_blur_decimate_operator(m.kernel, m.decimation_factor, height, width);
  }
  throw std::logic_error("make_operator: unknown degradation kind");
}

ImagePlane apply_forward(const DegradationModel& m, const ImagePlane& x) {
  return make_operator(m, x.height, x.width)->apply(x);
}

ImagePlane apply_adjoint(const DegradationModel& m, const ImagePlane& u, int in_height,
                         int in_width) {
  return make_operator(m, in_height, in_width)->apply_adjoint(u);
}

ImagePlane degrade(const DegradationModel& m, const ImagePlane& x, uint64_t seed) {
  ImagePlane obs = apply_forward(m, x);
  if (m.noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, m.noise_sigma);
    for (double& v : obs.data) v += noise(rng);
  }
  return obs;
}

double estimate_lipschitz(const LinearOperator& op, double sigma, double rel_tol,
                          int max_iters) {
  if (sigma <= 0.0) throw std::invalid_argument("estimate_lipschitz: sigma must be positive");
  const OperatorShape s = op.shape();
  ImagePlane v(s.in_height, s.in_width);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double& e : v.data) e = uni(rng);
  double nv = norm2(v);
  if (nv == 0.0) throw std::runtime_error("estimate_lipschitz: zero start vector");
  for (double& e : v.data) e /= nv;

  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    ImagePlane w = op.apply_adjoint(op.apply(v));
    const double next = dot(v, w);  // Rayleigh quotient of H^T H
    const double wn = norm2(w);
    if (wn == 0.0) { lambda = 0.0; break; }
    for (size_t i = 0; i < w.size(); ++i) v.data[i] = w.data[i] / wn;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return 1.01 * lambda / (sigma * sigma);
}

FidelityModel make_fidelity(const DegradationModel& m, const ImagePlane& y, int in_height,
                            int in_width) {
  auto op = make_operator(m, in_height, in_width);
  const OperatorShape s = op->shape();
  if (y.height != s.out_height || y.width != s.out_width)
    throw std::invalid_argument("make_fidelity: observation shape mismatch");
  const double sigma = m.noise_sigma > 0.0 ? m.noise_sigma : 1.0;
  FidelityModel fm{op, y, sigma, 0.0};
  fm.lipschitz = estimate_lipschitz(*op, sigma);
  return fm;
}

FidelityModel make_fidelity(std::shared_ptr<const LinearOperator> op, ImagePlane y,
                            double sigma) {
  const OperatorShape s = op->shape();
  if (y.height != s.out_height || y.width != s.out_width)
    throw std::invalid_argument("make_fidelity: observation shape mismatch");
  FidelityModel fm{std::move(op), std::move(y), sigma, 0.0};
  fm.lipschitz = estimate_lipschitz(*fm.op, sigma);
  return fm;
}

double fidelity_value(const FidelityModel& fm, const ImagePlane& x) {
  ImagePlane r = sub(fm.op->apply(x), fm.y);
  return norm2_sq(r) / (2.0 * fm.sigma * fm.sigma);
}

ImagePlane fidelity_grad(const FidelityModel& fm, const ImagePlane& x) {
  ImagePlane r = sub(fm.op->apply(x), fm.y);
  return scale(fm.op->apply_adjoint(r), 1.0 / (fm.sigma * fm.sigma));
}

ImagePlane fidelity_prox(const FidelityModel& fm, const ImagePlane& u, double weight,
                         int cg_max_iters, double cg_tol, bool require_convergence) {
  if (weight < 0.0) throw std::invalid_argument("fidelity_prox: negative weight");
  const OperatorShape s = fm.op->shape();
  if (u.height != s.in_height || u.width != s.in_width)
    throw std::invalid_argument("fidelity_prox: input shape mismatch");
  const double w = weight / (fm.sigma * fm.sigma);
  if (w == 0.0) return u;

  if (const auto* otf = fm.op->frequency_response()) {
    Spectrum uh = dft2(u);
    Spectrum yh = dft2(fm.y);
    for (size_t i = 0; i < uh.size(); ++i) {
      const std::complex<double> o = (*otf)[i];
      uh[i] = (uh[i] + w * std::conj(o) * yh[i]) / (1.0 + w * std::norm(o));
    }
    return idft2_real(uh, s.in_height, s.in_width);
  }

  // Conjugate gradients on (I + w H^T H) v = u + w H^T y.
  auto A = [&](const ImagePlane& v) {
    return axpy(v, w, fm.op->apply_adjoint(fm.op->apply(v)));
  };
  ImagePlane b = axpy(u, w, fm.op->apply_adjoint(fm.y));
  const double bn = norm2(b);
  if (bn == 0.0) return ImagePlane(s.in_height, s.in_width, 0.0);

  ImagePlane v = u;
  ImagePlane r = sub(b, A(v));
  ImagePlane p = r;
  double rs = norm2_sq(r);
  for (int it = 0; it < cg_max_iters; ++it) {
    if (std::sqrt(rs) <= cg_tol * bn) return v;
    ImagePlane Ap = A(p);
    const double denom = dot(p, Ap);
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      throw std::runtime_error("fidelity_prox: CG breakdown (curvature " +
                               std::to_string(denom) + ")");
    }
    const double alpha = rs / denom;
    v = axpy(v, alpha, p);
    r = axpy(r, -alpha, Ap);
    const double rs_next = norm2_sq(r);
    p = axpy(r, rs_next / rs, p);
    rs = rs_next;
  }
  if (std::sqrt(rs) <= cg_tol * bn || !require_convergence) return v;
  throw std::runtime_error("fidelity_prox: CG did not converge in " +
                           std::to_string(cg_max_iters) +
                           " iterations (relative residual " +
                           std::to_string(std::sqrt(rs) / bn) + ")");
}

}  // namespace redpro
