#include "redpro/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace redpro {

namespace {

int mirror_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

// Symmetric (edge-repeating) mirror pad.
ImagePlane mirror_pad(const ImagePlane& x, int pad) {
  ImagePlane out(x.height + 2 * pad, x.width + 2 * pad);
  for (int r = 0; r < out.height; ++r) {
    const int rr = mirror_index(r - pad, x.height);
    for (int c = 0; c < out.width; ++c)
      out.at(r, c) = x.at(rr, mirror_index(c - pad, x.width));
  }
  return out;
}

// Non-local means via one summed-area table per search offset. Weights use
// the mean squared patch difference with bandwidth h = strength; the center
// pixel enters with the maximum neighbor weight (Buades convention).
ImagePlane denoise_nlm(const DenoiserSpec& spec, const ImagePlane& x) {
  const int p = spec.patch_radius, s = spec.search_radius;
  if (p < 0 || s < 1) throw std::invalid_argument("nlm: bad patch/search radius");
  const double h2 = spec.strength * spec.strength;
  if (h2 <= 0.0) throw std::invalid_argument("nlm: strength must be positive");
  const int H = x.height, W = x.width;
  const int P = p + s;
  const ImagePlane xp = mirror_pad(x, P);
  const int H2 = H + 2 * p, W2 = W + 2 * p;  // rows/cols where patch sums are needed
  const double patch_count = (2.0 * p + 1.0) * (2.0 * p + 1.0);

  ImagePlane num(H, W, 0.0), den(H, W, 0.0), maxw(H, W, 0.0);
  std::vector<double> sat(static_cast<size_t>(H2 + 1) * (W2 + 1), 0.0);
  const int W2p1 = W2 + 1;

  for (int dy = -s; dy <= s; ++dy) {
    for (int dx = -s; dx <= s; ++dx) {
      if (dy == 0 && dx == 0) continue;
      // Summed-area table of squared differences for this offset.
      for (int i = 0; i < H2; ++i) {
        const int pr = P - p + i;
        double row_sum = 0.0;
        for (int j = 0; j < W2; ++j) {
          const int pc = P - p + j;
          const double d = xp.at(pr, pc) - xp.at(pr + dy, pc + dx);
          row_sum += d * d;
          sat[static_cast<size_t>(i + 1) * W2p1 + (j + 1)] =
              sat[static_cast<size_t>(i) * W2p1 + (j + 1)] + row_sum;
        }
      }
      for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
          const double patch_sum =
              sat[static_cast<size_t>(r + 2 * p + 1) * W2p1 + (c + 2 * p + 1)] -
              sat[static_cast<size_t>(r) * W2p1 + (c + 2 * p + 1)] -
              sat[static_cast<size_t>(r + 2 * p + 1) * W2p1 + c] +
              sat[static_cast<size_t>(r) * W2p1 + c];
          const double w = std::exp(-patch_sum / (patch_count * h2));
          num.at(r, c) += w * xp.at(P + r + dy, P + c + dx);
          den.at(r, c) += w;
          maxw.at(r, c) = std::max(maxw.at(r, c), w);
        }
      }
    }
  }

  ImagePlane out(H, W);
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      const double n = num.at(r, c) + maxw.at(r, c) * x.at(r, c);
      const double d = den.at(r, c) + maxw.at(r, c);
      out.at(r, c) = d > 0.0 ? n / d : x.at(r, c);
    }
  }
  return out;
}

ImagePlane denoise_median(const DenoiserSpec& spec, const ImagePlane& x) {
  const int r0 = spec.window_radius;
  if (r0 < 0) throw std::invalid_argument("median: negative window radius");
  const int side = 2 * r0 + 1;
  std::vector<double> window(static_cast<size_t>(side) * side);
  ImagePlane out(x.height, x.width);
  for (int r = 0; r < x.height; ++r) {
    for (int c = 0; c < x.width; ++c) {
      size_t n = 0;
      for (int i = -r0; i <= r0; ++i)
        for (int j = -r0; j <= r0; ++j)
          window[n++] = x.at(mirror_index(r + i, x.height), mirror_index(c + j, x.width));
      auto mid = window.begin() + window.size() / 2;
      std::nth_element(window.begin(), mid, window.end());
      out.at(r, c) = *mid;
    }
  }
  return out;
}

ImagePlane denoise_box(const DenoiserSpec& spec, const ImagePlane& x) {
  const int r0 = spec.window_radius;
  if (r0 < 0) throw std::invalid_argument("box: negative window radius");
  const double cnt = (2.0 * r0 + 1.0) * (2.0 * r0 + 1.0);
  ImagePlane out(x.height, x.width);
  for (int r = 0; r < x.height; ++r) {
    for (int c = 0; c < x.width; ++c) {
      double acc = 0.0;
      for (int i = -r0; i <= r0; ++i)
        for (int j = -r0; j <= r0; ++j)
          acc += x.at(mirror_index(r + i, x.height), mirror_index(c + j, x.width));
      out.at(r, c) = acc / cnt;
    }
  }
  return out;
}

ImagePlane denoise_gaussian(const DenoiserSpec& spec, const ImagePlane& x) {
  const double sigma = spec.strength;
  if (sigma <= 0.0) throw std::invalid_argument("gaussian: strength must be positive");
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-(i * double(i)) / (2.0 * sigma * sigma));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;

  ImagePlane tmp(x.height, x.width);
  for (int r = 0; r < x.height; ++r)
    for (int c = 0; c < x.width; ++c) {
      double acc = 0.0;
      for (int j = -radius; j <= radius; ++j)
        acc += taps[j + radius] * x.at(r, mirror_index(c + j, x.width));
      tmp.at(r, c) = acc;
    }
  ImagePlane out(x.height, x.width);
  for (int r = 0; r < x.height; ++r)
    for (int c = 0; c < x.width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += taps[i + radius] * tmp.at(mirror_index(r + i, x.height), c);
      out.at(r, c) = acc;
    }
  return out;
}

ImagePlane project_halfspace(const DenoiserSpec& spec, const ImagePlane& x) {
  const ImagePlane& a = *spec.halfspace_normal;
  check_same_shape(a, x, "projection_halfspace");
  const double s = dot(a, x);
  if (s <= spec.halfspace_offset) return x;
  const double t = (s - spec.halfspace_offset) / norm2_sq(a);
  return axpy(x, -t, a);
}

ImagePlane apply_linear_symmetric(const DenoiserSpec& spec, const ImagePlane& x) {
  if (x.height != spec.weight_height || x.width != spec.weight_width)
    throw std::invalid_argument("linear_symmetric: plane shape does not match weight matrix");
  const size_t n = x.size();
  const std::vector<double>& w = *spec.weight_matrix;
  ImagePlane out(x.height, x.width);
  for (size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (size_t c = 0; c < n; ++c) acc += w[r * n + c] * x.data[c];
    out.data[r] = acc;
  }
  return out;
}

}  // namespace

DenoiserSpec make_nlm(double sigma_f, int patch_radius, int search_radius) {
  if (sigma_f <= 0.0) throw std::invalid_argument("make_nlm: sigma_f must be positive");
  DenoiserSpec s;
  s.kind = DenoiserKind::nlm;
  s.strength = sigma_f;
  s.patch_radius = patch_radius;
  s.search_radius = search_radius;
  return s;
}

DenoiserSpec make_median(int window_radius) {
  DenoiserSpec s;
  s.kind = DenoiserKind::median;
  s.window_radius = window_radius;
  return s;
}

DenoiserSpec make_gaussian_denoiser(double sigma_f) {
  if (sigma_f <= 0.0)
    throw std::invalid_argument("make_gaussian_denoiser: sigma_f must be positive");
  DenoiserSpec s;
  s.kind = DenoiserKind::gaussian;
  s.strength = sigma_f;
  return s;
}

DenoiserSpec make_box_denoiser(int window_radius) {
  DenoiserSpec s;
  s.kind = DenoiserKind::box;
  s.window_radius = window_radius;
  return s;
}

DenoiserSpec make_projection_box(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("make_projection_box: need lo < hi");
  DenoiserSpec s;
  s.kind = DenoiserKind::projection_box;
  s.box_lo = lo;
  s.box_hi = hi;
  return s;
}

DenoiserSpec make_projection_halfspace(ImagePlane normal, double offset) {
  if (norm2(normal) == 0.0)
    throw std::invalid_argument("make_projection_halfspace: zero normal");
  DenoiserSpec s;
  s.kind = DenoiserKind::projection_halfspace;
  s.halfspace_normal = std::make_shared<const ImagePlane>(std::move(normal));
  s.halfspace_offset = offset;
  return s;
}

DenoiserSpec make_linear_symmetric(std::vector<double> matrix, int height, int width) {
  const size_t n = static_cast<size_t>(height) * width;
  if (matrix.size() != n * n)
    throw std::invalid_argument("make_linear_symmetric: matrix must be n x n for n = h*w");
  for (size_t r = 0; r < n; ++r)
    for (size_t c = r + 1; c < n; ++c)
      if (std::abs(matrix[r * n + c] - matrix[c * n + r]) > 1e-12)
        throw std::invalid_argument("make_linear_symmetric: matrix not symmetric");
  DenoiserSpec s;
  s.kind = DenoiserKind::linear_symmetric;
  s.weight_matrix = std::make_shared<const std::vector<double>>(std::move(matrix));
  s.weight_height = height;
  s.weight_width = width;
  return s;
}

DenoiserSpec make_custom_denoiser(std::function<ImagePlane(const ImagePlane&)> fn,
                                  double strength) {
  if (!fn) throw std::invalid_argument("make_custom_denoiser: empty function");
  DenoiserSpec s;
  s.kind = DenoiserKind::custom;
  s.strength = strength;
  s.fn = std::move(fn);
  return s;
}

ImagePlane denoise(const DenoiserSpec& spec, const ImagePlane& x) {
  switch (spec.kind) {
    case DenoiserKind::nlm:
      return denoise_nlm(spec, x);
    case DenoiserKind::median:
      return denoise_median(spec, x);
    case DenoiserKind::gaussian:
      return denoise_gaussian(spec, x);
    case DenoiserKind::box:
      return denoise_box(spec, x);
    case DenoiserKind::projection_box:
      return clamp_plane(x, spec.box_lo, spec.box_hi);
    case DenoiserKind::projection_halfspace:
      return project_halfspace(spec, x);
    case DenoiserKind::linear_symmetric:
      return apply_linear_symmetric(spec, x);
    case DenoiserKind::custom: {
      ImagePlane out = spec.fn(x);
      check_same_shape(out, x, "custom denoiser");
      return out;
    }
  }
  throw std::logic_error("denoise: unknown kind");
}

ImagePlane denoise_scaled(const DenoiserSpec& spec, const ImagePlane& x, double target_sigma) {
  if (target_sigma <= 0.0)
    throw std::invalid_argument("denoise_scaled: target sigma must be positive");
  const double native = spec.strength;
  if (native <= 0.0) throw std::invalid_argument("denoise_scaled: spec has no native strength");
  const double in_scale = native / target_sigma;
  ImagePlane out = denoise(spec, scale(x, in_scale));
  return scale(out, 1.0 / in_scale);
}

RelaxedDenoiser relax(const DenoiserSpec& spec, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("relax: alpha must be in (0,1]");
  return RelaxedDenoiser{spec, alpha};
}

ImagePlane apply_relaxed(const DenoiserSpec& spec, double alpha, const ImagePlane& x) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("apply_relaxed: alpha must be in (0,1]");
  ImagePlane fx = denoise(spec, x);
  if (alpha == 1.0) return fx;
  return lerp(fx, x, alpha);  // alpha*f(x) + (1-alpha)*x
}

ImagePlane evaluate_relaxed(const RelaxedDenoiser& rd, const ImagePlane& x) {
  return apply_relaxed(rd.inner, rd.alpha, x);
}

EpsilonAdaptiveDenoiser epsilon_adapt(const DenoiserSpec& spec, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon_adapt: epsilon must be positive");
  return EpsilonAdaptiveDenoiser{spec, epsilon};
}

ImagePlane evaluate_epsilon_adaptive(const EpsilonAdaptiveDenoiser& ed, const ImagePlane& x) {
  ImagePlane fx = denoise(ed.inner, x);
  const double r = norm2(sub(x, fx));
  if (r <= ed.epsilon) return x;  // already an epsilon-approximate fixed point
  const double a = ed.epsilon / r;
  return lerp(x, fx, a);  // a*x + (1-a)*f(x)
}

}  // namespace redpro
