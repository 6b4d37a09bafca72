#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "redpro/image.hpp"

namespace redpro {

enum class DenoiserKind {
  nlm,
  median,
  gaussian,
  box,
  projection_box,
  projection_halfspace,
  linear_symmetric,
  custom,
};

// A denoising map f plus its parameters. The projection/linear kinds are
// synthetic operators with closed-form fixed-point sets; they anchor the
// fixed-point and solver test suites.
struct DenoiserSpec {
  DenoiserKind kind = DenoiserKind::box;
  double strength = 1.0;  // sigma_f; NLM bandwidth, Gaussian std

  // nlm
  int patch_radius = 2;
  int search_radius = 5;

  // median / box window radius (window side = 2r+1)
  int window_radius = 1;

  // projection_box bounds
  double box_lo = 0.0;
  double box_hi = 255.0;

  // projection_halfspace: { x : <normal, x> <= offset }
  std::shared_ptr<const ImagePlane> halfspace_normal;
  double halfspace_offset = 0.0;

  // linear_symmetric: dense symmetric n x n matrix acting on the flattened
  // plane, n = plane height * width; eigenvalues expected in [0,1]
  std::shared_ptr<const std::vector<double>> weight_matrix;
  int weight_height = 0;
  int weight_width = 0;

  // custom map
  std::function<ImagePlane(const ImagePlane&)> fn;
};

DenoiserSpec make_nlm(double sigma_f, int patch_radius = 2, int search_radius = 5);
DenoiserSpec make_median(int window_radius = 1);
DenoiserSpec make_gaussian_denoiser(double sigma_f);
DenoiserSpec make_box_denoiser(int window_radius = 1);
DenoiserSpec make_projection_box(double lo, double hi);
DenoiserSpec make_projection_halfspace(ImagePlane normal, double offset);
// Validates symmetry (1e-12); eigenvalues in [0,1] are the caller's contract.
DenoiserSpec make_linear_symmetric(std::vector<double> matrix, int height, int width);
DenoiserSpec make_custom_denoiser(std::function<ImagePlane(const ImagePlane&)> fn,
                                  double strength = 1.0);

ImagePlane denoise(const DenoiserSpec& spec, const ImagePlane& x);

// Strength transfer: rescale input by native/target, denoise at the native
// strength, rescale the output back by target/native.
ImagePlane denoise_scaled(const DenoiserSpec& spec, const ImagePlane& x, double target_sigma);

// f_alpha = alpha f + (1 - alpha) id. Same fixed points as f; the residual
// of f_alpha is alpha times the residual of f.
struct RelaxedDenoiser {
  DenoiserSpec inner;
  double alpha = 1.0;
};

RelaxedDenoiser relax(const DenoiserSpec& spec, double alpha);
ImagePlane evaluate_relaxed(const RelaxedDenoiser& rd, const ImagePlane& x);
// One-shot form used by the solvers; alpha == 1 returns f(x) itself.
ImagePlane apply_relaxed(const DenoiserSpec& spec, double alpha, const ImagePlane& x);

// f_eps(x) = a x + (1-a) f(x) with a = eps / max(eps, ||x - f(x)||).
// Fixed points are exactly the eps-approximate fixed points of f.
struct EpsilonAdaptiveDenoiser {
  DenoiserSpec inner;
  double epsilon = 1.0;
};

EpsilonAdaptiveDenoiser epsilon_adapt(const DenoiserSpec& spec, double epsilon);
ImagePlane evaluate_epsilon_adaptive(const EpsilonAdaptiveDenoiser& ed, const ImagePlane& x);

}  // namespace redpro
