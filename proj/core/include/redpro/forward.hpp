#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "redpro/image.hpp"

namespace redpro {

// Square blur kernel; odd side, taps sum to 1.
struct Kernel {
  int size = 0;
  std::vector<double> taps;  // row-major size*size

  double at(int i, int j) const { return taps[static_cast<size_t>(i) * size + j]; }
};

// Throws unless the side is odd and positive and taps sum to 1 within 1e-12.
void validate_kernel(const Kernel& k);

Kernel make_delta_kernel();
Kernel make_uniform_kernel(int size);
Kernel make_gaussian_kernel(int size, double std_dev);

enum class DegradationKind { blur, blur_then_decimate };

struct DegradationModel {
  DegradationKind kind = DegradationKind::blur;
  Kernel kernel;
  int decimation_factor = 1;  // used by blur_then_decimate
  double noise_sigma = 0.0;   // additive white Gaussian noise std
};

struct OperatorShape {
  int in_height = 0, in_width = 0;
  int out_height = 0, out_width = 0;
};

// A linear map between image planes with an exact adjoint. Circulant
// operators expose their DFT diagonal so proximal/inverse steps can run in
// closed form; everything else goes through conjugate gradients.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual ImagePlane apply(const ImagePlane& x) const = 0;
  virtual ImagePlane apply_adjoint(const ImagePlane& u) const = 0;
  virtual OperatorShape shape() const = 0;
  // Non-null only when the operator is diagonalized by the 2-D DFT.
  virtual const std::vector<std::complex<double>>* frequency_response() const {
    return nullptr;
  }
};

// Circular (periodic) convolution with the kernel centered on its middle tap.
std::shared_ptr<const LinearOperator> make_circulant_operator(const Kernel& k, int height,
                                                              int width);
// Circular convolution followed by top-left-of-block decimation.
std::shared_ptr<const LinearOperator> make_blur_decimate_operator(const Kernel& k, int factor,
                                                                  int height, int width);
// Dense matrix acting on flattened planes (rows x cols), for small problems.
std::shared_ptr<const LinearOperator> make_dense_operator(std::vector<double> matrix,
                                                          OperatorShape shape);

// Operator for a degradation model at the given input size.
std::shared_ptr<const LinearOperator> make_operator(const DegradationModel& m, int height,
                                                    int width);

ImagePlane apply_forward(const DegradationModel& m, const ImagePlane& x);
ImagePlane apply_adjoint(const DegradationModel& m, const ImagePlane& u, int in_height,
                         int in_width);

// Forward model plus seeded white Gaussian noise.
ImagePlane degrade(const DegradationModel& m, const ImagePlane& x, uint64_t seed);

// Data term (1/(2 sigma^2)) ||H x - y||^2.
struct FidelityModel {
  std::shared_ptr<const LinearOperator> op;
  ImagePlane y;
  double sigma = 1.0;
  double lipschitz = 0.0;  // inflated bound on ||H^T H|| / sigma^2
};

// Power-iteration estimate of ||H^T H|| / sigma^2, inflated by 1% so the
// returned value upper-bounds the true gradient Lipschitz constant.
double estimate_lipschitz(const LinearOperator& op, double sigma,
                          double rel_tol = 1e-8, int max_iters = 100000);

FidelityModel make_fidelity(const DegradationModel& m, const ImagePlane& y, int in_height,
                            int in_width);
FidelityModel make_fidelity(std::shared_ptr<const LinearOperator> op, ImagePlane y,
                            double sigma);

double fidelity_value(const FidelityModel& fm, const ImagePlane& x);
ImagePlane fidelity_grad(const FidelityModel& fm, const ImagePlane& x);

// argmin_v  (weight/sigma^2) * (1/2)||H v - y||^2 + (1/2)||v - u||^2,
// i.e. the proximal map of weight * fidelity at u. Closed form per DFT
// frequency for circulant H; conjugate gradients otherwise. When
// require_convergence is set, exhausting the budget before the tolerance is
// met throws; otherwise the best iterate is returned (the inexact inner
// solve used by the iterative solvers). Numerical breakdown throws either
// way.
ImagePlane fidelity_prox(const FidelityModel& fm, const ImagePlane& u, double weight,
                         int cg_max_iters = 500, double cg_tol = 1e-12,
                         bool require_convergence = true);

}  // namespace redpro
