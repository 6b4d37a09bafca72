#pragma once

#include <complex>
#include <vector>

#include "redpro/image.hpp"

namespace redpro {

// Row-major full complex spectrum of an h x w plane.
using Spectrum = std::vector<std::complex<double>>;

// Unnormalized forward 2-D DFT.
Spectrum dft2(const ImagePlane& x);
Spectrum dft2(const Spectrum& x, int height, int width);

// Inverse 2-D DFT with 1/(h*w) normalization; returns the real part.
ImagePlane idft2_real(const Spectrum& s, int height, int width);

}  // namespace redpro
