#include "redpro/fft_utils.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace redpro {

namespace {

// FFTW's planner is not thread-safe; executing a plan on fresh arrays is.
// Plans are created with FFTW_UNALIGNED so they can run on any buffer.
class PlanCache {
 public:
  fftw_plan get(int h, int w, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::make_tuple(h, w, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(static_cast<size_t>(h) * w);
    std::vector<std::complex<double>> out(in.size());
    fftw_plan p = fftw_plan_dft_2d(h, w, reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw_plan_dft_2d failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

Spectrum run(const Spectrum& in, int h, int w, int sign) {
  if (static_cast<size_t>(h) * w != in.size())
    throw std::invalid_argument("dft2: buffer size does not match dimensions");
  Spectrum out(in.size());
  Spectrum tmp = in;  // fftw may not accept const input
  fftw_plan p = cache().get(h, w, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

Spectrum dft2(const ImagePlane& x) {
  Spectrum in(x.size());
  for (size_t i = 0; i < x.size(); ++i) in[i] = x.data[i];
  return run(in, x.height, x.width, FFTW_FORWARD);
}

Spectrum dft2(const Spectrum& x, int height, int width) {
  return run(x, height, width, FFTW_FORWARD);
}

ImagePlane idft2_real(const Spectrum& s, int height, int width) {
  Spectrum out = run(s, height, width, FFTW_BACKWARD);
  ImagePlane img(height, width);
  const double scale = 1.0 / (static_cast<double>(height) * width);
  for (size_t i = 0; i < out.size(); ++i) img.data[i] = out[i].real() * scale;
  return img;
}

}  // namespace redpro
