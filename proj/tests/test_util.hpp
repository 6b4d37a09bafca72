#pragma once

// Shared helpers for the test suites: seeded random planes, dense linear
// algebra oracles, and scratch directories. Everything here is deliberately
// naive and independent of the library's fast paths so it can serve as an
// oracle for them.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "redpro/forward.hpp"
#include "redpro/image.hpp"

namespace testutil {

inline redpro::ImagePlane random_plane(int h, int w, std::mt19937_64& rng, double lo = 0.0,
                                       double hi = 255.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  redpro::ImagePlane p(h, w);
  for (double& v : p.data) v = dist(rng);
  return p;
}

inline redpro::ImagePlane gaussian_plane(int h, int w, std::mt19937_64& rng,
                                         double std_dev = 1.0, double mean = 0.0) {
  std::normal_distribution<double> dist(mean, std_dev);
  redpro::ImagePlane p(h, w);
  for (double& v : p.data) v = dist(rng);
  return p;
}

// Direct O(n^2 k^2) circular convolution with the kernel centered on its
// middle tap: y(r,s) = sum_{i,j} K(i,j) x((r - (i-c)) mod h, (s - (j-c)) mod w).
inline redpro::ImagePlane direct_circular_conv(const redpro::Kernel& k,
                                               const redpro::ImagePlane& x) {
  const int h = x.height, w = x.width, c = k.size / 2;
  auto wrap = [](int a, int n) {
    int m = a % n;
    return m < 0 ? m + n : m;
  };
  redpro::ImagePlane y(h, w, 0.0);
  for (int r = 0; r < h; ++r)
    for (int s = 0; s < w; ++s) {
      double acc = 0.0;
      for (int i = 0; i < k.size; ++i)
        for (int j = 0; j < k.size; ++j)
          acc += k.at(i, j) * x.at(wrap(r - (i - c), h), wrap(s - (j - c), w));
      y.at(r, s) = acc;
    }
  return y;
}

// Adjoint of the above (circular correlation).
inline redpro::ImagePlane direct_circular_corr(const redpro::Kernel& k,
                                               const redpro::ImagePlane& u) {
  const int h = u.height, w = u.width, c = k.size / 2;
  auto wrap = [](int a, int n) {
    int m = a % n;
    return m < 0 ? m + n : m;
  };
  redpro::ImagePlane y(h, w, 0.0);
  for (int r = 0; r < h; ++r)
    for (int s = 0; s < w; ++s) {
      double acc = 0.0;
      for (int i = 0; i < k.size; ++i)
        for (int j = 0; j < k.size; ++j)
          acc += k.at(i, j) * u.at(wrap(r + (i - c), h), wrap(s + (j - c), w));
      y.at(r, s) = acc;
    }
  return y;
}

// Dense row-major (out_n x in_n) matrix of a linear operator, one basis
// vector at a time.
inline std::vector<double> materialize(const redpro::LinearOperator& op) {
  const auto s = op.shape();
  const size_t in_n = static_cast<size_t>(s.in_height) * s.in_width;
  const size_t out_n = static_cast<size_t>(s.out_height) * s.out_width;
  std::vector<double> m(out_n * in_n, 0.0);
  for (size_t c = 0; c < in_n; ++c) {
    redpro::ImagePlane e(s.in_height, s.in_width, 0.0);
    e.data[c] = 1.0;
    const redpro::ImagePlane col = op.apply(e);
    for (size_t r = 0; r < out_n; ++r) m[r * in_n + c] = col.data[r];
  }
  return m;
}

// Gaussian elimination with partial pivoting on a row-major n x n system.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const size_t n = b.size();
  if (a.size() != n * n) throw std::invalid_argument("dense_solve: shape mismatch");
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    if (piv != col) {
      for (size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (size_t c = r + 1; c < n; ++c) acc -= a[r * n + c] * x[c];
    x[r] = acc / a[r * n + r];
  }
  return x;
}

// y = M x for row-major (rows x cols) M.
inline std::vector<double> mat_vec(const std::vector<double>& m, const std::vector<double>& x,
                                   size_t rows, size_t cols) {
  std::vector<double> y(rows, 0.0);
  for (size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (size_t c = 0; c < cols; ++c) acc += m[r * cols + c] * x[c];
    y[r] = acc;
  }
  return y;
}

// Random symmetric PSD matrix with spectral norm <= top (power-iteration
// normalized), for synthetic linear denoisers.
inline std::vector<double> random_symmetric_psd(size_t n, double top, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> b(n * n);
  for (double& v : b) v = dist(rng);
  std::vector<double> s(n * n, 0.0);  // B B^T / n
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c <= r; ++c) {
      double acc = 0.0;
      for (size_t k = 0; k < n; ++k) acc += b[r * n + k] * b[c * n + k];
      s[r * n + c] = s[c * n + r] = acc / static_cast<double>(n);
    }
  // Spectral norm by power iteration.
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  double lam = 1.0;
  for (int it = 0; it < 300; ++it) {
    std::vector<double> sv = mat_vec(s, v, n, n);
    double nn = 0.0;
    for (double x : sv) nn += x * x;
    nn = std::sqrt(nn);
    if (nn == 0.0) break;
    lam = nn;
    for (size_t i = 0; i < n; ++i) v[i] = sv[i] / nn;
  }
  const double f = top / (lam * 1.0000001);  // stay strictly below top
  for (double& x : s) x *= f;
  return s;
}

// Unique scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
