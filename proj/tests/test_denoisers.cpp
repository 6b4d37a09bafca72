#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "redpro/denoise.hpp"
#include "redpro/image.hpp"
#include "test_util.hpp"

using namespace redpro;

TEST_CASE("box filter: averaging with periodic wrap") {
  const DenoiserSpec f = make_box_denoiser(1);

  SUBCASE("constant planes are fixed points") {
    const ImagePlane c(6, 6, 37.0);
    CHECK(max_abs_diff(denoise(f, c), c) < 1e-12);
  }

  SUBCASE("mean is preserved and an impulse spreads uniformly") {
    ImagePlane x(6, 6, 0.0);
    x.at(2, 3) = 9.0;
    const ImagePlane y = denoise(f, x);
    CHECK(mean(y) == doctest::Approx(mean(x)).epsilon(1e-12));
    // A 3x3 average turns a unit impulse into nine equal taps.
    int hot = 0;
    for (double v : y.data)
      if (std::abs(v - 1.0) < 1e-9)
        ++hot;
      else
        CHECK(std::abs(v) < 1e-9);
    CHECK(hot == 9);
  }
}

TEST_CASE("gaussian filter: symmetric smoothing operator") {
  const DenoiserSpec f = make_gaussian_denoiser(2.0);
  std::mt19937_64 rng(21);

  const ImagePlane c(8, 8, 112.0);
  CHECK(max_abs_diff(denoise(f, c), c) < 1e-10);

  // Self-adjoint: <f(x), y> == <x, f(y)>.
  const ImagePlane x = testutil::random_plane(8, 8, rng);
  const ImagePlane y = testutil::random_plane(8, 8, rng);
  CHECK(dot(denoise(f, x), y) == doctest::Approx(dot(x, denoise(f, y))).epsilon(1e-11));

  // Smoothing contracts deviations around the mean.
  const ImagePlane noisy = add(c, testutil::gaussian_plane(8, 8, rng, 10.0));
  CHECK(norm2(sub(denoise(f, noisy), c)) < norm2(sub(noisy, c)));
}

TEST_CASE("median filter") {
  const DenoiserSpec f = make_median(1);

  SUBCASE("constant planes are fixed points") {
    const ImagePlane c(5, 5, 8.0);
    CHECK(max_abs_diff(denoise(f, c), c) == 0.0);
  }

  SUBCASE("isolated impulses are removed") {
    ImagePlane x(7, 7, 5.0);
    x.at(3, 3) = 500.0;
    const ImagePlane y = denoise(f, x);
    for (double v : y.data) CHECK(v == 5.0);
  }

  SUBCASE("selects the middle order statistic") {
    // Plane with a known 3x3 neighborhood: values 1..9 shuffled around (1,1).
    ImagePlane x(3, 3);
    x.data = {9, 2, 7, 4, 5, 3, 8, 1, 6};
    const ImagePlane y = denoise(f, x);
    CHECK(y.at(1, 1) == 5.0);
  }
}

TEST_CASE("patch-similarity filter") {
  const DenoiserSpec f = make_nlm(3.0, 1, 3);
  std::mt19937_64 rng(22);

  SUBCASE("constant planes are fixed points") {
    const ImagePlane c(10, 10, 77.0);
    CHECK(max_abs_diff(denoise(f, c), c) < 1e-10);
  }

  SUBCASE("reduces additive noise around a flat region") {
    const ImagePlane c(12, 12, 120.0);
    const ImagePlane noisy = add(c, testutil::gaussian_plane(12, 12, rng, 3.0));
    const ImagePlane den = denoise(f, noisy);
    CHECK(norm2(sub(den, c)) < norm2(sub(noisy, c)));
  }

  SUBCASE("deterministic") {
    const ImagePlane x = testutil::random_plane(9, 9, rng);
    CHECK(max_abs_diff(denoise(f, x), denoise(f, x)) == 0.0);
  }
}

TEST_CASE("box projection") {
  const DenoiserSpec f = make_projection_box(10.0, 200.0);
  ImagePlane x(1, 4);
  x.data = {-3.0, 10.0, 150.0, 240.0};
  const ImagePlane p = denoise(f, x);
  CHECK(p.data[0] == 10.0);
  CHECK(p.data[1] == 10.0);
  CHECK(p.data[2] == 150.0);
  CHECK(p.data[3] == 200.0);
  CHECK(max_abs_diff(denoise(f, p), p) == 0.0);  // idempotent
}

TEST_CASE("halfspace projection") {
  std::mt19937_64 rng(23);
  ImagePlane a = testutil::gaussian_plane(4, 4, rng, 1.0);
  const double an2 = norm2_sq(a);
  const double offset = 5.0;
  const DenoiserSpec f = make_projection_halfspace(a, offset);

  SUBCASE("violating points land on the boundary along the normal") {
    ImagePlane x = testutil::random_plane(4, 4, rng, -3, 3);
    const double c = dot(a, x);
    if (c <= offset) x = axpy(x, (offset - c + 4.0) / an2, a);  // force a violation
    const ImagePlane p = denoise(f, x);
    CHECK(dot(a, p) == doctest::Approx(offset).epsilon(1e-10));
    // Displacement is parallel to the normal.
    const ImagePlane d = sub(x, p);
    const double cos2 = dot(d, a) * dot(d, a) / (norm2_sq(d) * an2);
    CHECK(cos2 == doctest::Approx(1.0).epsilon(1e-10));
    // Distance formula: ||x - p|| = (<a,x> - b) / ||a||.
    CHECK(norm2(d) == doctest::Approx((dot(a, x) - offset) / std::sqrt(an2)).epsilon(1e-10));
    CHECK(max_abs_diff(denoise(f, p), p) < 1e-10);
  }

  SUBCASE("feasible points are untouched") {
    ImagePlane x = testutil::random_plane(4, 4, rng, -3, 3);
    const double c = dot(a, x);
    if (c > offset) x = axpy(x, (offset - c - 1.0) / an2, a);
    CHECK(max_abs_diff(denoise(f, x), x) == 0.0);
  }
}

TEST_CASE("symmetric linear map") {
  std::mt19937_64 rng(24);
  const auto w = testutil::random_symmetric_psd(16, 0.9, rng);
  const DenoiserSpec f = make_linear_symmetric(w, 4, 4);

  const ImagePlane x = testutil::random_plane(4, 4, rng, -50, 50);
  const ImagePlane y = denoise(f, x);
  const auto y_ref = testutil::mat_vec(w, x.data, 16, 16);
  for (int i = 0; i < 16; ++i) CHECK(y.data[i] == doctest::Approx(y_ref[i]).epsilon(1e-12));

  SUBCASE("asymmetric matrices are rejected") {
    auto bad = w;
    bad[1] += 0.5;
    CHECK_THROWS_AS(make_linear_symmetric(bad, 4, 4), std::invalid_argument);
  }
}

TEST_CASE("custom maps delegate to the callable") {
  const DenoiserSpec f =
      make_custom_denoiser([](const ImagePlane& x) { return scale(x, -2.0); });
  ImagePlane x(2, 2, 3.0);
  const ImagePlane y = denoise(f, x);
  for (double v : y.data) CHECK(v == -6.0);
}

TEST_CASE("strength transfer rescales around the native strength") {
  std::mt19937_64 rng(25);
  // For a linear filter the input/output rescaling cancels exactly, so the
  // transfer must be a no-op.
  const DenoiserSpec g = make_gaussian_denoiser(2.0);
  const ImagePlane x = testutil::random_plane(8, 8, rng);
  CHECK(max_abs_diff(denoise_scaled(g, x, 4.0), denoise(g, x)) < 1e-10);

  // The patch-similarity filter is nonlinear: changing the target strength
  // must change the output.
  const DenoiserSpec n = make_nlm(3.0, 1, 2);
  const ImagePlane a = denoise_scaled(n, x, 6.0);
  const ImagePlane b = denoise(n, x);
  CHECK(all_finite(a));
  CHECK(max_abs_diff(a, b) > 1e-9);
}

TEST_CASE("relaxation blends the map with the identity") {
  std::mt19937_64 rng(26);
  const DenoiserSpec f = make_gaussian_denoiser(1.5);
  const ImagePlane x = testutil::random_plane(6, 6, rng);
  const double alpha = 0.35;

  const RelaxedDenoiser rd = relax(f, alpha);
  const ImagePlane fx = denoise(f, x);
  const ImagePlane rel = evaluate_relaxed(rd, x);
  for (size_t i = 0; i < x.size(); ++i)
    CHECK(rel.data[i] ==
          doctest::Approx(alpha * fx.data[i] + (1 - alpha) * x.data[i]).epsilon(1e-13));

  // One-shot form agrees, and alpha = 1 is byte-identical to the plain map.
  CHECK(max_abs_diff(apply_relaxed(f, alpha, x), rel) < 1e-14);
  CHECK(max_abs_diff(apply_relaxed(f, 1.0, x), fx) == 0.0);

  // The relaxed residual is alpha times the plain residual.
  CHECK(norm2(sub(x, rel)) == doctest::Approx(alpha * norm2(sub(x, fx))).epsilon(1e-12));
}

TEST_CASE("residual-capped variant") {
  std::mt19937_64 rng(27);
  // Constant map: the residual at x is just the distance to the target, so
  // every identity below has a closed form.
  const ImagePlane target(4, 4, 50.0);
  const DenoiserSpec f =
      make_custom_denoiser([target](const ImagePlane&) { return target; });

  const ImagePlane x = testutil::random_plane(4, 4, rng);
  const double r = norm2(sub(x, target));
  REQUIRE(r > 1.0);

  for (double eps : {0.25 * r, 0.8 * r, r, 1.5 * r}) {
    const EpsilonAdaptiveDenoiser ed = epsilon_adapt(f, eps);
    const ImagePlane fe = evaluate_epsilon_adaptive(ed, x);
    // Residual shrinks to max(0, r - eps) ...
    CHECK(norm2(sub(x, fe)) == doctest::Approx(std::max(0.0, r - eps)).epsilon(1e-10));
    // ... and the output moves at most eps away from the plain output.
    CHECK(norm2(sub(fe, target)) == doctest::Approx(std::min(r, eps)).epsilon(1e-10));
  }

  SUBCASE("points already within eps are exact fixed points") {
    const EpsilonAdaptiveDenoiser ed = epsilon_adapt(f, 2.0 * r);
    CHECK(max_abs_diff(evaluate_epsilon_adaptive(ed, x), x) < 1e-13);
  }
}
