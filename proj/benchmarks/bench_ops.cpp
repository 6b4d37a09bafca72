// Microbenchmarks for the operations that dominate restoration runs: the
// forward/adjoint blur, the denoisers, one solver iteration, the anchored
// projection, and the data-term prox in both its closed-form and iterative
// routes.

#include <benchmark/benchmark.h>

#include <random>

#include "redpro/bench.hpp"
#include "redpro/denoise.hpp"
#include "redpro/fixpoint.hpp"
#include "redpro/forward.hpp"
#include "redpro/image.hpp"
#include "redpro/solve.hpp"

namespace {

using namespace redpro;

ImagePlane bench_plane(int side, std::uint64_t seed) {
  RgbImage scene = make_test_scene(side, side, seed);
  return rgb_to_ycbcr(scene).y;
}

void BM_CirculantApply(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  auto op = make_circulant_operator(make_uniform_kernel(9), side, side);
  ImagePlane x = bench_plane(side, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op->apply(x));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_CirculantAdjoint(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  auto op = make_circulant_operator(make_uniform_kernel(9), side, side);
  ImagePlane x = bench_plane(side, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op->apply_adjoint(x));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_NlmDenoise(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  DenoiserSpec f = make_nlm(3.25);
  ImagePlane x = bench_plane(side, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise(f, x));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_GaussianDenoise(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  DenoiserSpec f = make_gaussian_denoiser(2.0);
  ImagePlane x = bench_plane(side, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise(f, x));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_MedianDenoise(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  DenoiserSpec f = make_median(1);
  ImagePlane x = bench_plane(side, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise(f, x));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

// One hybrid-steepest-descent iteration: gradient step plus relaxed denoiser.
void BM_HsdIteration(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  DegradationModel m = degradation_for_task(TaskKind::deblur_uniform);
  ImagePlane clean = bench_plane(side, 3);
  ImagePlane y = degrade(m, clean, 4);
  FidelityModel fm = make_fidelity(m, y, side, side);
  DenoiserSpec f = make_gaussian_denoiser(2.0);
  const double mu = 1.0 / fm.lipschitz;
  ImagePlane x = y;
  for (auto _ : state) {
    ImagePlane v = axpy(x, -mu, fidelity_grad(fm, x));
    benchmark::DoNotOptimize(apply_relaxed(f, 0.5, v));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_HalpernProject(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  DenoiserSpec f = make_projection_box(10.0, 240.0);
  ImagePlane x = bench_plane(side, 5);
  x.at(0, 0) = 400.0;  // keep the constraint active
  HalpernConfig cfg;
  cfg.max_inner = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(halpern_project(f, x, cfg));
  }
}

void BM_FidelityProxClosedForm(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  auto op = make_circulant_operator(make_gaussian_kernel(5, 1.3), side, side);
  ImagePlane clean = bench_plane(side, 6);
  FidelityModel fm = make_fidelity(op, op->apply(clean), 1.2);
  ImagePlane u = bench_plane(side, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity_prox(fm, u, 0.7));
  }
}

void BM_FidelityProxConjugateGradient(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  // Blur-then-decimate has no spectral shortcut, so the prox runs CG.
  auto op = make_blur_decimate_operator(make_gaussian_kernel(5, 1.3), 2, side, side);
  ImagePlane clean = bench_plane(side, 8);
  FidelityModel fm = make_fidelity(op, op->apply(clean), 1.2);
  ImagePlane u = bench_plane(side, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity_prox(fm, u, 0.7, 200, 1e-10));
  }
}

}  // namespace

BENCHMARK(BM_CirculantApply)->Arg(64)->Arg(256);
BENCHMARK(BM_CirculantAdjoint)->Arg(64)->Arg(256);
BENCHMARK(BM_NlmDenoise)->Arg(64)->Arg(128);
BENCHMARK(BM_GaussianDenoise)->Arg(64)->Arg(256);
BENCHMARK(BM_MedianDenoise)->Arg(64)->Arg(256);
BENCHMARK(BM_HsdIteration)->Arg(64)->Arg(128);
BENCHMARK(BM_HalpernProject)->Arg(32)->Arg(64);
BENCHMARK(BM_FidelityProxClosedForm)->Arg(64)->Arg(256);
BENCHMARK(BM_FidelityProxConjugateGradient)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
