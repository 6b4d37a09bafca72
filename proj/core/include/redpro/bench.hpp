#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redpro/denoise.hpp"
#include "redpro/fixpoint.hpp"
#include "redpro/forward.hpp"
#include "redpro/image.hpp"
#include "redpro/solve.hpp"

namespace redpro {

// ---------------------------------------------------------------------------
// Benchmark tasks
// ---------------------------------------------------------------------------

enum class TaskKind { deblur_uniform, deblur_gaussian, superres };

std::string to_string(TaskKind task);
TaskKind task_from_string(const std::string& name);

// The degradation each task applies:
//   deblur_uniform:  9x9 uniform blur, noise sigma = sqrt(2)
//   deblur_gaussian: 25x25 Gaussian blur (std 1.6), noise sigma = sqrt(2)
//   superres:        7x7 Gaussian blur (std 1.6), decimation 3, noise sigma = 5
DegradationModel degradation_for_task(TaskKind task);

// Per-task tuning defaults shared by the solver presets: denoiser strength,
// regularization weight, and the inner linear-solve budget (0 = closed form).
struct TaskDefaults {
  double sigma_f = 3.25;
  double lambda = 0.02;
  int m1 = 0;
};

TaskDefaults task_defaults(TaskKind task);

// Base gradient step mu0 = 2 / (sigma_noise^-2 + lambda) for the task's
// noise level.
double default_base_step(TaskKind task, double lambda);

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  TaskKind task = TaskKind::deblur_uniform;
  DegradationModel degradation;       // defaults to degradation_for_task(task)
  std::vector<std::string> images;    // input PNG paths
  DenoiserSpec denoiser;              // defaults to NLM at the task's sigma_f
  std::string solver_id = "hsd";      // see dispatch_solve for accepted ids
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

// Config with the task's degradation and default NLM denoiser filled in;
// the solver block starts from SolverConfig defaults (apply a preset or a
// config file on top).
ExperimentConfig make_experiment_config(TaskKind task);

// Named parameter presets, one per benchmark column: red_fp, red_admm,
// red_sd, hsd, rrp_fp, rrp_admm, rrp_sd, approx_fp, approx_admm, approx_sd.
// Applying a preset overwrites solver_id and the solver block using the
// config's task defaults (and resets the denoiser strength to the task's).
std::vector<std::string> preset_names();
void apply_preset(ExperimentConfig& cfg, const std::string& preset);

// Flat INI-style config file: [task] / [denoiser] / [solver] sections with
// key = value lines, # or ; comments. Unknown keys are rejected. Values set
// here override whatever the config currently holds.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

struct ImageRunResult {
  std::string image;  // input stem
  double degraded_psnr = std::numeric_limits<double>::quiet_NaN();
  double restored_psnr = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  bool ok = false;
  std::string error;  // failure reason when !ok
  std::string restored_path;
  std::string degraded_path;
  std::string trace_path;
};

struct ExperimentResult {
  std::vector<ImageRunResult> images;
  std::string summary_path;
};

// Maps a solver id to the matching algorithm:
//   hsd, pnp_pgm, pnp_apgm, pnp_admm, red_sd, red_fp, red_admm,
//   rrp_sd, approx_sd          (relaxed projection steepest descent)
//   rrp_fp, rrp_admm, approx_fp, approx_admm
//       (gradient-regularized variants run on the anchored fixed-point
//        projection operator built from f with cfg.alpha / cfg.inner_iters /
//        cfg.delta)
//   min_norm                   (anchored feasibility iteration from x0)
SolveResult dispatch_solve(const std::string& solver_id, const FidelityModel& fm,
                           const DenoiserSpec& f, const SolverConfig& cfg,
                           const ImagePlane& x0);

// Per image: degrade (seeded), split to luma/chroma, restore the luma
// channel with the configured solver, recombine with the observed chroma
// (bicubic-upscaled for superres), and write restored PNG, degraded PNG and
// trace CSV plus one summary CSV for the run. Per-image failures are
// recorded and the run continues.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Probe suite and plot data
// ---------------------------------------------------------------------------

struct ProbeSuiteResult {
  DemicontractivityEstimate estimate;
  bool estimated = false;   // a usable fixed point was found
  bool degenerate = false;  // zero residual everywhere (identity-like input)
  bool all_passed = true;   // over the inequality probes that ran
  std::vector<std::string> files;
  std::vector<std::string> notes;
};

// Estimates the demicontractivity constant of f over the samples (fixed
// points are discovered from constant planes and anchored projections), then
// runs the full probe family at the estimated constant, writing one CSV per
// probe plus a text summary into out_dir.
ProbeSuiteResult run_probe_suite(const DenoiserSpec& f,
                                 const std::vector<ImagePlane>& samples,
                                 std::uint64_t seed, const std::string& out_dir);

// Random patches (patch x patch) from a plane, seeded.
std::vector<ImagePlane> extract_patches(const ImagePlane& src, int patch, int count,
                                        std::uint64_t seed);

// Deterministic synthetic scene (gradients, rectangles, disks, stripes) in
// [0,255]^3, for self-contained experiments and tests.
RgbImage make_test_scene(int height, int width, std::uint64_t seed);

// For each trace CSV, writes <stem>_fidelity.dat (iteration, fidelity error
// relative to the final record) and <stem>_residual.dat (iteration,
// fixed-point residual relative to the final record) into out_dir; returns
// the written paths. A zero final value falls back to an absolute scale.
std::vector<std::string> emit_convergence_plots(const std::vector<std::string>& trace_paths,
                                                const std::string& out_dir);

}  // namespace redpro
