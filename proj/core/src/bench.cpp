#include "redpro/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "redpro/png_io.hpp"

namespace fs = std::filesystem;

namespace redpro {

// ---------------------------------------------------------------------------
// Tasks
// ---------------------------------------------------------------------------

std::string to_string(TaskKind task) {
  switch (task) {
    case TaskKind::deblur_uniform: return "deblur_uniform";
    case TaskKind::deblur_gaussian: return "deblur_gaussian";
    case TaskKind::superres: return "superres";
  }
  throw std::logic_error("to_string(TaskKind): unreachable");
}

TaskKind task_from_string(const std::string& name) {
  if (name == "deblur_uniform") return TaskKind::deblur_uniform;
  if (name == "deblur_gaussian") return TaskKind::deblur_gaussian;
  if (name == "superres") return TaskKind::superres;
  throw std::invalid_argument("unknown task: " + name);
}

DegradationModel degradation_for_task(TaskKind task) {
  DegradationModel m;
  switch (task) {
    case TaskKind::deblur_uniform:
      m.kind = DegradationKind::blur;
      m.kernel = make_uniform_kernel(9);
      m.noise_sigma = std::sqrt(2.0);
      break;
    case TaskKind::deblur_gaussian:
      m.kind = DegradationKind::blur;
      m.kernel = make_gaussian_kernel(25, 1.6);
      m.noise_sigma = std::sqrt(2.0);
      break;
    case TaskKind::superres:
      m.kind = DegradationKind::blur_then_decimate;
      m.kernel = make_gaussian_kernel(7, 1.6);
      m.decimation_factor = 3;
      m.noise_sigma = 5.0;
      break;
  }
  return m;
}

TaskDefaults task_defaults(TaskKind task) {
  switch (task) {
    case TaskKind::deblur_uniform: return {3.25, 0.02, 0};
    case TaskKind::deblur_gaussian: return {4.1, 0.01, 0};
    case TaskKind::superres: return {3.0, 0.008, 200};
  }
  throw std::logic_error("task_defaults: unreachable");
}

double default_base_step(TaskKind task, double lambda) {
  const double sigma = degradation_for_task(task).noise_sigma;
  return 2.0 / (1.0 / (sigma * sigma) + lambda);
}

ExperimentConfig make_experiment_config(TaskKind task) {
  ExperimentConfig cfg;
  cfg.task = task;
  cfg.degradation = degradation_for_task(task);
  cfg.denoiser = make_nlm(task_defaults(task).sigma_f);
  return cfg;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

std::vector<std::string> preset_names() {
  return {"red_fp",  "red_admm",  "red_sd",  "hsd",       "rrp_fp",
          "rrp_admm", "rrp_sd",   "approx_fp", "approx_admm", "approx_sd"};
}

void apply_preset(ExperimentConfig& cfg, const std::string& preset) {
  const TaskDefaults td = task_defaults(cfg.task);
  SolverConfig s;  // fresh block: presets fully determine the solver
  s.lambda = td.lambda;
  s.m1 = td.m1;
  s.m2 = 1;
  s.beta = 0.001;
  s.step = constant_step(default_base_step(cfg.task, td.lambda));

  if (preset == "red_fp") {
    s.outer_iters = 200;
  } else if (preset == "red_admm") {
    s.outer_iters = 200;
  } else if (preset == "red_sd") {
    s.outer_iters = 1500;
  } else if (preset == "hsd") {
    s.outer_iters = 400;
    s.alpha = 0.035;
    s.lambda = 0.0;
    s.step = diminishing_step(default_base_step(cfg.task, td.lambda), 0.1);
  } else if (preset == "rrp_fp" || preset == "approx_fp") {
    s.outer_iters = 200;
    s.alpha = 1.0;
    s.inner_iters = 3;
  } else if (preset == "rrp_admm" || preset == "approx_admm") {
    s.outer_iters = 200;
    s.alpha = 1.0;
    s.inner_iters = 3;
  } else if (preset == "rrp_sd" || preset == "approx_sd") {
    s.outer_iters = 1500;
    s.alpha = 1.0;
    s.inner_iters = 3;
  } else {
    throw std::invalid_argument("unknown preset: " + preset);
  }
  if (preset.rfind("approx_", 0) == 0) {
    s.delta = 0.0001;
  }
  cfg.solver_id = preset;
  cfg.solver = s;
  cfg.denoiser.strength = td.sigma_f;
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key + ": " + value);
  }
}

void apply_task_key(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "kind") {
    cfg.task = task_from_string(value);
    cfg.degradation = degradation_for_task(cfg.task);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "images") {
    cfg.images.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ';')) {
      item = trim(item);
      if (!item.empty()) cfg.images.push_back(item);
    }
  } else {
    throw std::invalid_argument("config: unknown [task] key: " + key);
  }
}

void apply_denoiser_key(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  DenoiserSpec& d = cfg.denoiser;
  if (key == "kind") {
    if (value == "nlm") {
      d = make_nlm(d.strength, d.patch_radius, d.search_radius);
    } else if (value == "median") {
      d = make_median(d.window_radius);
    } else if (value == "gaussian") {
      d = make_gaussian_denoiser(d.strength);
    } else if (value == "box") {
      d = make_box_denoiser(d.window_radius);
    } else if (value == "projection_box") {
      d = make_projection_box(d.box_lo, d.box_hi);
    } else {
      throw std::invalid_argument("config: unknown denoiser kind: " + value);
    }
  } else if (key == "sigma_f" || key == "strength") {
    d.strength = parse_double(key, value);
  } else if (key == "patch_radius") {
    d.patch_radius = parse_int(key, value);
  } else if (key == "search_radius") {
    d.search_radius = parse_int(key, value);
  } else if (key == "window_radius") {
    d.window_radius = parse_int(key, value);
  } else if (key == "box_lo") {
    d.box_lo = parse_double(key, value);
  } else if (key == "box_hi") {
    d.box_hi = parse_double(key, value);
  } else {
    throw std::invalid_argument("config: unknown [denoiser] key: " + key);
  }
}

void apply_solver_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  SolverConfig& s = cfg.solver;
  if (key == "algorithm") {
    cfg.solver_id = value;
  } else if (key == "outer_iters") {
    s.outer_iters = parse_int(key, value);
  } else if (key == "alpha") {
    s.alpha = parse_double(key, value);
  } else if (key == "lambda") {
    s.lambda = parse_double(key, value);
  } else if (key == "delta") {
    s.delta = parse_double(key, value);
  } else if (key == "inner_iters") {
    s.inner_iters = parse_int(key, value);
  } else if (key == "beta") {
    s.beta = parse_double(key, value);
  } else if (key == "m1") {
    s.m1 = parse_int(key, value);
  } else if (key == "m2") {
    s.m2 = parse_int(key, value);
  } else if (key == "step_kind") {
    if (value == "constant") {
      s.step.kind = StepKind::constant;
    } else if (value == "diminishing") {
      s.step.kind = StepKind::diminishing_power;
    } else {
      throw std::invalid_argument("config: unknown step_kind: " + value);
    }
  } else if (key == "mu0") {
    s.step.mu0 = parse_double(key, value);
  } else if (key == "exponent") {
    s.step.exponent = parse_double(key, value);
  } else if (key == "trace_every") {
    s.trace_every = parse_int(key, value);
  } else if (key == "distance_penalty_shortcut") {
    s.distance_penalty_shortcut = (value == "1" || value == "true" || value == "yes");
  } else {
    throw std::invalid_argument("config: unknown [solver] key: " + key);
  }
}

}  // namespace

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path);
  }
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config: malformed section at line " +
                                    std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "task" && section != "denoiser" && section != "solver") {
        throw std::invalid_argument("config: unknown section [" + section + "]");
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "task") {
      apply_task_key(cfg, key, value);
    } else if (section == "denoiser") {
      apply_denoiser_key(cfg, key, value);
    } else if (section == "solver") {
      apply_solver_key(cfg, key, value);
    } else {
      throw std::invalid_argument("config: key outside any section at line " +
                                  std::to_string(lineno));
    }
  }
}

// ---------------------------------------------------------------------------
// Solver dispatch
// ---------------------------------------------------------------------------

SolveResult dispatch_solve(const std::string& solver_id, const FidelityModel& fm,
                           const DenoiserSpec& f, const SolverConfig& cfg,
                           const ImagePlane& x0) {
  if (solver_id == "hsd") return solve_hsd(fm, f, cfg, x0);
  if (solver_id == "pnp_pgm") return solve_pnp_pgm(fm, f, cfg, x0, false);
  if (solver_id == "pnp_apgm") return solve_pnp_pgm(fm, f, cfg, x0, true);
  if (solver_id == "pnp_admm") return solve_pnp_admm(fm, f, cfg, x0);
  if (solver_id == "red_sd") return solve_red(fm, f, cfg, x0, RedVariant::sd);
  if (solver_id == "red_fp") return solve_red(fm, f, cfg, x0, RedVariant::fp);
  if (solver_id == "red_admm") return solve_red(fm, f, cfg, x0, RedVariant::admm);
  if (solver_id == "rrp_sd" || solver_id == "approx_sd") {
    return solve_relaxed_redpro_sd(fm, f, cfg, x0);
  }
  if (solver_id == "rrp_fp" || solver_id == "approx_fp" ||
      solver_id == "rrp_admm" || solver_id == "approx_admm") {
    // Run the gradient-regularized solver against the anchored projection
    // onto the (dilated) fixed-point set rather than the raw denoiser.
    DenoiserSpec wrapped = make_fixpoint_projection_operator(
        f, cfg.alpha, cfg.inner_iters, cfg.delta, cfg.anchor_schedule);
    const RedVariant variant =
        (solver_id == "rrp_fp" || solver_id == "approx_fp") ? RedVariant::fp
                                                            : RedVariant::admm;
    return solve_red(fm, wrapped, cfg, x0, variant);
  }
  if (solver_id == "min_norm") return solve_minimal_norm_feasibility(fm, f, cfg, x0);
  throw std::invalid_argument("unknown solver id: " + solver_id);
}

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

namespace {

RgbImage crop_top_left(const RgbImage& img, int h, int w) {
  RgbImage out;
  for (auto [src, dst] : {std::pair{&img.r, &out.r}, std::pair{&img.g, &out.g},
                          std::pair{&img.b, &out.b}}) {
    ImagePlane p(h, w);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) p.at(r, c) = src->at(r, c);
    *dst = std::move(p);
  }
  return out;
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.images.empty()) {
    throw std::invalid_argument("run_experiment: no input images");
  }
  validate_solver_config(cfg.solver);
  fs::create_directories(cfg.out_dir);

  ExperimentResult result;
  result.summary_path = (fs::path(cfg.out_dir) / "summary.csv").string();

  for (size_t idx = 0; idx < cfg.images.size(); ++idx) {
    ImageRunResult row;
    row.image = stem_of(cfg.images[idx]);
    const auto t_start = std::chrono::steady_clock::now();
    try {
      RgbImage clean = load_png(cfg.images[idx]);

      const int factor = cfg.degradation.kind == DegradationKind::blur_then_decimate
                             ? cfg.degradation.decimation_factor
                             : 1;
      if (factor > 1) {
        const int h = clean.r.height / factor * factor;
        const int w = clean.r.width / factor * factor;
        if (h == 0 || w == 0) {
          throw std::runtime_error("image smaller than the decimation factor");
        }
        if (h != clean.r.height || w != clean.r.width) {
          clean = crop_top_left(clean, h, w);
        }
      }
      const int H = clean.r.height, W = clean.r.width;

      // Channel-wise degradation with per-image, per-channel seeds.
      RgbImage degraded;
      const std::uint64_t base = cfg.seed + 1000003ull * static_cast<std::uint64_t>(idx);
      degraded.r = degrade(cfg.degradation, clean.r, base + 0);
      degraded.g = degrade(cfg.degradation, clean.g, base + 1);
      degraded.b = degrade(cfg.degradation, clean.b, base + 2);

      YCbCrImage clean_ycc = rgb_to_ycbcr(clean);
      YCbCrImage degr_ycc = rgb_to_ycbcr(degraded);

      // Initial luminance estimate: the observation (upscaled for superres).
      ImagePlane x0 = factor > 1 ? resize_bicubic(degr_ycc.y, H, W) : degr_ycc.y;
      row.degraded_psnr = psnr(x0, clean_ycc.y);

      FidelityModel fm = make_fidelity(cfg.degradation, degr_ycc.y, H, W);
      SolverConfig solver_cfg = cfg.solver;
      solver_cfg.ground_truth = &clean_ycc.y;

      SolveResult solved = dispatch_solve(cfg.solver_id, fm, cfg.denoiser,
                                          solver_cfg, x0);
      if (solved.status == SolveStatus::diverged) {
        throw std::runtime_error("solver " + cfg.solver_id + " " + solved.message);
      }

      ImagePlane restored_y = clamp_plane(solved.x, 0.0, 255.0);
      row.restored_psnr = psnr(restored_y, clean_ycc.y);

      YCbCrImage out_ycc;
      out_ycc.y = restored_y;
      out_ycc.cb = factor > 1 ? resize_bicubic(degr_ycc.cb, H, W) : degr_ycc.cb;
      out_ycc.cr = factor > 1 ? resize_bicubic(degr_ycc.cr, H, W) : degr_ycc.cr;

      row.restored_path =
          (fs::path(cfg.out_dir) / (row.image + "_restored.png")).string();
      row.degraded_path =
          (fs::path(cfg.out_dir) / (row.image + "_degraded.png")).string();
      row.trace_path = (fs::path(cfg.out_dir) / (row.image + "_trace.csv")).string();
      save_png(ycbcr_to_rgb(out_ycc), row.restored_path);
      save_png(degraded, row.degraded_path);
      solved.trace.write_csv(row.trace_path);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                t_start)
                      .count();
    result.images.push_back(std::move(row));
  }

  std::FILE* fp = std::fopen(result.summary_path.c_str(), "w");
  if (!fp) {
    throw std::runtime_error("run_experiment: cannot open " + result.summary_path);
  }
  std::fprintf(fp, "image,degraded_psnr,restored_psnr,seconds\n");
  for (const ImageRunResult& row : result.images) {
    std::fprintf(fp, "%s,%.17g,%.17g,%.3f\n", row.image.c_str(), row.degraded_psnr,
                 row.restored_psnr, row.seconds);
  }
  std::fclose(fp);
  return result;
}

// ---------------------------------------------------------------------------
// Probe suite
// ---------------------------------------------------------------------------

namespace {

void write_note_file(const std::string& path, const std::vector<std::string>& lines) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open " + path);
  for (const std::string& l : lines) std::fprintf(fp, "%s\n", l.c_str());
  std::fclose(fp);
}

}  // namespace

ProbeSuiteResult run_probe_suite(const DenoiserSpec& f,
                                 const std::vector<ImagePlane>& samples,
                                 std::uint64_t seed, const std::string& out_dir) {
  if (samples.empty()) {
    throw std::invalid_argument("run_probe_suite: no samples");
  }
  fs::create_directories(out_dir);
  ProbeSuiteResult suite;
  auto note = [&suite](const std::string& s) { suite.notes.push_back(s); };

  const int h = samples.front().height, w = samples.front().width;

  // Degenerate input detection: identity-like operators have zero residual
  // on every sample, leaving nothing to estimate.
  double max_residual = 0.0;
  for (const ImagePlane& x : samples) {
    max_residual = std::max(max_residual, norm2(sub(x, denoise(f, x))));
  }
  if (max_residual < 1e-10) {
    suite.degenerate = true;
    note("zero residual everywhere: the operator fixes every sample; "
         "d defaults to 0 and the inequality probes are vacuous");
  }

  // Fixed-point candidates: constant planes plus anchored projections of the
  // first samples; keep those the operator actually fixes.
  std::vector<ImagePlane> fixed_points;
  for (double level : {0.0, 64.0, 128.0, 192.0, 255.0}) {
    ImagePlane z(h, w, level);
    if (norm2(sub(z, denoise(f, z))) < 1e-8) fixed_points.push_back(std::move(z));
  }
  HalpernConfig hcfg;
  hcfg.max_inner = 500;
  for (size_t i = 0; i < samples.size() && i < 3; ++i) {
    HalpernResult hr = halpern_project(f, samples[i], hcfg);
    if (hr.residual < 1e-8) fixed_points.push_back(std::move(hr.projection));
  }

  if (fixed_points.empty()) {
    note("no fixed point found (constant planes and anchored projections all "
         "have residual >= 1e-8); estimation and probes skipped");
    const std::string summary = (fs::path(out_dir) / "summary.txt").string();
    write_note_file(summary, suite.notes);
    suite.files.push_back(summary);
    return suite;
  }

  suite.estimate = estimate_demicontractivity(f, fixed_points, samples);
  suite.estimated = true;
  const double d = std::min(suite.estimate.d_hat, 0.999);
  {
    const std::string path = (fs::path(out_dir) / "demicontractivity.csv").string();
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "d_raw,d_hat,pairs,worst_sample,worst_fixed_point\n");
    std::fprintf(fp, "%.17g,%.17g,%d,%d,%d\n", suite.estimate.d_raw,
                 suite.estimate.d_hat, suite.estimate.sample_count,
                 suite.estimate.worst_sample, suite.estimate.worst_fixed_point);
    std::fclose(fp);
    suite.files.push_back(path);
  }

  const double alpha = (1.0 - d) / 2.0;  // valid for every probe's range
  auto run_probe = [&](ProbeReport report, const std::string& file) {
    const std::string path = (fs::path(out_dir) / file).string();
    report.write_csv(path);
    suite.files.push_back(path);
    note(report.name + ": " + (report.passed ? "pass" : "FAIL") + " (" +
         std::to_string(report.violation_count) + " violations / " +
         std::to_string(report.rows.size()) + " checks)");
    if (!report.passed) suite.all_passed = false;
  };

  run_probe(check_strong_quasi_nonexpansive(f, alpha, d, fixed_points, samples),
            "strong_quasi_nonexpansive.csv");

  // The bounded-step probe needs samples inside a box and a fixed point in
  // it; use the data range padded to the canonical display range.
  double lo = 0.0, hi = 255.0;
  for (const ImagePlane& x : samples) {
    for (double v : x.data) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  try {
    run_probe(check_bounded_denoiser(f, alpha, d, lo, hi, samples, fixed_points),
              "bounded_step.csv");
  } catch (const std::exception& e) {
    note(std::string("bounded_step: skipped (") + e.what() + ")");
  }

  if (max_residual >= 1e-10) {
    const double epsilon = 0.5 * max_residual;
    run_probe(check_dilation_containment(f, alpha, epsilon, hcfg, samples, d),
              "dilation_containment.csv");
  } else {
    note("dilation_containment: skipped (zero residual everywhere)");
  }

  const double L = 2.0 / (1.0 - d);
  run_probe(check_cocoercivity(f, fixed_points, samples, L), "cocoercivity.csv");

  {
    CyclicProbeResult cyc = cyclic_monotonicity_probe(f, samples, 3, seed);
    const std::string path = (fs::path(out_dir) / "cyclic_monotonicity.csv").string();
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "m,max_cycle_sum,min_firm_sum,cycles,exhaustive\n");
    std::fprintf(fp, "3,%.17g,%.17g,%lld,%d\n", cyc.max_cycle_sum, cyc.min_firm_sum,
                 cyc.cycles_examined, cyc.exhaustive ? 1 : 0);
    std::fclose(fp);
    suite.files.push_back(path);
    note("cyclic_monotonicity: max cycle sum " + std::to_string(cyc.max_cycle_sum) +
         ", min firm sum " + std::to_string(cyc.min_firm_sum));
  }

  std::vector<std::string> summary_lines;
  summary_lines.push_back("d_raw = " + std::to_string(suite.estimate.d_raw));
  summary_lines.push_back("d_hat = " + std::to_string(suite.estimate.d_hat));
  summary_lines.push_back("probe_alpha = " + std::to_string(alpha));
  for (const std::string& n : suite.notes) summary_lines.push_back(n);
  const std::string summary = (fs::path(out_dir) / "summary.txt").string();
  write_note_file(summary, summary_lines);
  suite.files.push_back(summary);
  return suite;
}

std::vector<ImagePlane> extract_patches(const ImagePlane& src, int patch, int count,
                                        std::uint64_t seed) {
  if (patch < 1 || src.height < patch || src.width < patch) {
    throw std::invalid_argument("extract_patches: patch larger than source");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_r(0, src.height - patch);
  std::uniform_int_distribution<int> pick_c(0, src.width - patch);
  std::vector<ImagePlane> patches;
  patches.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int r0 = pick_r(rng), c0 = pick_c(rng);
    ImagePlane p(patch, patch);
    for (int r = 0; r < patch; ++r)
      for (int c = 0; c < patch; ++c) p.at(r, c) = src.at(r0 + r, c0 + c);
    patches.push_back(std::move(p));
  }
  return patches;
}

RgbImage make_test_scene(int height, int width, std::uint64_t seed) {
  if (height < 8 || width < 8) {
    throw std::invalid_argument("make_test_scene: scene too small");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  RgbImage img;
  ImagePlane* planes[3] = {&img.r, &img.g, &img.b};
  double base[3], tilt_r[3], tilt_c[3];
  for (int ch = 0; ch < 3; ++ch) {
    *planes[ch] = ImagePlane(height, width);
    base[ch] = 60.0 + 120.0 * unit(rng);
    tilt_r[ch] = 80.0 * (unit(rng) - 0.5);
    tilt_c[ch] = 80.0 * (unit(rng) - 0.5);
  }
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        planes[ch]->at(r, c) = base[ch] + tilt_r[ch] * (double(r) / height - 0.5) +
                               tilt_c[ch] * (double(c) / width - 0.5);
      }
    }
  }

  // Solid rectangles.
  for (int k = 0; k < 6; ++k) {
    const int rh = 4 + int(unit(rng) * height / 3);
    const int rw = 4 + int(unit(rng) * width / 3);
    const int r0 = int(unit(rng) * (height - rh));
    const int c0 = int(unit(rng) * (width - rw));
    double color[3] = {255.0 * unit(rng), 255.0 * unit(rng), 255.0 * unit(rng)};
    for (int r = r0; r < r0 + rh; ++r)
      for (int c = c0; c < c0 + rw; ++c)
        for (int ch = 0; ch < 3; ++ch) planes[ch]->at(r, c) = color[ch];
  }

  // Filled disks.
  for (int k = 0; k < 4; ++k) {
    const double rad = 3.0 + unit(rng) * std::min(height, width) / 5.0;
    const double cr = unit(rng) * height, cc = unit(rng) * width;
    double color[3] = {255.0 * unit(rng), 255.0 * unit(rng), 255.0 * unit(rng)};
    const int rlo = std::max(0, int(cr - rad) - 1), rhi = std::min(height - 1, int(cr + rad) + 1);
    const int clo = std::max(0, int(cc - rad) - 1), chi = std::min(width - 1, int(cc + rad) + 1);
    for (int r = rlo; r <= rhi; ++r)
      for (int c = clo; c <= chi; ++c)
        if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= rad * rad)
          for (int ch = 0; ch < 3; ++ch) planes[ch]->at(r, c) = color[ch];
  }

  // A sinusoidal texture band.
  {
    const int band_h = height / 4;
    const int r0 = int(unit(rng) * (height - band_h));
    const double freq = 0.3 + 0.5 * unit(rng);
    for (int r = r0; r < r0 + band_h; ++r)
      for (int c = 0; c < width; ++c) {
        const double v = 127.5 + 90.0 * std::sin(freq * c + 0.35 * r);
        for (int ch = 0; ch < 3; ++ch)
          planes[ch]->at(r, c) = 0.5 * planes[ch]->at(r, c) + 0.5 * v;
      }
  }

  for (int ch = 0; ch < 3; ++ch) *planes[ch] = clamp_plane(*planes[ch], 0.0, 255.0);
  return img;
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

std::vector<std::string> emit_convergence_plots(const std::vector<std::string>& trace_paths,
                                                const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  for (const std::string& trace_path : trace_paths) {
    IterationTrace trace = IterationTrace::read_csv(trace_path);
    if (trace.records.empty()) {
      throw std::runtime_error("emit_convergence_plots: empty trace " + trace_path);
    }
    const TraceRecord& last = trace.records.back();
    const double fid_scale = std::abs(last.fidelity) > 0.0 ? std::abs(last.fidelity) : 1.0;
    const double res_scale = last.fp_residual > 0.0 ? last.fp_residual : 1.0;
    const std::string stem = stem_of(trace_path);

    const std::string fid_path = (fs::path(out_dir) / (stem + "_fidelity.dat")).string();
    const std::string res_path = (fs::path(out_dir) / (stem + "_residual.dat")).string();
    std::FILE* ffid = std::fopen(fid_path.c_str(), "w");
    if (!ffid) throw std::runtime_error("cannot open " + fid_path);
    std::FILE* fres = std::fopen(res_path.c_str(), "w");
    if (!fres) {
      std::fclose(ffid);
      throw std::runtime_error("cannot open " + res_path);
    }
    for (const TraceRecord& r : trace.records) {
      std::fprintf(ffid, "%d %.17g\n", r.k, std::abs(r.fidelity - last.fidelity) / fid_scale);
      std::fprintf(fres, "%d %.17g\n", r.k, r.fp_residual / res_scale);
    }
    std::fclose(ffid);
    std::fclose(fres);
    written.push_back(fid_path);
    written.push_back(res_path);
  }
  return written;
}

}  // namespace redpro
