#include "redpro/solve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace redpro {

StepSchedule constant_step(double mu0) {
  StepSchedule s;
  s.kind = StepKind::constant;
  s.mu0 = mu0;
  return s;
}

StepSchedule diminishing_step(double mu0, double exponent) {
  StepSchedule s;
  s.kind = StepKind::diminishing_power;
  s.mu0 = mu0;
  s.exponent = exponent;
  return s;
}

void validate_step(const StepSchedule& s) {
  if (!(s.mu0 > 0.0)) {
    throw std::invalid_argument("StepSchedule: mu0 must be > 0");
  }
  if (s.kind == StepKind::diminishing_power &&
      !(s.exponent > 0.0 && s.exponent <= 1.0)) {
    throw std::invalid_argument(
        "StepSchedule: diminishing exponent must lie in (0, 1]");
  }
}

void validate_solver_config(const SolverConfig& cfg) {
  if (cfg.outer_iters < 0) {
    throw std::invalid_argument("SolverConfig: outer_iters must be >= 0");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("SolverConfig: alpha must lie in (0, 1]");
  }
  if (cfg.lambda < 0.0) {
    throw std::invalid_argument("SolverConfig: lambda must be >= 0");
  }
  if (cfg.delta < 0.0) {
    throw std::invalid_argument("SolverConfig: delta must be >= 0");
  }
  if (cfg.inner_iters < 1) {
    throw std::invalid_argument("SolverConfig: inner_iters must be >= 1");
  }
  if (!(cfg.beta > 0.0)) {
    throw std::invalid_argument("SolverConfig: beta must be > 0");
  }
  if (cfg.m1 < 0) {
    throw std::invalid_argument("SolverConfig: m1 must be >= 0");
  }
  if (cfg.m2 < 1) {
    throw std::invalid_argument("SolverConfig: m2 must be >= 1");
  }
  if (cfg.trace_every < 1) {
    throw std::invalid_argument("SolverConfig: trace_every must be >= 1");
  }
  validate_step(cfg.step);
}

void IterationTrace::write_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) {
    throw std::runtime_error("IterationTrace: cannot open " + path + " for writing");
  }
  std::fprintf(fp, "k,fidelity,fp_residual,step_change,psnr\n");
  for (const TraceRecord& r : records) {
    std::fprintf(fp, "%d,%.17g,%.17g,%.17g,%.17g\n", r.k, r.fidelity, r.fp_residual,
                 r.step_change, r.psnr);
  }
  std::fclose(fp);
}

IterationTrace IterationTrace::read_csv(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "r");
  if (!fp) {
    throw std::runtime_error("IterationTrace: cannot open " + path);
  }
  IterationTrace trace;
  char line[512];
  bool first = true;
  while (std::fgets(line, sizeof(line), fp)) {
    if (first) {
      first = false;
      if (std::strncmp(line, "k,fidelity,fp_residual,step_change,psnr", 39) != 0) {
        std::fclose(fp);
        throw std::runtime_error("IterationTrace: unexpected header in " + path);
      }
      continue;
    }
    TraceRecord r;
    char* cursor = line;
    char* end = nullptr;
    r.k = static_cast<int>(std::strtol(cursor, &end, 10));
    double* fields[4] = {&r.fidelity, &r.fp_residual, &r.step_change, &r.psnr};
    bool ok = end != cursor;
    for (double* field : fields) {
      if (!ok || *end != ',') {
        ok = false;
        break;
      }
      cursor = end + 1;
      *field = std::strtod(cursor, &end);
      ok = end != cursor;
    }
    if (!ok) {
      std::fclose(fp);
      throw std::runtime_error("IterationTrace: malformed row in " + path);
    }
    trace.records.push_back(r);
  }
  std::fclose(fp);
  if (first) {
    throw std::runtime_error("IterationTrace: empty file " + path);
  }
  return trace;
}

namespace {

// Shared per-iteration bookkeeping: divergence guard, trace recording, and
// terminal diagnostics.
class SolveDriver {
 public:
  SolveDriver(const FidelityModel& fm, const DenoiserSpec& f, const SolverConfig& cfg,
              const ImagePlane& x0)
      : fm_(fm), f_(f), cfg_(cfg),
        divergence_cap_(1e6 * std::max(norm2(x0), 1.0)) {}

  // Runs after iterate k (0-based) has been updated from prev to x.
  // Returns false when the run must abort (divergence); the caller stops.
  bool observe(int k, const ImagePlane& prev, const ImagePlane& x) {
    if (!all_finite(x) || norm2(x) > divergence_cap_) {
      diverged_ = true;
      message_ = "diverged at iteration " + std::to_string(k + 1);
      return false;
    }
    if (k % cfg_.trace_every == 0) {
      TraceRecord r;
      r.k = k + 1;
      r.fidelity = fidelity_value(fm_, x);
      r.fp_residual = residual_at(x);
      r.step_change = norm2(sub(x, prev));
      if (cfg_.ground_truth) r.psnr = psnr(x, *cfg_.ground_truth);
      trace_.records.push_back(r);
    }
    return true;
  }

  // Fixed-point residual used in traces/diagnostics; overridable so the
  // feasibility solver can measure its composed operator instead of f.
  virtual double residual_at(const ImagePlane& x) {
    return norm2(sub(x, denoise(f_, x)));
  }

  SolveResult finish(ImagePlane x) {
    SolveResult result;
    result.trace = std::move(trace_);
    result.status = diverged_ ? SolveStatus::diverged : SolveStatus::completed;
    result.message = message_;
    if (!diverged_) {
      result.final_fp_residual = residual_at(x);
      result.final_grad_norm = norm2(fidelity_grad(fm_, x));
    }
    result.x = std::move(x);
    return result;
  }

  virtual ~SolveDriver() = default;

 protected:
  const FidelityModel& fm_;
  const DenoiserSpec& f_;
  const SolverConfig& cfg_;
  double divergence_cap_;
  IterationTrace trace_;
  bool diverged_ = false;
  std::string message_;
};

int cg_budget(const SolverConfig& cfg) { return cfg.m1 > 0 ? cfg.m1 : 500; }

}  // namespace

SolveResult solve_hsd(const FidelityModel& fm, const DenoiserSpec& f,
                      const SolverConfig& cfg, const ImagePlane& x0) {
  validate_solver_config(cfg);
  SolveDriver driver(fm, f, cfg, x0);
  ImagePlane x = x0;
  for (int k = 0; k < cfg.outer_iters; ++k) {
    const double mu = cfg.step.mu(k);
    ImagePlane v = axpy(x, -mu, fidelity_grad(fm, x));
    ImagePlane next = apply_relaxed(f, cfg.alpha, v);
    const bool keep_going = driver.observe(k, x, next);
    x = std::move(next);
    if (!keep_going) break;
  }
  return driver.finish(std::move(x));
}

double fista_next_t(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

SolveResult solve_pnp_pgm(const FidelityModel& fm, const DenoiserSpec& f,
                          const SolverConfig& cfg, const ImagePlane& x0,
                          bool accelerated) {
  validate_solver_config(cfg);
  if (cfg.step.kind != StepKind::constant) {
    throw std::invalid_argument("solve_pnp_pgm: requires a constant step");
  }
  SolveDriver driver(fm, f, cfg, x0);
  const double mu = cfg.step.mu0;
  ImagePlane x = x0;
  ImagePlane z_prev = x0;
  double t = 1.0;
  for (int k = 0; k < cfg.outer_iters; ++k) {
    ImagePlane v = axpy(x, -mu, fidelity_grad(fm, x));
    ImagePlane z = denoise(f, v);
    ImagePlane next;
    if (accelerated) {
      const double t_next = fista_next_t(t);
      const double q = (t - 1.0) / t_next;
      next = axpy(z, q, sub(z, z_prev));
      z_prev = std::move(z);
      t = t_next;
    } else {
      next = std::move(z);
    }
    const bool keep_going = driver.observe(k, x, next);
    x = std::move(next);
    if (!keep_going) break;
  }
  return driver.finish(std::move(x));
}

SolveResult solve_pnp_admm(const FidelityModel& fm, const DenoiserSpec& f,
                           const SolverConfig& cfg, const ImagePlane& x0) {
  validate_solver_config(cfg);
  SolveDriver driver(fm, f, cfg, x0);
  ImagePlane z = x0;
  ImagePlane u(x0.height, x0.width, 0.0);
  ImagePlane x = x0;
  for (int k = 0; k < cfg.outer_iters; ++k) {
    ImagePlane prev = x;
    x = fidelity_prox(fm, sub(z, u), 1.0 / cfg.beta, cg_budget(cfg), 1e-12,
                      /*require_convergence=*/false);
    ImagePlane s = add(x, u);
    z = std::move(s);
    for (int pass = 0; pass < cfg.m2; ++pass) z = denoise(f, z);
    u = add(u, sub(x, z));
    if (!driver.observe(k, prev, x)) break;
  }
  return driver.finish(std::move(x));
}

SolveResult solve_red(const FidelityModel& fm, const DenoiserSpec& f,
                      const SolverConfig& cfg, const ImagePlane& x0,
                      RedVariant variant) {
  validate_solver_config(cfg);
  if (!(cfg.lambda > 0.0)) {
    throw std::invalid_argument("solve_red: lambda must be > 0");
  }
  SolveDriver driver(fm, f, cfg, x0);
  const double lambda = cfg.lambda;

  if (variant == RedVariant::sd) {
    ImagePlane x = x0;
    for (int k = 0; k < cfg.outer_iters; ++k) {
      const double mu = cfg.step.mu(k);
      ImagePlane g = fidelity_grad(fm, x);
      g = axpy(g, lambda, sub(x, denoise(f, x)));
      ImagePlane next = axpy(x, -mu, g);
      const bool keep_going = driver.observe(k, x, next);
      x = std::move(next);
      if (!keep_going) break;
    }
    return driver.finish(std::move(x));
  }

  if (variant == RedVariant::fp) {
    ImagePlane x = x0;
    for (int k = 0; k < cfg.outer_iters; ++k) {
      ImagePlane g = denoise(f, x);
      // (H^T H / sigma^2 + lambda I) x = H^T y / sigma^2 + lambda g is the
      // optimality system of the fidelity prox at g with weight 1/lambda.
      ImagePlane next = fidelity_prox(fm, g, 1.0 / lambda, cg_budget(cfg), 1e-12,
                                      /*require_convergence=*/false);
      const bool keep_going = driver.observe(k, x, next);
      x = std::move(next);
      if (!keep_going) break;
    }
    return driver.finish(std::move(x));
  }

  // admm
  ImagePlane z = x0;
  ImagePlane u(x0.height, x0.width, 0.0);
  ImagePlane x = x0;
  const double beta = cfg.beta;
  for (int k = 0; k < cfg.outer_iters; ++k) {
    ImagePlane prev = x;
    x = fidelity_prox(fm, sub(z, u), 1.0 / beta, cg_budget(cfg), 1e-12,
                      /*require_convergence=*/false);
    ImagePlane s = add(x, u);
    for (int pass = 0; pass < cfg.m2; ++pass) {
      // Fixed-point pass on the z-subproblem optimality condition
      // lambda (z - f(z)) + beta (z - s) = 0.
      z = scale(axpy(scale(s, beta), lambda, denoise(f, z)), 1.0 / (beta + lambda));
    }
    u = add(u, sub(x, z));
    if (!driver.observe(k, prev, x)) break;
  }
  return driver.finish(std::move(x));
}

SolveResult solve_relaxed_redpro_sd(const FidelityModel& fm, const DenoiserSpec& f,
                                    const SolverConfig& cfg, const ImagePlane& x0) {
  validate_solver_config(cfg);
  SolveDriver driver(fm, f, cfg, x0);
  const AnchorSchedule& schedule =
      cfg.anchor_schedule ? cfg.anchor_schedule : AnchorSchedule(default_anchor_schedule);
  ImagePlane x = x0;
  for (int k = 0; k < cfg.outer_iters; ++k) {
    ImagePlane v;
    if (cfg.distance_penalty_shortcut) {
      v = denoise(f, x);
    } else {
      ImagePlane xj = x;
      for (int j = 0; j < cfg.inner_iters; ++j) {
        const double t = schedule(j);
        if (!(t > 0.0 && t <= 1.0)) {
          throw std::invalid_argument(
              "solve_relaxed_redpro_sd: anchor schedule must produce values in (0, 1]");
        }
        xj = apply_relaxed(f, cfg.alpha, lerp(x, xj, t));
      }
      const double dist = norm2(sub(x, xj));
      if (dist <= cfg.delta) {
        v = x;
      } else {
        v = lerp(x, xj, cfg.delta / dist);
      }
    }
    const double mu = cfg.step.mu(k);
    ImagePlane g = fidelity_grad(fm, x);
    g = axpy(g, cfg.lambda, sub(x, v));
    ImagePlane next = axpy(x, -mu, g);
    const bool keep_going = driver.observe(k, x, next);
    x = std::move(next);
    if (!keep_going) break;
  }
  return driver.finish(std::move(x));
}

namespace {

class ComposedResidualDriver : public SolveDriver {
 public:
  ComposedResidualDriver(const FidelityModel& fm, const DenoiserSpec& f,
                         const SolverConfig& cfg, const ImagePlane& x0)
      : SolveDriver(fm, f, cfg, x0) {}

  double residual_at(const ImagePlane& x) override {
    ImagePlane v = axpy(x, -cfg_.step.mu0, fidelity_grad(fm_, x));
    return norm2(sub(x, apply_relaxed(f_, cfg_.alpha, v)));
  }
};

}  // namespace

SolveResult solve_minimal_norm_feasibility(const FidelityModel& fm,
                                           const DenoiserSpec& f,
                                           const SolverConfig& cfg,
                                           const ImagePlane& u) {
  validate_solver_config(cfg);
  if (cfg.step.kind != StepKind::constant) {
    throw std::invalid_argument(
        "solve_minimal_norm_feasibility: requires a constant step");
  }
  if (fm.lipschitz > 0.0 && !(cfg.step.mu0 < 2.0 / fm.lipschitz)) {
    throw std::invalid_argument(
        "solve_minimal_norm_feasibility: step must lie in (0, 2/L)");
  }
  const AnchorSchedule& schedule =
      cfg.anchor_schedule ? cfg.anchor_schedule : AnchorSchedule(default_anchor_schedule);
  ComposedResidualDriver driver(fm, f, cfg, u);
  const double mu = cfg.step.mu0;
  ImagePlane x = u;
  for (int j = 0; j < cfg.outer_iters; ++j) {
    const double t = schedule(j);
    if (!(t > 0.0 && t <= 1.0)) {
      throw std::invalid_argument(
          "solve_minimal_norm_feasibility: anchor schedule must produce values in (0, 1]");
    }
    ImagePlane v = axpy(x, -mu, fidelity_grad(fm, x));
    ImagePlane Tx = apply_relaxed(f, cfg.alpha, v);
    ImagePlane next = lerp(u, Tx, t);
    const bool keep_going = driver.observe(j, x, next);
    x = std::move(next);
    if (!keep_going) break;
  }
  return driver.finish(std::move(x));
}

}  // namespace redpro
