#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "redpro/denoise.hpp"
#include "redpro/fixpoint.hpp"
#include "redpro/forward.hpp"
#include "redpro/image.hpp"

namespace redpro {

// ---------------------------------------------------------------------------
// Step-size schedules
// ---------------------------------------------------------------------------

enum class StepKind { constant, diminishing_power };

struct StepSchedule {
  StepKind kind = StepKind::constant;
  double mu0 = 1.0;       // base step, > 0
  double exponent = 0.1;  // p in mu_k = mu0 * (k+1)^(-p); requires p in (0, 1]

  // Step for 0-based iteration k. The diminishing schedule is indexed from 1
  // so that k = 0 is well-defined.
  double mu(int k) const {
    if (kind == StepKind::constant) return mu0;
    return mu0 * std::pow(static_cast<double>(k + 1), -exponent);
  }
};

StepSchedule constant_step(double mu0);
StepSchedule diminishing_step(double mu0, double exponent = 0.1);
void validate_step(const StepSchedule& s);

// ---------------------------------------------------------------------------
// Solver configuration and tracing
// ---------------------------------------------------------------------------

struct SolverConfig {
  int outer_iters = 100;    // N >= 0 (0 = return x0 untouched)
  double alpha = 1.0;       // denoiser relaxation, in (0, 1]
  double lambda = 0.0;      // regularization weight, >= 0
  double delta = 0.0;       // dilation radius for the relaxed projection, >= 0
  int inner_iters = 1;      // J >= 1: anchored inner steps per outer iteration
  double beta = 1.0;        // ADMM penalty, > 0
  int m1 = 0;               // inner linear-solve budget (0 = default / closed form)
  int m2 = 1;               // denoiser passes in ADMM z-updates, >= 1
  StepSchedule step;        // gradient step schedule
  int trace_every = 1;      // record every trace_every-th iteration, >= 1
  AnchorSchedule anchor_schedule;  // inner anchor weights; defaults to 1/(j+2)
  // Experimental: replace the inner-loop projection surrogate in the relaxed
  // steepest-descent solver with the raw denoiser output, i.e. use the
  // descent direction -lambda*(x - f(x)) for the distance penalty. No
  // convergence guarantee is claimed for this shortcut.
  bool distance_penalty_shortcut = false;
  // Non-owning; when set, traces carry PSNR against this plane.
  const ImagePlane* ground_truth = nullptr;
};

void validate_solver_config(const SolverConfig& cfg);

struct TraceRecord {
  int k = 0;                // 1-based iteration count at measurement time
  double fidelity = 0.0;    // data-term value at the iterate
  double fp_residual = 0.0; // ||x - f(x)|| at the iterate (see solver notes)
  double step_change = 0.0; // ||x_k - x_{k-1}||
  double psnr = std::numeric_limits<double>::quiet_NaN();  // NaN without ground truth
};

struct IterationTrace {
  std::vector<TraceRecord> records;

  // CSV with header k,fidelity,fp_residual,step_change,psnr.
  void write_csv(const std::string& path) const;
  static IterationTrace read_csv(const std::string& path);
};

enum class SolveStatus { completed, diverged };

struct SolveResult {
  ImagePlane x;
  IterationTrace trace;
  SolveStatus status = SolveStatus::completed;
  std::string message;
  // Terminal diagnostics: ||x - f(x)|| and ||grad l(x)|| at the returned
  // iterate (NaN when the run diverged). Together they classify whether the
  // run reached a constrained minimizer (both small), a feasibility-only
  // point (residual small, gradient not), or neither. For the feasibility
  // solver the residual refers to the composed operator it iterates.
  double final_fp_residual = std::numeric_limits<double>::quiet_NaN();
  double final_grad_norm = std::numeric_limits<double>::quiet_NaN();
};

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------
// Shared conventions: iterates are never clamped during solving; divergence
// (non-finite values, or norm beyond 1e6 x max(||x0||, 1)) aborts with
// status = diverged and the trace collected so far; all solvers are
// deterministic given config and x0.

// Hybrid steepest descent: x_{k+1} = f_alpha(x_k - mu_k * grad l(x_k)).
// Accepts constant or diminishing steps.
SolveResult solve_hsd(const FidelityModel& fm, const DenoiserSpec& f,
                      const SolverConfig& cfg, const ImagePlane& x0);

// Proximal-gradient method with the proximal step replaced by the denoiser:
//   v = x_k - mu * grad l(x_k);  z = f(v).
// Plain iteration sets x_{k+1} = z; the accelerated variant applies momentum
// x_{k+1} = z + q_k (z - z_prev) with t_0 = 1,
// t_{k+1} = (1 + sqrt(1 + 4 t_k^2))/2, q_k = (t_k - 1)/t_{k+1}.
// Requires a constant step. With alpha = 1 (no relaxation) and no
// acceleration this produces the same iterates as solve_hsd, bit for bit.
SolveResult solve_pnp_pgm(const FidelityModel& fm, const DenoiserSpec& f,
                          const SolverConfig& cfg, const ImagePlane& x0,
                          bool accelerated = false);

// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, the momentum recursion above.
double fista_next_t(double t);

// ADMM with the regularizer's proximal step replaced by m2 denoiser passes:
//   x = prox_{l/beta}(z - u);  z = f^(m2)(x + u);  u += x - z,
// starting from z_0 = x0, u_0 = 0. The fidelity prox runs in closed form for
// circulant operators and by conjugate gradients with budget m1 otherwise.
SolveResult solve_pnp_admm(const FidelityModel& fm, const DenoiserSpec& f,
                           const SolverConfig& cfg, const ImagePlane& x0);

enum class RedVariant { sd, fp, admm };

// Gradient-regularized solvers built on the residual field
// grad E(x) = grad l(x) + lambda * (x - f(x)):
//   sd:   x_{k+1} = x_k - mu_k * grad E(x_k)
//   fp:   x_{k+1} solves (H^T H / sigma^2 + lambda I) x
//                        = H^T y / sigma^2 + lambda f(x_k)
//         (closed form for circulant H, CG with budget m1 otherwise)
//   admm: as solve_pnp_admm but the z-update runs m2 passes of
//         z <- (beta s + lambda f(z)) / (beta + lambda), s = x + u, starting
//         from the previous z.
// Requires lambda > 0.
SolveResult solve_red(const FidelityModel& fm, const DenoiserSpec& f,
                      const SolverConfig& cfg, const ImagePlane& x0,
                      RedVariant variant);

// Relaxed projection-based steepest descent. Each outer iteration runs J
// anchored inner steps x_{k,j+1} = f_alpha(t_j x_k + (1 - t_j) x_{k,j}) to
// approximate the projection of x_k onto the fixed-point set, forms the
// dilation-guarded surrogate
//   v_k = x_k                         if ||x_k - x_{k,J}|| <= delta
//   v_k = (delta/dist) x_k + (1 - delta/dist) x_{k,J}  otherwise,
// and descends x_{k+1} = x_k - mu_k (grad l(x_k) + lambda (x_k - v_k)).
// With cfg.distance_penalty_shortcut the surrogate is v_k = f(x_k) instead
// (experimental; see SolverConfig).
SolveResult solve_relaxed_redpro_sd(const FidelityModel& fm, const DenoiserSpec& f,
                                    const SolverConfig& cfg, const ImagePlane& x0);

// Minimal-norm feasibility: anchored iteration toward the fixed point of the
// composed operator T(x) = f_alpha(x - mu * grad l(x)) nearest the anchor u:
//   x_{j+1} = t_j u + (1 - t_j) T(x_j), x_0 = u.
// Requires a constant step with mu in (0, 2/L) when the fidelity carries a
// Lipschitz bound. Trace and terminal residuals refer to T, not to f alone.
SolveResult solve_minimal_norm_feasibility(const FidelityModel& fm,
                                           const DenoiserSpec& f,
                                           const SolverConfig& cfg,
                                           const ImagePlane& u);

}  // namespace redpro
