#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "redpro/denoise.hpp"
#include "redpro/image.hpp"

namespace redpro {

// ---------------------------------------------------------------------------
// Anchored (Halpern) fixed-point projection
// ---------------------------------------------------------------------------

// Anchor schedule: maps inner iteration index j >= 0 to t_j in (0,1].
using AnchorSchedule = std::function<double(int)>;

// Classical choice t_j = 1/(j+2): decays to zero with divergent sum.
double default_anchor_schedule(int j);

struct HalpernConfig {
  double alpha = 1.0;                  // relaxation weight of the inner operator, in (0,1]
  AnchorSchedule anchor_schedule;      // defaults to 1/(j+2) when empty
  int max_inner = 500;                 // iteration budget J
  double tol = 0.0;                    // early-stop residual threshold (0 = run full budget)
};

void validate_halpern_config(const HalpernConfig& cfg);

struct HalpernResult {
  ImagePlane projection;  // last iterate x_J
  double residual = 0.0;  // ||x_J - f(x_J)|| at the returned iterate
  int iterations = 0;     // inner iterations actually performed
};

// Anchored iteration x_{j+1} = t_j * x0 + (1 - t_j) * f_alpha(x_j).
// For a demicontractive f this approximates the Euclidean projection of x0
// onto the fixed-point set of f. Non-convergence is reported via the
// residual, never thrown.
HalpernResult halpern_project(const DenoiserSpec& f, const ImagePlane& x0,
                              const HalpernConfig& cfg);

// Projection onto the dilated set B_delta(f) = {x : ||x - P_Fix(x)|| <= delta}.
// Returns x unchanged when it already lies within delta of its projection;
// otherwise the point on the segment [P_Fix(x), x] at distance delta from
// the projection.
ImagePlane project_dilated(const DenoiserSpec& f, const ImagePlane& x,
                           double delta, const HalpernConfig& cfg);

// ---------------------------------------------------------------------------
// Demicontractivity estimation
// ---------------------------------------------------------------------------

struct DemicontractivityEstimate {
  double d_hat = 0.0;        // clamped to [0, inf): max(d_raw, 0)
  double d_raw = 0.0;        // raw maximal ratio (may be negative, e.g. projections)
  int sample_count = 0;      // number of (sample, fixed point) pairs examined
  int worst_sample = -1;     // index into samples of the maximizing pair
  int worst_fixed_point = -1;  // index into fixed_points of the maximizing pair
};

// Empirical d estimate: max over pairs (x, z) of
//   (||f(x) - z||^2 - ||x - z||^2) / ||f(x) - x||^2,
// where z ranges over supplied fixed points (each must satisfy
// ||z - f(z)|| < 1e-8, checked) and x over samples. Pairs with residual
// ||f(x) - x|| < 1e-10 contribute 0 by convention.
DemicontractivityEstimate estimate_demicontractivity(
    const DenoiserSpec& f, const std::vector<ImagePlane>& fixed_points,
    const std::vector<ImagePlane>& samples);

// ---------------------------------------------------------------------------
// Inequality probes
// ---------------------------------------------------------------------------

// One evaluated inequality instance: the probe checks lhs <= rhs + tolerance
// and records slack = rhs - lhs (negative slack beyond tolerance = violation).
struct ProbeRow {
  int pair_index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct ProbeReport {
  std::string name;
  double tolerance = 0.0;
  std::vector<ProbeRow> rows;
  int violation_count = 0;
  bool passed = true;
  // Auxiliary scalar carried by some probes (implied d for the co-coercivity
  // check); NaN when not applicable.
  double auxiliary = std::numeric_limits<double>::quiet_NaN();

  // Serializes as CSV with header pair_index,lhs,rhs,slack.
  void write_csv(const std::string& path) const;
};

// Strong quasi-nonexpansiveness of the relaxed operator f_alpha:
//   ||f_alpha(x) - z||^2 <= ||x - z||^2 - gamma * ||f_alpha(x) - x||^2
// with gamma = (1 - d - alpha) / alpha. Requires alpha in (0, 1-d].
ProbeReport check_strong_quasi_nonexpansive(const DenoiserSpec& f, double alpha,
                                            double d,
                                            const std::vector<ImagePlane>& fixed_points,
                                            const std::vector<ImagePlane>& samples,
                                            double tolerance = 1e-10);

// Bounded step of the relaxed operator on box-valued inputs:
//   (1/n) ||f_alpha(x) - x||^2 <= sigma2(alpha) * (b - a)^2,
// sigma2(alpha) = alpha / (1 - d - alpha). Requires alpha in (0, 1-d),
// samples within [a,b]^n, and a fixed point of f inside [a,b]^n.
ProbeReport check_bounded_denoiser(const DenoiserSpec& f, double alpha, double d,
                                   double range_a, double range_b,
                                   const std::vector<ImagePlane>& samples,
                                   const std::vector<ImagePlane>& fixed_points,
                                   double tolerance = 1e-10);

// Dilated-set containment: projecting samples into B_delta with
// delta = alpha * epsilon must land them in the epsilon-approximate
// fixed-point set, i.e. ||x' - f(x')|| <= epsilon + tolerance.
// Requires alpha in (0, (1-d)/2] and epsilon > 0.
ProbeReport check_dilation_containment(const DenoiserSpec& f, double alpha,
                                       double epsilon, const HalpernConfig& cfg,
                                       const std::vector<ImagePlane>& samples,
                                       double d = 0.0, double tolerance = 1e-10);

// Co-coercivity of the residual r = Id - f restricted to fixed points:
//   (1/L) ||r(x) - r(z)||^2 <= <r(x), x - z>.
// The report's auxiliary value is the implied demicontractivity constant
// d = 1 - 2/L.
ProbeReport check_cocoercivity(const DenoiserSpec& f,
                               const std::vector<ImagePlane>& fixed_points,
                               const std::vector<ImagePlane>& samples,
                               double L_candidate, double tolerance = 1e-10);

// ---------------------------------------------------------------------------
// Cyclic monotonicity probe
// ---------------------------------------------------------------------------

struct CyclicProbeResult {
  // Maximal value of sum_i <A(x_i), x_{i+1} - x_i> over the examined
  // m-cycles (A = Id - f, indices cyclic). Monotone residuals keep this <= 0.
  double max_cycle_sum = 0.0;
  std::vector<int> max_cycle_witness;  // point indices achieving the max
  // Minimal value of sum_i <x_i - f(x_i), f(x_i) - f(x_{i+1})> over the same
  // cycles. Cyclically firmly nonexpansive operators keep this >= 0.
  double min_firm_sum = 0.0;
  std::vector<int> min_firm_witness;
  long long cycles_examined = 0;
  bool exhaustive = false;
};

// Evaluates the two cycle sums over m-cycles drawn from cycle_points.
// All distinct ordered m-tuples are enumerated when their count does not
// exceed max_exhaustive; otherwise random_cycles seeded tuples are drawn.
CyclicProbeResult cyclic_monotonicity_probe(const DenoiserSpec& f,
                                            const std::vector<ImagePlane>& cycle_points,
                                            int m,
                                            std::uint64_t seed = 0,
                                            long long max_exhaustive = 200000,
                                            long long random_cycles = 1000);

// ---------------------------------------------------------------------------
// Fixed-point projection as a derived denoiser
// ---------------------------------------------------------------------------

// Wraps the anchored projection (with optional dilation guard) as a denoiser,
// so solvers that call a denoiser per iteration can target the projection
// onto Fix(inner) instead of a single application of inner. With J inner
// steps per call this is the building block of the relaxed projection-based
// solver presets.
DenoiserSpec make_fixpoint_projection_operator(const DenoiserSpec& inner,
                                               double alpha, int inner_iters,
                                               double delta = 0.0,
                                               AnchorSchedule schedule = {});

}  // namespace redpro
