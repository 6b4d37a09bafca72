#include "redpro/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <stdexcept>

namespace redpro {

double default_anchor_schedule(int j) { return 1.0 / (j + 2.0); }

void validate_halpern_config(const HalpernConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("HalpernConfig: alpha must lie in (0, 1]");
  }
  if (cfg.max_inner < 1) {
    throw std::invalid_argument("HalpernConfig: max_inner must be >= 1");
  }
  if (cfg.tol < 0.0) {
    throw std::invalid_argument("HalpernConfig: tol must be >= 0");
  }
}

HalpernResult halpern_project(const DenoiserSpec& f, const ImagePlane& x0,
                              const HalpernConfig& cfg) {
  validate_halpern_config(cfg);
  const AnchorSchedule& schedule =
      cfg.anchor_schedule ? cfg.anchor_schedule : AnchorSchedule(default_anchor_schedule);

  ImagePlane x = x0;
  HalpernResult result;
  for (int j = 0; j < cfg.max_inner; ++j) {
    ImagePlane fax = apply_relaxed(f, cfg.alpha, x);
    const double t = schedule(j);
    if (!(t > 0.0 && t <= 1.0)) {
      throw std::invalid_argument("anchor schedule must produce values in (0, 1]");
    }
    x = lerp(x0, fax, t);
    result.iterations = j + 1;
    if (cfg.tol > 0.0) {
      const double r = norm2(sub(x, denoise(f, x)));
      if (r <= cfg.tol) {
        result.projection = std::move(x);
        result.residual = r;
        return result;
      }
    }
  }
  result.residual = norm2(sub(x, denoise(f, x)));
  result.projection = std::move(x);
  return result;
}

ImagePlane project_dilated(const DenoiserSpec& f, const ImagePlane& x,
                           double delta, const HalpernConfig& cfg) {
  if (delta < 0.0) {
    throw std::invalid_argument("project_dilated: delta must be >= 0");
  }
  HalpernResult proj = halpern_project(f, x, cfg);
  const double dist = norm2(sub(x, proj.projection));
  if (dist <= delta) {
    return x;
  }
  // Point on the segment [projection, x] at distance delta from the
  // projection: (delta/dist) * x + (1 - delta/dist) * projection.
  const double w = delta / dist;
  return lerp(x, proj.projection, w);
}

DemicontractivityEstimate estimate_demicontractivity(
    const DenoiserSpec& f, const std::vector<ImagePlane>& fixed_points,
    const std::vector<ImagePlane>& samples) {
  if (fixed_points.empty()) {
    throw std::invalid_argument("estimate_demicontractivity: fixed_points is empty");
  }
  if (samples.empty()) {
    throw std::invalid_argument("estimate_demicontractivity: samples is empty");
  }
  for (std::size_t zi = 0; zi < fixed_points.size(); ++zi) {
    ImagePlane fz = denoise(f, fixed_points[zi]);
    const double res = norm2(sub(fixed_points[zi], fz));
    if (!(res < 1e-8)) {
      throw std::invalid_argument(
          "estimate_demicontractivity: fixed_points[" + std::to_string(zi) +
          "] has residual " + std::to_string(res) + " (must be < 1e-8)");
    }
  }

  DemicontractivityEstimate est;
  bool first = true;
  int pair_count = 0;
  for (std::size_t xi = 0; xi < samples.size(); ++xi) {
    ImagePlane fx = denoise(f, samples[xi]);
    const double den = norm2_sq(sub(fx, samples[xi]));
    for (std::size_t zi = 0; zi < fixed_points.size(); ++zi) {
      ++pair_count;
      double ratio = 0.0;  // zero-residual pairs contribute 0 by convention
      if (den >= 1e-10 * 1e-10) {
        const double lhs = norm2_sq(sub(fx, fixed_points[zi]));
        const double rhs = norm2_sq(sub(samples[xi], fixed_points[zi]));
        ratio = (lhs - rhs) / den;
      }
      if (first || ratio > est.d_raw) {
        est.d_raw = ratio;
        est.worst_sample = static_cast<int>(xi);
        est.worst_fixed_point = static_cast<int>(zi);
        first = false;
      }
    }
  }
  est.sample_count = pair_count;
  est.d_hat = std::max(0.0, est.d_raw);
  return est;
}

void ProbeReport::write_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) {
    throw std::runtime_error("ProbeReport: cannot open " + path + " for writing");
  }
  std::fprintf(fp, "pair_index,lhs,rhs,slack\n");
  for (const ProbeRow& row : rows) {
    std::fprintf(fp, "%d,%.17g,%.17g,%.17g\n", row.pair_index, row.lhs, row.rhs,
                 row.slack);
  }
  std::fclose(fp);
}

namespace {

void finalize_report(ProbeReport& report) {
  report.violation_count = 0;
  for (const ProbeRow& row : report.rows) {
    if (row.slack < -report.tolerance) {
      ++report.violation_count;
    }
  }
  report.passed = report.violation_count == 0;
}

}  // namespace

ProbeReport check_strong_quasi_nonexpansive(const DenoiserSpec& f, double alpha,
                                            double d,
                                            const std::vector<ImagePlane>& fixed_points,
                                            const std::vector<ImagePlane>& samples,
                                            double tolerance) {
  if (!(d >= 0.0 && d < 1.0)) {
    throw std::invalid_argument("check_strong_quasi_nonexpansive: d must lie in [0, 1)");
  }
  if (!(alpha > 0.0 && alpha <= 1.0 - d)) {
    throw std::invalid_argument(
        "check_strong_quasi_nonexpansive: alpha must lie in (0, 1-d]");
  }
  const double gamma = (1.0 - d - alpha) / alpha;
  ProbeReport report;
  report.name = "strong_quasi_nonexpansive";
  report.tolerance = tolerance;
  int pair_index = 0;
  for (const ImagePlane& x : samples) {
    ImagePlane fax = apply_relaxed(f, alpha, x);
    const double step = norm2_sq(sub(fax, x));
    for (const ImagePlane& z : fixed_points) {
      ProbeRow row;
      row.pair_index = pair_index++;
      row.lhs = norm2_sq(sub(fax, z));
      row.rhs = norm2_sq(sub(x, z)) - gamma * step;
      row.slack = row.rhs - row.lhs;
      report.rows.push_back(row);
    }
  }
  finalize_report(report);
  return report;
}

ProbeReport check_bounded_denoiser(const DenoiserSpec& f, double alpha, double d,
                                   double range_a, double range_b,
                                   const std::vector<ImagePlane>& samples,
                                   const std::vector<ImagePlane>& fixed_points,
                                   double tolerance) {
  if (!(d >= 0.0 && d < 1.0)) {
    throw std::invalid_argument("check_bounded_denoiser: d must lie in [0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0 - d)) {
    throw std::invalid_argument("check_bounded_denoiser: alpha must lie in (0, 1-d)");
  }
  if (!(range_b > range_a)) {
    throw std::invalid_argument("check_bounded_denoiser: range must satisfy a < b");
  }
  for (const ImagePlane& x : samples) {
    for (double v : x.data) {
      if (v < range_a || v > range_b) {
        throw std::invalid_argument(
            "check_bounded_denoiser: sample leaves the [a, b] range");
      }
    }
  }
  bool have_interior_fixed_point = false;
  for (const ImagePlane& z : fixed_points) {
    bool inside = true;
    for (double v : z.data) {
      if (v < range_a || v > range_b) {
        inside = false;
        break;
      }
    }
    ImagePlane fz = denoise(f, z);
    if (inside && norm2(sub(z, fz)) < 1e-8) {
      have_interior_fixed_point = true;
      break;
    }
  }
  if (!have_interior_fixed_point) {
    throw std::invalid_argument(
        "check_bounded_denoiser: no supplied fixed point lies inside [a, b]^n");
  }

  const double sigma2 = alpha / (1.0 - d - alpha);
  const double bound = sigma2 * (range_b - range_a) * (range_b - range_a);
  ProbeReport report;
  report.name = "bounded_denoiser";
  report.tolerance = tolerance;
  int pair_index = 0;
  for (const ImagePlane& x : samples) {
    ImagePlane fax = apply_relaxed(f, alpha, x);
    ProbeRow row;
    row.pair_index = pair_index++;
    row.lhs = norm2_sq(sub(fax, x)) / static_cast<double>(x.size());
    row.rhs = bound;
    row.slack = row.rhs - row.lhs;
    report.rows.push_back(row);
  }
  finalize_report(report);
  return report;
}

ProbeReport check_dilation_containment(const DenoiserSpec& f, double alpha,
                                       double epsilon, const HalpernConfig& cfg,
                                       const std::vector<ImagePlane>& samples,
                                       double d, double tolerance) {
  if (!(d >= 0.0 && d < 1.0)) {
    throw std::invalid_argument("check_dilation_containment: d must lie in [0, 1)");
  }
  if (!(alpha > 0.0 && alpha <= (1.0 - d) / 2.0)) {
    throw std::invalid_argument(
        "check_dilation_containment: alpha must lie in (0, (1-d)/2]");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("check_dilation_containment: epsilon must be > 0");
  }
  const double delta = alpha * epsilon;
  ProbeReport report;
  report.name = "dilation_containment";
  report.tolerance = tolerance;
  int pair_index = 0;
  for (const ImagePlane& x : samples) {
    ImagePlane xp = project_dilated(f, x, delta, cfg);
    ImagePlane fxp = denoise(f, xp);
    ProbeRow row;
    row.pair_index = pair_index++;
    row.lhs = norm2(sub(xp, fxp));
    row.rhs = epsilon;
    row.slack = row.rhs - row.lhs;
    report.rows.push_back(row);
  }
  finalize_report(report);
  return report;
}

ProbeReport check_cocoercivity(const DenoiserSpec& f,
                               const std::vector<ImagePlane>& fixed_points,
                               const std::vector<ImagePlane>& samples,
                               double L_candidate, double tolerance) {
  if (!(L_candidate > 0.0)) {
    throw std::invalid_argument("check_cocoercivity: L_candidate must be > 0");
  }
  ProbeReport report;
  report.name = "cocoercivity";
  report.tolerance = tolerance;
  report.auxiliary = 1.0 - 2.0 / L_candidate;  // implied demicontractivity constant
  int pair_index = 0;
  for (const ImagePlane& x : samples) {
    ImagePlane fx = denoise(f, x);
    ImagePlane rx = sub(x, fx);
    for (const ImagePlane& z : fixed_points) {
      ImagePlane fz = denoise(f, z);
      ImagePlane rz = sub(z, fz);
      ProbeRow row;
      row.pair_index = pair_index++;
      row.lhs = norm2_sq(sub(rx, rz)) / L_candidate;
      row.rhs = dot(rx, sub(x, z));
      row.slack = row.rhs - row.lhs;
      report.rows.push_back(row);
    }
  }
  finalize_report(report);
  return report;
}

namespace {

double cycle_monotone_sum(const std::vector<const ImagePlane*>& xs,
                          const std::vector<const ImagePlane*>& residuals,
                          const std::vector<int>& cycle) {
  double sum = 0.0;
  const int m = static_cast<int>(cycle.size());
  for (int i = 0; i < m; ++i) {
    const ImagePlane& a = *residuals[cycle[i]];
    const ImagePlane& xi = *xs[cycle[i]];
    const ImagePlane& xn = *xs[cycle[(i + 1) % m]];
    for (std::size_t p = 0; p < a.data.size(); ++p) {
      sum += a.data[p] * (xn.data[p] - xi.data[p]);
    }
  }
  return sum;
}

double cycle_firm_sum(const std::vector<const ImagePlane*>& images,
                      const std::vector<const ImagePlane*>& residuals,
                      const std::vector<int>& cycle) {
  // sum_i <x_i - f(x_i), f(x_i) - f(x_{i+1})>, with f(x) = x - residual(x).
  double sum = 0.0;
  const int m = static_cast<int>(cycle.size());
  for (int i = 0; i < m; ++i) {
    const ImagePlane& ri = *residuals[cycle[i]];
    const ImagePlane& xi = *images[cycle[i]];
    const ImagePlane& rn = *residuals[cycle[(i + 1) % m]];
    const ImagePlane& xn = *images[cycle[(i + 1) % m]];
    for (std::size_t p = 0; p < ri.data.size(); ++p) {
      const double fi = xi.data[p] - ri.data[p];
      const double fn = xn.data[p] - rn.data[p];
      sum += ri.data[p] * (fi - fn);
    }
  }
  return sum;
}

}  // namespace

CyclicProbeResult cyclic_monotonicity_probe(const DenoiserSpec& f,
                                            const std::vector<ImagePlane>& cycle_points,
                                            int m, std::uint64_t seed,
                                            long long max_exhaustive,
                                            long long random_cycles) {
  if (m < 2) {
    throw std::invalid_argument("cyclic_monotonicity_probe: m must be >= 2");
  }
  if (static_cast<int>(cycle_points.size()) < m) {
    throw std::invalid_argument(
        "cyclic_monotonicity_probe: need at least m cycle points");
  }
  const int n = static_cast<int>(cycle_points.size());

  std::vector<ImagePlane> residual_storage;
  residual_storage.reserve(cycle_points.size());
  for (const ImagePlane& x : cycle_points) {
    residual_storage.push_back(sub(x, denoise(f, x)));
  }
  std::vector<const ImagePlane*> xs, residuals;
  for (int i = 0; i < n; ++i) {
    xs.push_back(&cycle_points[i]);
    residuals.push_back(&residual_storage[i]);
  }

  // Total ordered m-tuples (repetition allowed keeps the enumeration simple;
  // degenerate tuples contribute sums of zero-length moves and cannot create
  // spurious violations).
  double tuple_count = 1.0;
  for (int i = 0; i < m; ++i) tuple_count *= n;
  const bool exhaustive = tuple_count <= static_cast<double>(max_exhaustive);

  CyclicProbeResult result;
  result.exhaustive = exhaustive;
  bool first = true;

  auto consider = [&](const std::vector<int>& cycle) {
    const double mono = cycle_monotone_sum(xs, residuals, cycle);
    const double firm = cycle_firm_sum(xs, residuals, cycle);
    if (first || mono > result.max_cycle_sum) {
      result.max_cycle_sum = mono;
      result.max_cycle_witness = cycle;
    }
    if (first || firm < result.min_firm_sum) {
      result.min_firm_sum = firm;
      result.min_firm_witness = cycle;
    }
    first = false;
    ++result.cycles_examined;
  };

  std::vector<int> cycle(m, 0);
  if (exhaustive) {
    // Odometer enumeration of all n^m tuples in index order (deterministic).
    while (true) {
      consider(cycle);
      int pos = m - 1;
      while (pos >= 0) {
        if (++cycle[pos] < n) break;
        cycle[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (long long c = 0; c < random_cycles; ++c) {
      for (int i = 0; i < m; ++i) cycle[i] = pick(rng);
      consider(cycle);
    }
  }
  return result;
}

DenoiserSpec make_fixpoint_projection_operator(const DenoiserSpec& inner,
                                               double alpha, int inner_iters,
                                               double delta,
                                               AnchorSchedule schedule) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(
        "make_fixpoint_projection_operator: alpha must lie in (0, 1]");
  }
  if (inner_iters < 1) {
    throw std::invalid_argument(
        "make_fixpoint_projection_operator: inner_iters must be >= 1");
  }
  if (delta < 0.0) {
    throw std::invalid_argument(
        "make_fixpoint_projection_operator: delta must be >= 0");
  }
  auto inner_copy = std::make_shared<DenoiserSpec>(inner);
  AnchorSchedule sched = schedule ? std::move(schedule)
                                  : AnchorSchedule(default_anchor_schedule);
  auto body = [inner_copy, alpha, inner_iters, delta,
               sched = std::move(sched)](const ImagePlane& x) -> ImagePlane {
    // Anchored inner loop x_{j+1} = f_alpha(t_j * x + (1 - t_j) * x_j),
    // the form used by the relaxed projection solver: the anchor mix feeds
    // the relaxed denoiser rather than following it.
    ImagePlane xj = x;
    for (int j = 0; j < inner_iters; ++j) {
      const double t = sched(j);
      ImagePlane mixed = lerp(x, xj, t);
      xj = apply_relaxed(*inner_copy, alpha, mixed);
    }
    if (delta > 0.0) {
      const double dist = norm2(sub(x, xj));
      if (dist <= delta) {
        return x;
      }
      return lerp(x, xj, delta / dist);
    }
    return xj;
  };
  return make_custom_denoiser(std::move(body));
}

}  // namespace redpro
