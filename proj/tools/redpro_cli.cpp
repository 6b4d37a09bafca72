// Command-line experiment runner: image restoration benchmarks, operator
// probes, and convergence plot data.

#include <glob.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "redpro/bench.hpp"
#include "redpro/png_io.hpp"

namespace {

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g;
  const int rc = glob(pattern.c_str(), GLOB_TILDE, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0) {
    for (size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) {
    throw std::runtime_error("failed to expand glob: " + pattern);
  }
  return out;
}

struct CommonOptions {
  std::string config;
  std::string preset;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string images;

  CLI::Option* config_opt = nullptr;
  CLI::Option* preset_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* images_opt = nullptr;

  void attach(CLI::App* sub) {
    config_opt = sub->add_option("--config", config, "configuration file (INI sections)");
    preset_opt = sub->add_option("--preset", preset,
                                 "named parameter preset (see --list-presets)");
    seed_opt = sub->add_option("--seed", seed, "base seed for the synthetic noise");
    out_opt = sub->add_option("--out", out_dir, "output directory");
    images_opt = sub->add_option("--images", images, "input image glob (PNG)");
  }
};

int run_restoration(redpro::TaskKind task, const CommonOptions& opt) {
  redpro::ExperimentConfig cfg = redpro::make_experiment_config(task);
  cfg.out_dir = "redpro_out";
  redpro::apply_preset(cfg, opt.preset_opt->count() ? opt.preset : "hsd");
  if (opt.config_opt->count()) redpro::apply_config_file(cfg, opt.config);
  if (opt.seed_opt->count()) cfg.seed = opt.seed;
  if (opt.out_opt->count()) cfg.out_dir = opt.out_dir;
  if (opt.images_opt->count()) cfg.images = expand_glob(opt.images);
  if (cfg.images.empty()) {
    std::fprintf(stderr, "no input images (use --images or a config [task] images key)\n");
    return 2;
  }

  redpro::ExperimentResult result = redpro::run_experiment(cfg);
  std::printf("task=%s solver=%s seed=%llu images=%zu\n",
              redpro::to_string(cfg.task).c_str(), cfg.solver_id.c_str(),
              static_cast<unsigned long long>(cfg.seed), cfg.images.size());
  int failures = 0;
  for (const redpro::ImageRunResult& row : result.images) {
    if (row.ok) {
      std::printf("  %-20s degraded %6.2f dB -> restored %6.2f dB  (%.1f s)\n",
                  row.image.c_str(), row.degraded_psnr, row.restored_psnr, row.seconds);
    } else {
      ++failures;
      std::printf("  %-20s FAILED: %s\n", row.image.c_str(), row.error.c_str());
    }
  }
  std::printf("summary: %s\n", result.summary_path.c_str());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restoration benchmarks over fixed-point denoiser solvers"};
  // At most one subcommand; "exactly one" is enforced after parsing so that
  // bare informational flags like --list-presets remain usable.
  app.require_subcommand(0, 1);

  std::string psf = "uniform";
  CommonOptions deblur_opt, superres_opt, probe_opt;

  CLI::App* deblur = app.add_subcommand("deblur", "deblur images (uniform or Gaussian blur)");
  deblur->add_option("--psf", psf, "blur kernel: uniform | gaussian")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  deblur_opt.attach(deblur);

  CLI::App* superres = app.add_subcommand("superres", "3x single-image super-resolution");
  superres_opt.attach(superres);

  CLI::App* probe = app.add_subcommand("probe", "operator probe suite over image patches");
  probe_opt.attach(probe);
  std::string probe_denoiser = "nlm";
  double probe_sigma_f = 3.25;
  int patch_size = 24;
  int patch_count = 32;
  probe->add_option("--denoiser", probe_denoiser,
                    "denoiser kind: nlm | median | gaussian | box | projection_box")
      ->check(CLI::IsMember({"nlm", "median", "gaussian", "box", "projection_box"}));
  probe->add_option("--sigma-f", probe_sigma_f, "denoiser strength");
  probe->add_option("--patch", patch_size, "probe patch side");
  probe->add_option("--patches", patch_count, "number of probe patches");

  CLI::App* plotdata = app.add_subcommand("plotdata", "convergence plot data from trace CSVs");
  std::vector<std::string> trace_paths;
  std::string plot_out = ".";
  plotdata->add_option("traces", trace_paths, "trace CSV files")->required();
  plotdata->add_option("--out", plot_out, "output directory");

  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "print preset names and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_presets) {
      for (const std::string& name : redpro::preset_names()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::fprintf(stderr, "A subcommand is required\nRun with --help for more information.\n");
      return 1;
    }
    if (deblur->parsed()) {
      return run_restoration(psf == "gaussian" ? redpro::TaskKind::deblur_gaussian
                                               : redpro::TaskKind::deblur_uniform,
                             deblur_opt);
    }
    if (superres->parsed()) {
      return run_restoration(redpro::TaskKind::superres, superres_opt);
    }
    if (probe->parsed()) {
      redpro::DenoiserSpec f;
      if (probe_denoiser == "nlm") {
        f = redpro::make_nlm(probe_sigma_f);
      } else if (probe_denoiser == "median") {
        f = redpro::make_median(1);
      } else if (probe_denoiser == "gaussian") {
        f = redpro::make_gaussian_denoiser(probe_sigma_f);
      } else if (probe_denoiser == "box") {
        f = redpro::make_box_denoiser(1);
      } else {
        f = redpro::make_projection_box(0.0, 255.0);
      }
      if (probe_opt.config_opt->count()) {
        redpro::ExperimentConfig tmp =
            redpro::make_experiment_config(redpro::TaskKind::deblur_uniform);
        tmp.denoiser = f;
        redpro::apply_config_file(tmp, probe_opt.config);
        f = tmp.denoiser;
      }

      const std::uint64_t seed = probe_opt.seed_opt->count() ? probe_opt.seed : 0;
      std::vector<redpro::ImagePlane> samples;
      if (probe_opt.images_opt->count()) {
        std::vector<std::string> paths = expand_glob(probe_opt.images);
        if (paths.empty()) {
          std::fprintf(stderr, "no images match %s\n", probe_opt.images.c_str());
          return 2;
        }
        const int per_image =
            std::max(1, patch_count / static_cast<int>(std::min<size_t>(paths.size(), 4)));
        for (size_t i = 0; i < paths.size() && i < 4; ++i) {
          redpro::YCbCrImage ycc = redpro::rgb_to_ycbcr(redpro::load_png(paths[i]));
          auto patches = redpro::extract_patches(ycc.y, patch_size, per_image, seed + i);
          for (auto& p : patches) samples.push_back(std::move(p));
        }
      } else {
        for (int i = 0; i < 2; ++i) {
          redpro::RgbImage scene = redpro::make_test_scene(96, 96, seed + 7 * i);
          redpro::YCbCrImage ycc = redpro::rgb_to_ycbcr(scene);
          auto patches =
              redpro::extract_patches(ycc.y, patch_size, patch_count / 2, seed + 11 * i);
          for (auto& p : patches) samples.push_back(std::move(p));
        }
      }

      const std::string out_dir =
          probe_opt.out_opt->count() ? probe_opt.out_dir : "probe_out";
      redpro::ProbeSuiteResult suite = redpro::run_probe_suite(f, samples, seed, out_dir);
      if (suite.estimated) {
        std::printf("d_raw=%.6g d_hat=%.6g over %d pairs\n", suite.estimate.d_raw,
                    suite.estimate.d_hat, suite.estimate.sample_count);
      }
      for (const std::string& n : suite.notes) std::printf("%s\n", n.c_str());
      for (const std::string& file : suite.files) std::printf("wrote %s\n", file.c_str());
      return suite.all_passed ? 0 : 1;
    }
    if (plotdata->parsed()) {
      std::vector<std::string> written =
          redpro::emit_convergence_plots(trace_paths, plot_out);
      for (const std::string& file : written) std::printf("wrote %s\n", file.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
