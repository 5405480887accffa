#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "sspnp/experiment.hpp"
#include "sspnp/train.hpp"
#include "sspnp/image_io.hpp"
#include "sspnp/metrics.hpp"
#include "sspnp/test_card.hpp"

namespace {

using namespace sspnp;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by the pipeline subcommands; a config file supplies
// defaults and explicit command-line flags win.
struct CommonFlags {
  std::string config_path;
  std::vector<std::pair<std::string, CLI::Option*>> bound;

  void add(CLI::App* app, harness::ExperimentConfig& cfg) {
    app->add_option("--config", config_path, "key = value configuration file");
    bind(app->add_option_function<std::string>(
             "--task", [&cfg](const std::string& v) { cfg.task = harness::task_from_string(v); },
             "deconv|sr2|sr4|joint"),
         "task");
    bind(app->add_option_function<std::string>(
             "--prior",
             [&cfg](const std::string& v) { cfg.prior = harness::prior_from_string(v); },
             "phi-inr|siren-inr|tv"),
         "prior");
    bind(app->add_option("--seed", cfg.seed, "random seed"), "seed");
    bind(app->add_option("--train-iters", cfg.train.iterations, "denoiser training iterations"),
         "train-iters");
    bind(app->add_option("--noise-std", cfg.train.noise_std, "training noise std"), "noise-std");
    bind(app->add_option("--lr", cfg.train.lr, "training learning rate"), "lr");
    bind(app->add_option("--admm-iters", cfg.admm_iterations, "ADMM iterations"), "admm-iters");
    bind(app->add_option("--sigma-hi", cfg.sigma_hi, "initial denoising strength"), "sigma-hi");
    bind(app->add_option("--sigma-lo", cfg.sigma_lo, "final denoising strength"), "sigma-lo");
    bind(app->add_option("--mu-base", cfg.mu_base, "base data penalty"), "mu-base");
    bind(app->add_option_function<std::string>(
             "--admm-init",
             [&cfg](const std::string& v) { harness::apply_config_key(cfg, "admm-init", v); },
             "adjoint-both|zero-dual"),
         "admm-init");
    bind(app->add_flag("--return-z", cfg.return_z, "output z^K instead of x^K"), "return-z");
    bind(app->add_flag("--random-z0", cfg.random_z0, "random z^0 instead of A^T(y)"),
         "random-z0");
    bind(app->add_option("--obs-noise", cfg.observation_noise_std,
                         "measurement noise std added by degradation"),
         "obs-noise");
    bind(app->add_option("--cg-tol", cfg.prox.cg_tol, "CG relative tolerance"), "cg-tol");
    bind(app->add_option("--cg-max-iters", cfg.prox.cg_max_iters, "CG iteration cap"),
         "cg-max-iters");
    bind(app->add_option_function<std::string>(
             "--prox-method",
             [&cfg](const std::string& v) { harness::apply_config_key(cfg, "prox-method", v); },
             "fft|cg|auto"),
         "prox-method");
    bind(app->add_option("--tv-weight", cfg.tv_weight, "TV prior weight"), "tv-weight");
    bind(app->add_option("--tv-iters", cfg.tv_iters, "TV dual iterations"), "tv-iters");
    bind(app->add_option("--a1", cfg.activation.a1, "activation coefficient a1"), "a1");
    bind(app->add_option("--b1", cfg.activation.b1, "activation coefficient b1"), "b1");
    bind(app->add_option("--a2", cfg.activation.a2, "activation coefficient a2"), "a2");
    bind(app->add_option("--b2", cfg.activation.b2, "activation coefficient b2"), "b2");
    bind(app->add_flag_function(
             "--fixed-noise",
             [&cfg](int64_t) { cfg.train.resample_noise = false; },
             "reuse one training noise draw instead of resampling"),
         "fixed-noise");
  }

  // Apply file values only where no command-line flag was given.
  void finish(harness::ExperimentConfig& cfg) {
    if (config_path.empty()) return;
    for (const auto& [key, value] : harness::read_config_file(config_path)) {
      bool overridden = false;
      for (const auto& [name, opt] : bound) {
        if (name == key && opt->count() > 0) {
          overridden = true;
          break;
        }
      }
      if (!overridden) harness::apply_config_key(cfg, key, value);
    }
  }

 private:
  void bind(CLI::Option* opt, const std::string& key) { bound.emplace_back(key, opt); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-shot plug-and-play image restoration"};
  app.require_subcommand(1);

  harness::ExperimentConfig cfg;

  // run: degrade -> train -> ADMM -> metrics, everything in one go
  auto* run = app.add_subcommand("run", "end-to-end restoration from a clean image");
  CommonFlags run_flags;
  run->add_option("--input", cfg.input_path, "clean input image");
  run->add_option("--observation", cfg.observation_path, "pre-degraded observation (skips degrade)");
  run->add_option("--reference", cfg.reference_path, "clean reference for scoring");
  run->add_option("--out", cfg.output_dir, "output directory")->required();
  run->add_option("--resize-height", cfg.resize_height, "resize input height");
  run->add_option("--resize-width", cfg.resize_width, "resize input width");
  run_flags.add(run, cfg);

  // degrade only
  auto* degrade_cmd = app.add_subcommand("degrade", "apply the task degradation to an image");
  std::string degrade_in, degrade_out;
  CommonFlags degrade_flags;
  degrade_cmd->add_option("--input", degrade_in, "clean input image")->required();
  degrade_cmd->add_option("--out", degrade_out, "observation output path")->required();
  degrade_flags.add(degrade_cmd, cfg);

  // train-denoiser only
  auto* train_cmd = app.add_subcommand("train-denoiser", "fit the denoiser on one observation");
  std::string train_in, train_out, train_loss_csv;
  CommonFlags train_flags;
  train_cmd->add_option("--input", train_in, "observation image")->required();
  train_cmd->add_option("--out", train_out, "model output path")->required();
  train_cmd->add_option("--loss-log", train_loss_csv, "per-iteration loss CSV");
  train_flags.add(train_cmd, cfg);

  // solve: ADMM with an existing model (or the TV prior)
  auto* solve_cmd = app.add_subcommand("solve", "run the ADMM iteration on an observation");
  std::string solve_model;
  CommonFlags solve_flags;
  solve_cmd->add_option("--observation", cfg.observation_path, "observation image")->required();
  solve_cmd->add_option("--model", solve_model, "trained denoiser model (omit for --prior tv)");
  solve_cmd->add_option("--reference", cfg.reference_path, "clean reference for scoring");
  solve_cmd->add_option("--out", cfg.output_dir, "output directory")->required();
  solve_flags.add(solve_cmd, cfg);

  // ablate: task x prior comparison table
  auto* ablate_cmd = app.add_subcommand("ablate", "compare priors across tasks");
  std::string ablate_tasks = "deconv,sr2,sr4,joint";
  std::string ablate_priors = "phi-inr,siren-inr";
  CommonFlags ablate_flags;
  ablate_cmd->add_option("--input", cfg.input_path, "clean input image")->required();
  ablate_cmd->add_option("--out", cfg.output_dir, "output directory")->required();
  ablate_cmd->add_option("--tasks", ablate_tasks, "comma-separated task list");
  ablate_cmd->add_option("--priors", ablate_priors, "comma-separated prior list");
  ablate_flags.add(ablate_cmd, cfg);

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR/SSIM between two images");
  std::string metrics_a, metrics_b;
  metrics_cmd->add_option("--a", metrics_a, "first image")->required();
  metrics_cmd->add_option("--b", metrics_b, "second image")->required();

  // denoise: apply a trained model once
  auto* denoise_cmd = app.add_subcommand("denoise", "apply a trained denoiser to an image");
  std::string denoise_in, denoise_model, denoise_out;
  denoise_cmd->add_option("--input", denoise_in, "input image")->required();
  denoise_cmd->add_option("--model", denoise_model, "trained model")->required();
  denoise_cmd->add_option("--out", denoise_out, "output path")->required();

  // add-noise: synthetic Gaussian corruption
  auto* noise_cmd = app.add_subcommand("add-noise", "add clamped Gaussian noise to an image");
  std::string noise_in, noise_out;
  double noise_std = 0.1;
  uint64_t noise_seed = 0;
  noise_cmd->add_option("--input", noise_in, "input image")->required();
  noise_cmd->add_option("--out", noise_out, "output path")->required();
  noise_cmd->add_option("--std", noise_std, "noise standard deviation");
  noise_cmd->add_option("--seed", noise_seed, "noise seed");

  // make-test-image
  auto* card_cmd = app.add_subcommand("make-test-image", "write a synthetic test image");
  std::string card_out;
  int card_h = 384, card_w = 512, card_c = 3;
  uint64_t card_seed = 0;
  card_cmd->add_option("--out", card_out, "output path")->required();
  card_cmd->add_option("--height", card_h, "image height");
  card_cmd->add_option("--width", card_w, "image width");
  card_cmd->add_option("--channels", card_c, "1 or 3");
  card_cmd->add_option("--seed", card_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      run_flags.finish(cfg);
      const auto record = harness::run_experiment(cfg);
      std::cout << "reconstruction: " << record.reconstruction_path << "\n";
      if (record.has_reference) {
        std::cout << "psnr_db: " << record.quality.psnr_db << "\n"
                  << "ssim: " << record.quality.ssim << "\n"
                  << "adjoint_psnr_db: " << record.adjoint_psnr << "\n";
      }
      std::cout << "manifest: " << record.manifest_path << "\n";
    } else if (degrade_cmd->parsed()) {
      degrade_flags.finish(cfg);
      Image clean = io::load_image(degrade_in);
      if (cfg.resize_height > 0 && cfg.resize_width > 0) {
        clean = io::resize_bilinear(clean, cfg.resize_height, cfg.resize_width);
      }
      const Image y = harness::degrade(clean, cfg);
      io::save_image(y, degrade_out);
      std::cout << "observation: " << degrade_out << " (" << y.shape_string() << ")\n";
    } else if (train_cmd->parsed()) {
      train_flags.finish(cfg);
      const Image y = io::load_image(train_in);
      train::TrainConfig tc = cfg.train;
      tc.seed = cfg.seed;
      tc.loss_log_path = train_loss_csv;
      inr::ActivationParams act = cfg.activation;
      act.kind = cfg.prior == harness::Prior::siren_inr ? inr::Activation::sine
                                                        : inr::Activation::phi;
      const auto result = train::train_single_shot(y, tc, act);
      inr::save_model(result.model, train_out);
      std::cout << "model: " << train_out << "\n";
      if (!result.losses.empty()) {
        std::cout << "loss: " << result.losses.front() << " -> " << result.losses.back() << "\n";
      }
    } else if (solve_cmd->parsed()) {
      solve_flags.finish(cfg);
      if (!solve_model.empty()) {
        // Reuse the experiment driver by pointing it at the trained model:
        // load, wrap, and run the iteration directly.
        const Image y = io::load_image(cfg.observation_path);
        const auto model = inr::load_model(solve_model);
        std::filesystem::create_directories(cfg.output_dir);
        Image reference;
        const bool have_ref = !cfg.reference_path.empty();
        if (have_ref) reference = io::load_image(cfg.reference_path);
        const int s = cfg.task == harness::Task::sr2 ? 2
                     : cfg.task == harness::Task::sr4 ? 4 : 1;
        const int rh = have_ref ? reference.height() : y.height() * s;
        const int rw = have_ref ? reference.width() : y.width() * s;
        const auto a = harness::operator_for_task(cfg.task, rh, rw);
        admm::AdmmOptions options;
        options.schedule = admm::make_schedule(cfg.admm_iterations, cfg.sigma_hi, cfg.sigma_lo,
                                               cfg.mu_base);
        options.prox = cfg.prox;
        options.init = cfg.admm_init;
        options.return_z = cfg.return_z;
        options.random_z0 = cfg.random_z0;
        const auto result = admm::run_admm(
            y, a, [&model](const Image& img) { return inr::apply_denoiser(model, img); },
            options, have_ref ? &reference : nullptr);
        const std::string recon_path =
            (std::filesystem::path(cfg.output_dir) / "reconstruction.png").string();
        io::save_image(result.reconstruction, recon_path);
        admm::write_history_csv(
            result.history,
            (std::filesystem::path(cfg.output_dir) / "history.csv").string());
        std::cout << "reconstruction: " << recon_path << "\n";
        if (have_ref) {
          std::cout << "psnr_db: " << metrics::psnr(result.reconstruction, reference) << "\n";
        }
      } else {
        if (cfg.prior != harness::Prior::tv) {
          throw std::invalid_argument("solve: need --model, or --prior tv");
        }
        const auto record = harness::run_experiment(cfg);
        std::cout << "reconstruction: " << record.reconstruction_path << "\n";
        if (record.has_reference) {
          std::cout << "psnr_db: " << record.quality.psnr_db << "\n";
        }
      }
    } else if (ablate_cmd->parsed()) {
      ablate_flags.finish(cfg);
      std::vector<harness::Task> tasks;
      for (const auto& t : split_csv(ablate_tasks)) tasks.push_back(harness::task_from_string(t));
      std::vector<harness::Prior> priors;
      for (const auto& p : split_csv(ablate_priors)) {
        priors.push_back(harness::prior_from_string(p));
      }
      const auto entries = harness::ablate(cfg, tasks, priors);
      std::cout << harness::ablation_table_text(entries);
    } else if (metrics_cmd->parsed()) {
      const Image a = io::load_image(metrics_a);
      const Image b = io::load_image(metrics_b);
      const auto report = metrics::quality_report(a, b);
      std::cout << "psnr_db: " << report.psnr_db << "\n" << "ssim: " << report.ssim << "\n";
    } else if (denoise_cmd->parsed()) {
      const Image input = io::load_image(denoise_in);
      const auto model = inr::load_model(denoise_model);
      io::save_image(inr::apply_denoiser(model, input), denoise_out);
      std::cout << "output: " << denoise_out << "\n";
    } else if (noise_cmd->parsed()) {
      const Image input = io::load_image(noise_in);
      io::save_image(train::add_noise(input, noise_std, noise_seed), noise_out);
      std::cout << "output: " << noise_out << "\n";
    } else if (card_cmd->parsed()) {
      const Image card = harness::make_test_card(card_h, card_w, card_c, card_seed);
      io::save_image(card, card_out);
      std::cout << "image: " << card_out << " (" << card.shape_string() << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
