#pragma once

#include <string>
#include <vector>

#include "sspnp/admm.hpp"
#include "sspnp/image.hpp"
#include "sspnp/metrics.hpp"
#include "sspnp/model.hpp"
#include "sspnp/operators.hpp"
#include "sspnp/prox.hpp"
#include "sspnp/train.hpp"

namespace sspnp::harness {

enum class Task { deconv, sr2, sr4, joint };
enum class Prior { phi_inr, siren_inr, tv };

std::string to_string(Task t);
std::string to_string(Prior p);
Task task_from_string(const std::string& s);
Prior prior_from_string(const std::string& s);

struct ExperimentConfig {
  Task task = Task::deconv;
  Prior prior = Prior::phi_inr;

  std::string input_path;        // clean image; degraded internally
  std::string observation_path;  // pre-degraded observation, skips degradation
  std::string reference_path;    // clean reference when starting from an observation
  std::string output_dir;

  train::TrainConfig train;
  inr::ActivationParams activation;  // kind is overridden by the prior choice

  int admm_iterations = 5;
  double sigma_hi = 35.0 / 255.0;
  double sigma_lo = 30.0 / 255.0;
  double mu_base = 1.0;
  admm::AdmmInit admm_init = admm::AdmmInit::adjoint_both;
  bool return_z = false;
  bool random_z0 = false;

  prox::ProxConfig prox;
  double observation_noise_std = 0.0;  // measurement noise added by degrade
  uint64_t seed = 0;
  int resize_height = 0;  // 0 keeps the input size
  int resize_width = 0;

  double tv_weight = 0.1;
  int tv_iters = 20;
};

// The task fixes the degradation: deconv blurs with a 15-tap/std-5 kernel,
// sr blurs with 5-tap/std-3 and decimates, joint mosaics (RGGB) then blurs
// with the deconvolution kernel.
op::ForwardOperator operator_for_task(Task task, int height, int width);

// y = A(clean) plus optional measurement noise, deterministic under the seed.
Image degrade(const Image& clean, const ExperimentConfig& cfg);

struct RunRecord {
  std::vector<admm::AdmmIterationRecord> history;
  bool has_reference = false;
  metrics::QualityReport quality;  // reconstruction vs reference
  double adjoint_psnr = 0.0;       // PSNR of A^T(y), the ADMM starting point
  double train_seconds = 0.0;
  double admm_seconds = 0.0;
  double total_seconds = 0.0;
  std::string reconstruction_path, observation_path, model_path, history_path,
      manifest_path, loss_log_path;
  Image reconstruction;
  Image observation;
};

// Degrade (or load the observation), fit the denoiser on it, run the
// plug-and-play iteration and score against the reference when one exists.
// Artifacts land in cfg.output_dir.
RunRecord run_experiment(const ExperimentConfig& cfg);

struct AblationEntry {
  Task task;
  Prior prior;
  metrics::QualityReport quality;
  double adjoint_psnr = 0.0;
};

// Shared settings, one run per (task, prior) pair; at least two priors.
// Results come back sorted by task then prior and are written as CSV and an
// aligned text table under base.output_dir.
std::vector<AblationEntry> ablate(const ExperimentConfig& base, const std::vector<Task>& tasks,
                                  const std::vector<Prior>& priors);

std::string ablation_table_text(const std::vector<AblationEntry>& entries);
void write_ablation_csv(const std::vector<AblationEntry>& entries, const std::string& path);

// Flat key=value configuration text; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);
void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

}  // namespace sspnp::harness
