#include "sspnp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sspnp/image_io.hpp"
#include "sspnp/rng.hpp"

namespace sspnp::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Task t) {
  switch (t) {
    case Task::deconv: return "deconv";
    case Task::sr2: return "sr2";
    case Task::sr4: return "sr4";
    case Task::joint: return "joint";
  }
  return "?";
}

std::string to_string(Prior p) {
  switch (p) {
    case Prior::phi_inr: return "phi-inr";
    case Prior::siren_inr: return "siren-inr";
    case Prior::tv: return "tv";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "deconv") return Task::deconv;
  if (s == "sr2") return Task::sr2;
  if (s == "sr4") return Task::sr4;
  if (s == "joint") return Task::joint;
  throw std::invalid_argument("unknown task '" + s + "' (expected deconv|sr2|sr4|joint)");
}

Prior prior_from_string(const std::string& s) {
  if (s == "phi-inr") return Prior::phi_inr;
  if (s == "siren-inr") return Prior::siren_inr;
  if (s == "tv") return Prior::tv;
  throw std::invalid_argument("unknown prior '" + s + "' (expected phi-inr|siren-inr|tv)");
}

op::ForwardOperator operator_for_task(Task task, int height, int width) {
  switch (task) {
    case Task::deconv:
      return op::ForwardOperator::deconv(op::make_gaussian_kernel(15, 5.0));
    case Task::sr2:
      return op::ForwardOperator::sr(op::make_gaussian_kernel(5, 3.0), 2);
    case Task::sr4:
      return op::ForwardOperator::sr(op::make_gaussian_kernel(5, 3.0), 4);
    case Task::joint:
      return op::ForwardOperator::joint(op::make_gaussian_kernel(15, 5.0),
                                        op::make_bayer_mask(height, width));
  }
  throw std::logic_error("operator_for_task: unknown task");
}

namespace {

constexpr uint64_t kDegradeSeedSalt = 0x5eedf00dULL;
constexpr uint64_t kZ0SeedSalt = 0x7a30b1a5ULL;

int task_scale(Task t) { return t == Task::sr2 ? 2 : (t == Task::sr4 ? 4 : 1); }

inr::ActivationParams activation_for(const ExperimentConfig& cfg) {
  inr::ActivationParams act = cfg.activation;
  act.kind = cfg.prior == Prior::siren_inr ? inr::Activation::sine : inr::Activation::phi;
  return act;
}

}  // namespace

Image degrade(const Image& clean, const ExperimentConfig& cfg) {
  const auto a = operator_for_task(cfg.task, clean.height(), clean.width());
  Image y = a.apply(clean);
  if (cfg.observation_noise_std > 0.0) {
    Rng rng(cfg.seed ^ kDegradeSeedSalt);
    for (double& v : y.raw()) v += rng.gaussian(0.0, cfg.observation_noise_std);
    y = clamp01(y);
  }
  return y;
}

namespace {

json config_json(const ExperimentConfig& cfg) {
  return json{{"task", to_string(cfg.task)},
              {"prior", to_string(cfg.prior)},
              {"input", cfg.input_path},
              {"observation", cfg.observation_path},
              {"reference", cfg.reference_path},
              {"output_dir", cfg.output_dir},
              {"seed", cfg.seed},
              {"train",
               {{"noise_std", cfg.train.noise_std},
                {"iterations", cfg.train.iterations},
                {"lr", cfg.train.lr},
                {"resample_noise", cfg.train.resample_noise}}},
              {"activation",
               {{"a1", cfg.activation.a1},
                {"b1", cfg.activation.b1},
                {"a2", cfg.activation.a2},
                {"b2", cfg.activation.b2},
                {"sine_omega_first", cfg.activation.sine_omega_first}}},
              {"admm",
               {{"iterations", cfg.admm_iterations},
                {"sigma_hi", cfg.sigma_hi},
                {"sigma_lo", cfg.sigma_lo},
                {"mu_base", cfg.mu_base},
                {"init", cfg.admm_init == admm::AdmmInit::adjoint_both ? "adjoint-both"
                                                                       : "zero-dual"},
                {"return_z", cfg.return_z},
                {"random_z0", cfg.random_z0}}},
              {"prox",
               {{"method", cfg.prox.method == prox::ProxMethod::fft
                               ? "fft"
                               : (cfg.prox.method == prox::ProxMethod::cg ? "cg" : "auto")},
                {"cg_tol", cfg.prox.cg_tol},
                {"cg_max_iters", cfg.prox.cg_max_iters}}},
              {"observation_noise_std", cfg.observation_noise_std},
              {"tv", {{"weight", cfg.tv_weight}, {"iters", cfg.tv_iters}}},
              {"resize", {{"height", cfg.resize_height}, {"width", cfg.resize_width}}}};
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  if (cfg.output_dir.empty()) throw std::invalid_argument("run_experiment: output_dir not set");
  fs::create_directories(cfg.output_dir);
  const auto out = [&](const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
  };

  RunRecord record;

  // Gather the observation and, when available, the clean reference.
  Image reference;
  bool have_reference = false;
  Image y;
  int recon_h = 0, recon_w = 0;
  if (!cfg.observation_path.empty()) {
    y = io::load_image(cfg.observation_path);
    record.observation_path = cfg.observation_path;
    if (!cfg.reference_path.empty()) {
      reference = io::load_image(cfg.reference_path);
      have_reference = true;
      recon_h = reference.height();
      recon_w = reference.width();
    } else {
      const int s = task_scale(cfg.task);
      recon_h = y.height() * s;
      recon_w = y.width() * s;
    }
  } else {
    if (cfg.input_path.empty()) {
      throw std::invalid_argument("run_experiment: need input or observation");
    }
    reference = io::load_image(cfg.input_path);
    if (cfg.resize_height > 0 && cfg.resize_width > 0) {
      reference = io::resize_bilinear(reference, cfg.resize_height, cfg.resize_width);
    }
    have_reference = true;
    recon_h = reference.height();
    recon_w = reference.width();
    y = degrade(reference, cfg);
    record.observation_path = out("observation.png");
    io::save_image(y, record.observation_path);
  }
  record.observation = y;
  record.has_reference = have_reference;

  const auto a = operator_for_task(cfg.task, recon_h, recon_w);
  {
    int oh = 0, ow = 0;
    a.observation_shape(recon_h, recon_w, oh, ow);
    if (oh != y.height() || ow != y.width()) {
      throw std::invalid_argument("run_experiment: observation shape " + y.shape_string() +
                                  " does not match the task (expected " + std::to_string(oh) +
                                  "x" + std::to_string(ow) + ")");
    }
  }

  // Step 1: fit the denoising prior on the observation alone.
  admm::Denoiser denoiser;
  const auto t_train = std::chrono::steady_clock::now();
  if (cfg.prior == Prior::tv) {
    const double w = cfg.tv_weight;
    const int it = cfg.tv_iters;
    denoiser = [w, it](const Image& img) { return prox::tv_denoise(img, w, it); };
  } else {
    train::TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    record.loss_log_path = out("train_loss.csv");
    tc.loss_log_path = record.loss_log_path;
    auto trained = train::train_single_shot(y, tc, activation_for(cfg));
    record.model_path = out("model.bin");
    inr::save_model(trained.model, record.model_path);
    denoiser = [model = std::move(trained.model)](const Image& img) {
      return inr::apply_denoiser(model, img);
    };
  }
  record.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_train).count();

  // Step 2: plug the frozen denoiser into the splitting iteration.
  admm::AdmmOptions options;
  options.schedule = admm::make_schedule(cfg.admm_iterations, cfg.sigma_hi, cfg.sigma_lo,
                                         cfg.mu_base);
  options.prox = cfg.prox;
  options.init = cfg.admm_init;
  options.return_z = cfg.return_z;
  options.random_z0 = cfg.random_z0;
  options.z0_seed = cfg.seed ^ kZ0SeedSalt;

  const auto t_admm = std::chrono::steady_clock::now();
  const auto admm_result =
      admm::run_admm(y, a, denoiser, options, have_reference ? &reference : nullptr);
  record.admm_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_admm).count();

  record.history = admm_result.history;
  record.reconstruction = admm_result.reconstruction;
  record.reconstruction_path = out("reconstruction.png");
  io::save_image(record.reconstruction, record.reconstruction_path);
  record.history_path = out("history.csv");
  admm::write_history_csv(record.history, record.history_path);

  if (have_reference) {
    record.quality = metrics::quality_report(record.reconstruction, reference);
    record.adjoint_psnr = metrics::psnr(a.adjoint(y), reference);
  }
  record.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  json manifest;
  manifest["config"] = config_json(cfg);
  manifest["artifacts"] = {{"reconstruction", record.reconstruction_path},
                           {"observation", record.observation_path},
                           {"history", record.history_path}};
  if (!record.model_path.empty()) manifest["artifacts"]["model"] = record.model_path;
  if (!record.loss_log_path.empty()) manifest["artifacts"]["train_loss"] = record.loss_log_path;
  if (have_reference) {
    manifest["metrics"] = {{"psnr_db", record.quality.psnr_db},
                           {"ssim", record.quality.ssim},
                           {"adjoint_psnr_db", record.adjoint_psnr}};
  }
  json hist = json::array();
  for (const auto& r : record.history) {
    hist.push_back({{"k", r.k},
                    {"sigma", r.sigma},
                    {"mu", r.mu},
                    {"psnr", r.psnr},
                    {"ssim", r.ssim},
                    {"data_residual", r.data_residual}});
  }
  manifest["history"] = hist;
  manifest["timing"] = {{"train_seconds", record.train_seconds},
                        {"admm_seconds", record.admm_seconds},
                        {"total_seconds", record.total_seconds}};

  record.manifest_path = out("manifest.json");
  std::ofstream os(record.manifest_path);
  os << manifest.dump(2) << "\n";
  if (!os) throw std::runtime_error("run_experiment: cannot write manifest");

  for (const std::string* path :
       {&record.reconstruction_path, &record.history_path, &record.manifest_path}) {
    if (!fs::exists(*path)) {
      throw std::runtime_error("run_experiment: expected artifact missing: " + *path);
    }
  }
  return record;
}

std::vector<AblationEntry> ablate(const ExperimentConfig& base, const std::vector<Task>& tasks,
                                  const std::vector<Prior>& priors) {
  if (priors.size() < 2) {
    throw std::invalid_argument("ablate: need at least two priors to compare");
  }
  if (tasks.empty()) throw std::invalid_argument("ablate: no tasks");
  for (size_t i = 1; i < tasks.size(); ++i) {
    if (std::count(tasks.begin(), tasks.end(), tasks[i]) > 1) {
      throw std::invalid_argument("ablate: duplicate task");
    }
  }

  std::vector<AblationEntry> entries;
  for (Task task : tasks) {
    for (Prior prior : priors) {
      ExperimentConfig cfg = base;
      cfg.task = task;
      cfg.prior = prior;
      cfg.output_dir = (fs::path(base.output_dir) /
                        (to_string(task) + "_" + to_string(prior))).string();
      const RunRecord record = run_experiment(cfg);
      if (!record.has_reference) {
        throw std::invalid_argument("ablate: runs need a clean reference to score");
      }
      entries.push_back({task, prior, record.quality, record.adjoint_psnr});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.task != b.task) return static_cast<int>(a.task) < static_cast<int>(b.task);
    return static_cast<int>(a.prior) < static_cast<int>(b.prior);
  });

  if (!base.output_dir.empty()) {
    fs::create_directories(base.output_dir);
    write_ablation_csv(entries, (fs::path(base.output_dir) / "ablation.csv").string());
    std::ofstream os((fs::path(base.output_dir) / "ablation.txt").string());
    os << ablation_table_text(entries);
  }
  return entries;
}

std::string ablation_table_text(const std::vector<AblationEntry>& entries) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "task" << std::setw(12) << "prior" << std::right
     << std::setw(10) << "psnr_db" << std::setw(10) << "ssim" << "\n";
  for (const auto& e : entries) {
    os << std::left << std::setw(8) << to_string(e.task) << std::setw(12) << to_string(e.prior)
       << std::right << std::setw(10) << std::fixed << std::setprecision(2) << e.quality.psnr_db
       << std::setw(10) << std::setprecision(4) << e.quality.ssim << "\n";
  }
  return os.str();
}

void write_ablation_csv(const std::vector<AblationEntry>& entries, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_ablation_csv: cannot write " + path);
  os << "task,prior,psnr_db,ssim\n";
  for (const auto& e : entries) {
    os << to_string(e.task) << "," << to_string(e.prior) << "," << e.quality.psnr_db << ","
       << e.quality.ssim << "\n";
  }
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto as_double = [&] { return std::stod(value); };
  const auto as_int = [&] { return std::stoi(value); };
  const auto as_bool = [&] {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config: bad boolean '" + value + "' for " + key);
  };

  if (key == "task") cfg.task = task_from_string(value);
  else if (key == "prior") cfg.prior = prior_from_string(value);
  else if (key == "input") cfg.input_path = value;
  else if (key == "observation") cfg.observation_path = value;
  else if (key == "reference") cfg.reference_path = value;
  else if (key == "out") cfg.output_dir = value;
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "train-iters") cfg.train.iterations = as_int();
  else if (key == "noise-std") cfg.train.noise_std = as_double();
  else if (key == "lr") cfg.train.lr = as_double();
  else if (key == "fixed-noise") cfg.train.resample_noise = !as_bool();
  else if (key == "admm-iters") cfg.admm_iterations = as_int();
  else if (key == "sigma-hi") cfg.sigma_hi = as_double();
  else if (key == "sigma-lo") cfg.sigma_lo = as_double();
  else if (key == "mu-base") cfg.mu_base = as_double();
  else if (key == "admm-init") {
    if (value == "adjoint-both") cfg.admm_init = admm::AdmmInit::adjoint_both;
    else if (value == "zero-dual") cfg.admm_init = admm::AdmmInit::zero_dual;
    else throw std::invalid_argument("config: unknown admm-init '" + value + "'");
  }
  else if (key == "return-z") cfg.return_z = as_bool();
  else if (key == "random-z0") cfg.random_z0 = as_bool();
  else if (key == "obs-noise") cfg.observation_noise_std = as_double();
  else if (key == "cg-tol") cfg.prox.cg_tol = as_double();
  else if (key == "cg-max-iters") cfg.prox.cg_max_iters = as_int();
  else if (key == "prox-method") {
    if (value == "fft") cfg.prox.method = prox::ProxMethod::fft;
    else if (value == "cg") cfg.prox.method = prox::ProxMethod::cg;
    else if (value == "auto") cfg.prox.method = prox::ProxMethod::automatic;
    else throw std::invalid_argument("config: unknown prox-method '" + value + "'");
  } else if (key == "tv-weight") cfg.tv_weight = as_double();
  else if (key == "tv-iters") cfg.tv_iters = as_int();
  else if (key == "resize-height") cfg.resize_height = as_int();
  else if (key == "resize-width") cfg.resize_width = as_int();
  else if (key == "a1") cfg.activation.a1 = as_double();
  else if (key == "b1") cfg.activation.b1 = as_double();
  else if (key == "a2") cfg.activation.a2 = as_double();
  else if (key == "b2") cfg.activation.b2 = as_double();
  else if (key == "sine-omega") cfg.activation.sine_omega_first = as_double();
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_config_file: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    }
    pairs.emplace_back(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return pairs;
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  for (const auto& [key, value] : read_config_file(path)) {
    apply_config_key(cfg, key, value);
  }
}

}  // namespace sspnp::harness
