#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "d2p/denoiser.hpp"
#include "d2p/episode.hpp"
#include "d2p/errors.hpp"
#include "d2p/loss.hpp"
#include "d2p/rng.hpp"
#include "d2p/schedule.hpp"

namespace test_helpers {

// Fresh per-test directory under the working directory (ctest runs the
// binaries from their build directory).
inline std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path("scratch") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw d2p::IoError("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw d2p::IoError("cannot write " + path.string());
}

// Minimal labeled episode whose first feature channel encodes the label, so
// a small model can overfit it quickly. No detections, fixed hand pixel.
inline d2p::Episode make_label_episode(const std::string& id, const std::vector<int>& labels,
                                       int feature_dim) {
  d2p::Episode ep;
  ep.id = id;
  ep.fps = 22.0;
  ep.frame_count = static_cast<int>(labels.size());
  ep.feature_dim = feature_dim;
  ep.frames.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    d2p::FrameRecord frame;
    frame.index = static_cast<int>(i);
    frame.time_s = static_cast<double>(i) / ep.fps;
    frame.features.resize(static_cast<std::size_t>(feature_dim));
    frame.features[0] = labels[i] == 1 ? 1.0 : -1.0;
    for (int j = 1; j < feature_dim; ++j) {
      frame.features[static_cast<std::size_t>(j)] =
          0.1 * std::sin(0.7 * static_cast<double>(i) + static_cast<double>(j));
    }
    frame.gt_label = d2p::ActionLabel{labels[i]};
    frame.gt_hand = d2p::Pixel{320.0, 320.0};
    ep.frames.push_back(std::move(frame));
  }
  ep.validate();
  return ep;
}

// Alternating free/held label pattern of the demonstration shape.
inline std::vector<int> two_cycle_labels(int frames) {
  std::vector<int> labels(static_cast<std::size_t>(frames), 0);
  const int b0 = frames / 5, b1 = 2 * frames / 5, b2 = 3 * frames / 5, b3 = 4 * frames / 5;
  for (int t = b0; t < b1; ++t) labels[static_cast<std::size_t>(t)] = 1;
  for (int t = b2; t < b3; ++t) labels[static_cast<std::size_t>(t)] = 1;
  return labels;
}

// Central-difference gradient check of the full training gradient path
// (denoiser backward plus loss gradient) on a tiny model: T=6, C=2, W=4,
// L=2. Returns the worst relative disagreement across every parameter.
inline double gradcheck_max_rel_err(const d2p::LossConfig& loss_cfg,
                                    std::uint64_t seed = 99) {
  using namespace d2p;
  DenoiserConfig cfg;
  cfg.layers = 2;
  cfg.width = 4;
  cfg.classes = 2;
  cfg.feature_dim = 3;
  const int frames = 6;
  const int step = 500;

  const NoiseSchedule sched = NoiseSchedule::cosine(1000);
  DenoiserParams params = DenoiserParams::init(cfg, RngSeed{seed});

  Rng rng(RngSeed{seed + 1});
  Eigen::MatrixXd cond(frames, cfg.feature_dim);
  for (Eigen::Index t = 0; t < cond.rows(); ++t) {
    for (Eigen::Index d = 0; d < cond.cols(); ++d) cond(t, d) = rng.normal();
  }
  const LabelSequence gt = one_hot({0, 0, 1, 1, 0, 1}, cfg.classes);
  Eigen::MatrixXd noise(frames, cfg.classes);
  for (Eigen::Index t = 0; t < noise.rows(); ++t) {
    for (Eigen::Index c = 0; c < noise.cols(); ++c) noise(t, c) = rng.normal();
  }
  const LabelSequence x_s = q_sample(gt, step, noise, sched);
  const Eigen::MatrixXd one_hot_ct = gt.values.transpose();

  auto scalar_loss = [&](const DenoiserParams& p) {
    DenoiserTrace trace;
    denoise_forward(x_s.values, step, cond, p, trace);
    Eigen::MatrixXd unused;
    return segmentation_loss_grad(trace.probs, one_hot_ct, loss_cfg, unused).total;
  };

  DenoiserTrace trace;
  denoise_forward(x_s.values, step, cond, params, trace);
  Eigen::MatrixXd dlogits;
  segmentation_loss_grad(trace.probs, one_hot_ct, loss_cfg, dlogits);
  const DenoiserGradients grads = denoise_backward(params, trace, dlogits);

  auto views = params.tensor_views();
  const auto grad_views = static_cast<const DenoiserGradients&>(grads).tensor_views();
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t v = 0; v < views.size(); ++v) {
    for (std::size_t i = 0; i < views[v].size(); ++i) {
      const double saved = views[v][i];
      views[v][i] = saved + h;
      const double up = scalar_loss(params);
      views[v][i] = saved - h;
      const double down = scalar_loss(params);
      views[v][i] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double analytic = grad_views[v][i];
      const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-4});
      worst = std::max(worst, std::abs(analytic - fd) / denom);
    }
  }
  return worst;
}

}  // namespace test_helpers
