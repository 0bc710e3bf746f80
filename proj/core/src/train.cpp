#include "d2p/train.hpp"

#include <cmath>
#include <cstddef>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

struct PreparedEpisode {
  Eigen::MatrixXd cond;        // T x D
  LabelSequence one_hot_gt;    // T x C simplex rows
  Eigen::MatrixXd one_hot_ct;  // C x T
};

}  // namespace

void TrainHyper::validate() const {
  if (learning_rate <= 0.0) throw DomainError("learning rate must be positive");
  if (momentum < 0.0 || momentum >= 1.0) throw DomainError("momentum must be in [0, 1)");
  if (epochs < 0) throw DomainError("epochs must be >= 0");
}

TrainResult train_segmenter(const std::vector<Episode>& dataset, const DenoiserConfig& arch,
                            const NoiseSchedule& schedule, const LossConfig& loss_cfg,
                            const TrainHyper& hyper) {
  hyper.validate();
  arch.validate();
  schedule.validate();
  loss_cfg.validate();
  if (dataset.empty()) throw EmptyDataset("cannot train on an empty dataset");

  std::vector<PreparedEpisode> prepared;
  prepared.reserve(dataset.size());
  for (const auto& episode : dataset) {
    if (!episode.has_gt_labels()) {
      throw SchemaError("training episode " + episode.id + " lacks ground-truth labels");
    }
    if (episode.feature_dim != arch.feature_dim) {
      throw ShapeError("episode feature_dim does not match the denoiser");
    }
    PreparedEpisode prep;
    prep.cond = feature_matrix(episode);
    std::vector<int> labels;
    labels.reserve(episode.frames.size());
    for (const auto& label : episode.gt_timeline().labels) labels.push_back(label.class_index);
    prep.one_hot_gt = one_hot(labels, arch.classes);
    prep.one_hot_ct = prep.one_hot_gt.values.transpose();
    prepared.push_back(std::move(prep));
  }

  TrainResult result;
  result.params = DenoiserParams::init(arch, derive_seed(hyper.seed, 0));
  DenoiserParams velocity = DenoiserParams::zeros_like(arch);
  Rng rng(derive_seed(hyper.seed, 1));

  const int total_steps = hyper.epochs * static_cast<int>(dataset.size());
  result.log.reserve(static_cast<std::size_t>(total_steps));

  DenoiserTrace trace;
  for (int step = 0; step < total_steps; ++step) {
    const auto idx = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(dataset.size()) - 1));
    const PreparedEpisode& ep = prepared[idx];
    const int s = static_cast<int>(rng.uniform_int(1, schedule.total_steps));

    Eigen::MatrixXd noise(ep.one_hot_gt.values.rows(), ep.one_hot_gt.values.cols());
    for (Eigen::Index t = 0; t < noise.rows(); ++t) {
      for (Eigen::Index c = 0; c < noise.cols(); ++c) noise(t, c) = rng.normal();
    }
    const LabelSequence x_s = q_sample(ep.one_hot_gt, s, noise, schedule);

    denoise_forward(x_s.values, s, ep.cond, result.params, trace);

    Eigen::MatrixXd dlogits;
    const LossParts parts = segmentation_loss_grad(trace.probs, ep.one_hot_ct, loss_cfg, dlogits);
    if (!std::isfinite(parts.total)) throw DivergedError("training loss is not finite", step);

    const DenoiserGradients grads = denoise_backward(result.params, trace, dlogits);

    auto param_views = result.params.tensor_views();
    auto vel_views = velocity.tensor_views();
    auto grad_views = grads.tensor_views();
    for (std::size_t v = 0; v < param_views.size(); ++v) {
      for (std::size_t i = 0; i < param_views[v].size(); ++i) {
        vel_views[v][i] =
            hyper.momentum * vel_views[v][i] - hyper.learning_rate * grad_views[v][i];
        param_views[v][i] += vel_views[v][i];
      }
    }

    result.log.push_back({step, parts.ce, parts.ba, parts.ts, parts.total});
  }
  return result;
}

}  // namespace d2p
