#pragma once

#include <Eigen/Dense>

#include "d2p/schedule.hpp"

namespace d2p {

// Term toggles and weights. Cross entropy is always on; the boundary
// alignment and truncated smoothing terms are the ablation axes.
struct LossConfig {
  bool use_ce = true;
  bool use_ba = false;
  bool use_ts = false;
  double lambda_ba = 0.1;
  double lambda_ts = 0.15;
  double ts_clip = 4.0;      // tau, clips squared log-prob deltas
  double ba_sigma = 2.0;     // frames, Gaussian smoothing of the boundary target
  void validate() const;
};

struct LossParts {
  double ce = 0.0;
  double ba = 0.0;
  double ts = 0.0;
  double total = 0.0;
};

// Evaluates the segmentation loss between predicted per-frame simplex rows
// and a one-hot ground truth sequence. Disabled terms report 0 and do not
// enter the total.
LossParts segmentation_loss(const LabelSequence& pred, const LabelSequence& ground_truth,
                            const LossConfig& cfg);

// Same evaluation, plus d(total)/d(logits) for a prediction produced by a
// per-frame softmax. probs and gradient are laid out classes-by-frames to
// match the denoiser trace.
LossParts segmentation_loss_grad(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& one_hot,
                                 const LossConfig& cfg, Eigen::MatrixXd& dlogits);

// Gaussian-smoothed boundary target used by the alignment term; exposed for
// tests. Frame 0 is always 0; interior frames peak at label changes.
Eigen::VectorXd boundary_target(const Eigen::MatrixXd& one_hot, double sigma);

}  // namespace d2p
