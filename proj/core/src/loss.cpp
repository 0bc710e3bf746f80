#include "d2p/loss.hpp"

#include <cmath>
#include <vector>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

constexpr double kProbFloor = 1e-12;

int argmax_col(const Eigen::MatrixXd& m, Eigen::Index col) {
  Eigen::Index row = 0;
  m.col(col).maxCoeff(&row);
  return static_cast<int>(row);
}

LossParts loss_impl(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& one_hot,
                    const LossConfig& cfg, Eigen::MatrixXd* dlogits) {
  cfg.validate();
  if (probs.rows() != one_hot.rows() || probs.cols() != one_hot.cols()) {
    throw ShapeError("loss shape mismatch");
  }
  const Eigen::Index classes = probs.rows();
  const Eigen::Index frames = probs.cols();
  if (frames < 1 || classes < 2) throw ShapeError("loss needs frames and >= 2 classes");
  for (Eigen::Index t = 0; t < frames; ++t) {
    if (one_hot.col(t).maxCoeff() < 1.0 - 1e-9 || std::abs(one_hot.col(t).sum() - 1.0) > 1e-9) {
      throw DomainError("ground truth must be one-hot");
    }
  }

  if (dlogits != nullptr) *dlogits = Eigen::MatrixXd::Zero(classes, frames);

  LossParts parts;

  // Cross entropy over the ground-truth class per frame.
  double ce = 0.0;
  for (Eigen::Index t = 0; t < frames; ++t) {
    const int gt = argmax_col(one_hot, t);
    ce -= std::log(std::max(probs(gt, t), kProbFloor));
  }
  parts.ce = ce / static_cast<double>(frames);
  if (dlogits != nullptr) {
    *dlogits = (probs - one_hot) / static_cast<double>(frames);
  }

  // Truncated smoothing on log-probability deltas between adjacent frames.
  if (cfg.use_ts && frames > 1) {
    const double tau = cfg.ts_clip;
    const double norm = static_cast<double>((frames - 1) * classes);
    Eigen::MatrixXd logp = probs.cwiseMax(kProbFloor).array().log();
    Eigen::MatrixXd dlogp = Eigen::MatrixXd::Zero(classes, frames);
    double ts = 0.0;
    for (Eigen::Index t = 1; t < frames; ++t) {
      for (Eigen::Index c = 0; c < classes; ++c) {
        const double delta = logp(c, t) - logp(c, t - 1);
        ts += std::min(delta * delta, tau * tau);
        if (std::abs(delta) < tau) {
          const double w = 2.0 * delta / norm;
          dlogp(c, t) += w;
          dlogp(c, t - 1) -= w;
        }
      }
    }
    parts.ts = ts / norm;
    if (dlogits != nullptr) {
      // d(logp)/d(logits) through the softmax: identity minus the simplex row.
      for (Eigen::Index t = 0; t < frames; ++t) {
        const double col_sum = dlogp.col(t).sum();
        dlogits->col(t) += cfg.lambda_ts * (dlogp.col(t) - probs.col(t) * col_sum);
      }
    }
  }

  // Boundary alignment: BCE between the predicted change score and the
  // smoothed ground-truth boundary profile.
  if (cfg.use_ba && frames > 1) {
    const Eigen::VectorXd target = boundary_target(one_hot, cfg.ba_sigma);
    Eigen::MatrixXd dp = Eigen::MatrixXd::Zero(classes, frames);
    double ba = 0.0;
    const double norm = static_cast<double>(frames - 1);
    for (Eigen::Index t = 1; t < frames; ++t) {
      const double overlap = probs.col(t).dot(probs.col(t - 1));
      const double bhat = 1.0 - overlap;
      const double beta = target[t];
      const double pos = std::max(bhat, kProbFloor);
      const double neg = std::max(1.0 - bhat, kProbFloor);
      ba -= beta * std::log(pos) + (1.0 - beta) * std::log(neg);
      if (dlogits != nullptr) {
        double g = 0.0;
        if (bhat >= kProbFloor) g -= beta / pos;
        if (1.0 - bhat >= kProbFloor) g += (1.0 - beta) / neg;
        g /= norm;
        // d(bhat)/dp is minus the neighboring frame's distribution.
        dp.col(t) -= g * probs.col(t - 1);
        dp.col(t - 1) -= g * probs.col(t);
      }
    }
    parts.ba = ba / norm;
    if (dlogits != nullptr) {
      for (Eigen::Index t = 0; t < frames; ++t) {
        const double dot = dp.col(t).dot(probs.col(t));
        dlogits->col(t) +=
            cfg.lambda_ba * probs.col(t).cwiseProduct(dp.col(t) - Eigen::VectorXd::Constant(classes, dot));
      }
    }
  }

  parts.total = parts.ce;
  if (cfg.use_ba) parts.total += cfg.lambda_ba * parts.ba;
  if (cfg.use_ts) parts.total += cfg.lambda_ts * parts.ts;
  return parts;
}

}  // namespace

void LossConfig::validate() const {
  if (!use_ce) throw DomainError("cross entropy term cannot be disabled");
  if (lambda_ba < 0.0 || lambda_ts < 0.0) throw DomainError("loss weights must be nonnegative");
  if (ts_clip <= 0.0) throw DomainError("ts_clip must be positive");
  if (ba_sigma <= 0.0) throw DomainError("ba_sigma must be positive");
}

Eigen::VectorXd boundary_target(const Eigen::MatrixXd& one_hot, double sigma) {
  const Eigen::Index frames = one_hot.cols();
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(frames);
  std::vector<Eigen::Index> boundaries;
  for (Eigen::Index t = 1; t < frames; ++t) {
    if (argmax_col(one_hot, t) != argmax_col(one_hot, t - 1)) boundaries.push_back(t);
  }
  if (boundaries.empty()) return raw;
  for (Eigen::Index t = 0; t < frames; ++t) {
    double v = 0.0;
    for (Eigen::Index b : boundaries) {
      const double d = static_cast<double>(t - b);
      v += std::exp(-d * d / (2.0 * sigma * sigma));
    }
    raw[t] = v;
  }
  raw[0] = 0.0;
  const double peak = raw.tail(frames - 1).maxCoeff();
  if (peak > 0.0) raw /= peak;
  return raw;
}

LossParts segmentation_loss(const LabelSequence& pred, const LabelSequence& ground_truth,
                            const LossConfig& cfg) {
  pred.require_simplex();
  ground_truth.require_simplex();
  const Eigen::MatrixXd probs = pred.values.transpose();
  const Eigen::MatrixXd one_hot = ground_truth.values.transpose();
  return loss_impl(probs, one_hot, cfg, nullptr);
}

LossParts segmentation_loss_grad(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& one_hot,
                                 const LossConfig& cfg, Eigen::MatrixXd& dlogits) {
  return loss_impl(probs, one_hot, cfg, &dlogits);
}

}  // namespace d2p
