#include "d2p/infer.hpp"

#include <cmath>
#include <string>

#include "d2p/errors.hpp"

namespace d2p {

std::vector<int> evenly_spaced_steps(int total_steps, int count) {
  if (total_steps < 1) throw StepRange("total_steps must be >= 1");
  if (count < 1 || count > total_steps) {
    throw StepRange("step count " + std::to_string(count) + " outside [1, " +
                    std::to_string(total_steps) + "]");
  }
  std::vector<int> steps(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    steps[static_cast<std::size_t>(i)] = static_cast<int>(
        std::llround(static_cast<double>(total_steps) * (count - i) / count));
  }
  return steps;
}

InferResult infer_timeline(const Eigen::MatrixXd& cond, const DenoiserParams& params,
                           const NoiseSchedule& schedule, const std::vector<int>& steps,
                           RngSeed seed) {
  schedule.validate();
  if (steps.empty()) throw StepOrder("inference needs at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] < 1 || steps[i] > schedule.total_steps) {
      throw StepRange("inference step " + std::to_string(steps[i]) + " outside [1, " +
                      std::to_string(schedule.total_steps) + "]");
    }
    if (i > 0 && steps[i] >= steps[i - 1]) {
      throw StepOrder("inference steps must be strictly descending");
    }
  }

  const Eigen::Index frames = cond.rows();
  const int classes = params.cfg.classes;
  Rng rng(seed);
  Eigen::MatrixXd x(frames, classes);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (int c = 0; c < classes; ++c) x(t, c) = rng.normal();
  }

  Eigen::MatrixXd probs;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const int s = steps[i];
    const int s_next = (i + 1 < steps.size()) ? steps[i + 1] : 0;
    LabelSequence state{x, SequenceKind::kContinuous};
    probs = denoise(state, s, cond, params).values;
    const Eigen::MatrixXd x0_hat = schedule.decode_to_state(probs);
    if (s_next == 0) {
      x = x0_hat;
      break;
    }
    const double ab_s = schedule.alpha_bar[static_cast<std::size_t>(s)];
    const double ab_next = schedule.alpha_bar[static_cast<std::size_t>(s_next)];
    const Eigen::MatrixXd direction = (x - std::sqrt(ab_s) * x0_hat) / std::sqrt(1.0 - ab_s);
    x = std::sqrt(ab_next) * x0_hat + std::sqrt(1.0 - ab_next) * direction;
  }

  InferResult result;
  result.probs = probs;
  result.timeline.labels.reserve(static_cast<std::size_t>(frames));
  for (Eigen::Index t = 0; t < frames; ++t) {
    Eigen::Index best = 0;
    probs.row(t).maxCoeff(&best);
    result.timeline.labels.push_back(ActionLabel{static_cast<int>(best)});
  }
  return result;
}

double frame_accuracy(const LabelTimeline& predicted, const LabelTimeline& ground_truth) {
  if (predicted.size() != ground_truth.size() || predicted.size() == 0) {
    throw ShapeError("timelines must share a nonzero length");
  }
  int hits = 0;
  for (int t = 0; t < predicted.size(); ++t) {
    if (predicted.at(t) == ground_truth.at(t)) ++hits;
  }
  return static_cast<double>(hits) / predicted.size();
}

}  // namespace d2p
