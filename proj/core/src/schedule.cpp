#include "d2p/schedule.hpp"

#include <cmath>
#include <numbers>

#include "d2p/errors.hpp"

namespace d2p {

void LabelSequence::require_simplex() const {
  if (kind != SequenceKind::kSimplex) throw DomainError("sequence is not flagged simplex");
  for (int t = 0; t < frames(); ++t) {
    double row_sum = 0.0;
    for (int c = 0; c < classes(); ++c) {
      const double v = values(t, c);
      if (!(v >= 0.0)) throw DomainError("simplex row has a negative entry");
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > 1e-6) throw DomainError("simplex row does not sum to 1");
  }
}

LabelSequence one_hot(const std::vector<int>& labels, int classes) {
  LabelSequence seq;
  seq.kind = SequenceKind::kSimplex;
  seq.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), classes);
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const int c = labels[t];
    if (c < 0 || c >= classes) throw DomainError("label outside [0, C)");
    seq.values(static_cast<Eigen::Index>(t), c) = 1.0;
  }
  return seq;
}

NoiseSchedule NoiseSchedule::cosine(int total_steps, double scale) {
  if (total_steps < 1) throw DomainError("schedule needs at least one step");
  NoiseSchedule sched;
  sched.total_steps = total_steps;
  sched.scale = scale;
  sched.alpha_bar.resize(static_cast<std::size_t>(total_steps) + 1);

  const double offset = 0.008;
  auto f = [&](double s) {
    const double arg = (s / total_steps + offset) / (1.0 + offset) * std::numbers::pi / 2.0;
    const double c = std::cos(arg);
    return c * c;
  };
  const double f0 = f(0.0);
  for (int s = 0; s <= total_steps; ++s) {
    sched.alpha_bar[static_cast<std::size_t>(s)] = f(static_cast<double>(s)) / f0;
  }
  sched.alpha_bar[0] = 1.0;
  sched.validate();
  return sched;
}

void NoiseSchedule::validate() const {
  if (static_cast<int>(alpha_bar.size()) != total_steps + 1) {
    throw SchemaError("alpha_bar must carry total_steps + 1 entries");
  }
  if (alpha_bar.front() != 1.0) throw SchemaError("alpha_bar[0] must equal 1");
  for (std::size_t i = 1; i < alpha_bar.size(); ++i) {
    if (!(alpha_bar[i] > 0.0) || !(alpha_bar[i] < alpha_bar[i - 1])) {
      throw SchemaError("alpha_bar must be strictly decreasing within (0, 1]");
    }
  }
  if (!(alpha_bar.back() < 1e-3)) throw SchemaError("alpha_bar[S] must fall below 1e-3");
}

LabelSequence NoiseSchedule::encode(const LabelSequence& one_hot_gt) const {
  one_hot_gt.require_simplex();
  LabelSequence out;
  out.kind = SequenceKind::kContinuous;
  out.values = scale * (2.0 * one_hot_gt.values.array() - 1.0);
  return out;
}

Eigen::MatrixXd NoiseSchedule::decode_to_state(const Eigen::MatrixXd& probs) const {
  return scale * (2.0 * probs.array() - 1.0);
}

LabelSequence q_sample(const LabelSequence& gt, int step, const Eigen::MatrixXd& noise,
                       const NoiseSchedule& sched) {
  if (step < 0 || step > sched.total_steps) {
    throw StepRange("q_sample: step " + std::to_string(step) + " outside [0, " +
                    std::to_string(sched.total_steps) + "]");
  }
  if (noise.rows() != gt.values.rows() || noise.cols() != gt.values.cols()) {
    throw ShapeError("q_sample: noise shape does not match the label sequence");
  }
  const LabelSequence x0 = sched.encode(gt);
  const double ab = sched.alpha_bar[static_cast<std::size_t>(step)];
  LabelSequence out;
  out.kind = SequenceKind::kContinuous;
  out.values = std::sqrt(ab) * x0.values + std::sqrt(1.0 - ab) * noise;
  return out;
}

}  // namespace d2p
