#pragma once

#include <vector>

#include <Eigen/Dense>

namespace d2p {

enum class SequenceKind {
  kContinuous,  // diffusion state, values roam over the reals
  kSimplex,     // rows are probability vectors
};

// T x C matrix of per-frame class values plus how to read it.
struct LabelSequence {
  Eigen::MatrixXd values;
  SequenceKind kind = SequenceKind::kContinuous;

  int frames() const { return static_cast<int>(values.rows()); }
  int classes() const { return static_cast<int>(values.cols()); }

  // Throws DomainError unless kind is kSimplex with nonnegative rows that
  // sum to 1 within 1e-6.
  void require_simplex() const;
};

// One-hot rows from a per-frame label vector.
LabelSequence one_hot(const std::vector<int>& labels, int classes);

// Cosine alpha-bar schedule. alpha_bar[0] = 1, strictly decreasing,
// alpha_bar[S] below 1e-3. `scale` is the magnitude one-hot labels are
// mapped to before noising (rows live in {-scale, +scale}).
struct NoiseSchedule {
  int total_steps = 1000;
  std::vector<double> alpha_bar;  // size total_steps + 1
  double scale = 1.0;

  static NoiseSchedule cosine(int total_steps = 1000, double scale = 1.0);

  void validate() const;

  // Maps one-hot rows to the continuous +-scale encoding.
  LabelSequence encode(const LabelSequence& one_hot_gt) const;

  // Inverse of encode applied to simplex rows: scale * (2p - 1).
  Eigen::MatrixXd decode_to_state(const Eigen::MatrixXd& probs) const;
};

// Forward noising x_s = sqrt(alpha_bar_s) * x0 + sqrt(1 - alpha_bar_s) * noise.
// `gt` must be one-hot; it is mapped to +-scale internally. `noise` carries
// one standard normal draw per entry. Throws StepRange when s is outside
// [0, S] and ShapeError when the noise shape disagrees.
LabelSequence q_sample(const LabelSequence& gt, int step, const Eigen::MatrixXd& noise,
                       const NoiseSchedule& sched);

}  // namespace d2p
