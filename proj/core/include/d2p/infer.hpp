#pragma once

#include <vector>

#include <Eigen/Dense>

#include "d2p/denoiser.hpp"
#include "d2p/rng.hpp"
#include "d2p/schedule.hpp"
#include "d2p/types.hpp"

namespace d2p {

// Descending inference schedule: `count` steps starting at total_steps,
// evenly spaced, all within [1, total_steps]. count = 1 yields the single
// "direct" step at total_steps.
std::vector<int> evenly_spaced_steps(int total_steps, int count);

struct InferResult {
  LabelTimeline timeline;
  Eigen::MatrixXd probs;  // frames x classes, final ground-truth estimate
};

// Deterministic reverse process. The only randomness is the initial state,
// drawn from `seed`; every later update replaces the state with
//   sqrt(ab[s']) * x0_hat + sqrt(1 - ab[s']) * (x - sqrt(ab[s]) * x0_hat)
//                                              / sqrt(1 - ab[s])
// with a terminal jump to the ground-truth estimate itself. The timeline is
// the per-frame argmax of the last estimate (ties pick the lower class).
// Throws StepOrder when `steps` is empty or not strictly descending and
// StepRange when a step leaves [1, total_steps].
InferResult infer_timeline(const Eigen::MatrixXd& cond, const DenoiserParams& params,
                           const NoiseSchedule& schedule, const std::vector<int>& steps,
                           RngSeed seed);

// Fraction of frames whose labels agree. Throws ShapeError on length
// mismatch or empty timelines.
double frame_accuracy(const LabelTimeline& predicted, const LabelTimeline& ground_truth);

}  // namespace d2p
