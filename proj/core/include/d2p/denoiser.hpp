#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "d2p/rng.hpp"
#include "d2p/schedule.hpp"

namespace d2p {

// Architecture knobs. The desk default is 8 dilated temporal convolution
// layers of width 32; "paper-shape" presets with more layers load from the
// pipeline config.
struct DenoiserConfig {
  int layers = 8;
  int width = 32;
  int classes = 2;
  int feature_dim = 64;

  int dilation(int layer) const { return 1 << (layer % 8); }
  void validate() const;

  friend bool operator==(const DenoiserConfig&, const DenoiserConfig&) = default;
};

// All trainable tensors. The same struct doubles as the gradient container.
//
// Forward pass, channels-by-time layout (W x T):
//   h0      = input_weight * [x_s; cond]^T + input_bias
//   e       = step_weight * sinusoid(step) + step_bias
//   u_l     = dilated_conv_l(h_{l-1}) + bias_l + e      (kernel size 3)
//   h_l     = h_{l-1} + relu(u_l)
//   logits  = output_weight * h_L + output_bias
// followed by a per-frame softmax.
struct DenoiserParams {
  struct Layer {
    std::array<Eigen::MatrixXd, 3> taps;  // W x W each; taps[0] left, [1] center, [2] right
    Eigen::VectorXd bias;                 // W
  };

  DenoiserConfig cfg;
  Eigen::MatrixXd input_weight;   // W x (C + D)
  Eigen::VectorXd input_bias;     // W
  std::vector<Layer> layers;      // cfg.layers entries
  Eigen::MatrixXd step_weight;    // W x W
  Eigen::VectorXd step_bias;      // W
  Eigen::MatrixXd output_weight;  // C x W
  Eigen::VectorXd output_bias;    // C

  static DenoiserParams init(const DenoiserConfig& cfg, RngSeed seed);
  static DenoiserParams zeros_like(const DenoiserConfig& cfg);

  // Mutable views over every tensor in declaration order (the checkpoint
  // layout; matrices are column-major).
  std::vector<std::span<double>> tensor_views();
  std::vector<std::span<const double>> tensor_views() const;

  std::size_t parameter_count() const;
  bool all_finite() const;

  // Throws ShapeError when tensor shapes disagree with cfg.
  void validate() const;
};

using DenoiserGradients = DenoiserParams;

// Saved intermediates of one forward pass, enough to run the backward pass.
struct DenoiserTrace {
  Eigen::MatrixXd input;            // (C+D) x T
  Eigen::VectorXd sinusoid;         // W
  Eigen::VectorXd step_embed;       // W, after projection
  std::vector<Eigen::MatrixXd> pre;     // per layer, W x T (before relu)
  std::vector<Eigen::MatrixXd> state;   // layers+1 entries, W x T
  Eigen::MatrixXd logits;           // C x T
  Eigen::MatrixXd probs;            // C x T
};

// Deterministic denoiser forward. x_s is the continuous diffusion state
// (T x C), cond the per-frame conditioning features (T x D). Returns the
// predicted ground truth as per-frame simplex rows. Throws ShapeError on
// any shape mismatch.
LabelSequence denoise(const LabelSequence& x_s, int step, const Eigen::MatrixXd& cond,
                      const DenoiserParams& params);

// Same forward but keeps the trace for training and gradient checks.
void denoise_forward(const Eigen::MatrixXd& x_s_values, int step, const Eigen::MatrixXd& cond,
                     const DenoiserParams& params, DenoiserTrace& trace);

// Backpropagates d(loss)/d(logits) (C x T) through the traced forward pass.
DenoiserGradients denoise_backward(const DenoiserParams& params, const DenoiserTrace& trace,
                                   const Eigen::MatrixXd& dlogits);

}  // namespace d2p
