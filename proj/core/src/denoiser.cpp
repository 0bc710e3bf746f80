#include "d2p/denoiser.hpp"

#include <cmath>
#include <cstdint>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

Eigen::VectorXd sinusoid_embedding(int step, int width) {
  const int half = width / 2;
  Eigen::VectorXd out(width);
  for (int j = 0; j < half; ++j) {
    const double freq = std::exp(-std::log(10000.0) * static_cast<double>(j) / half);
    const double angle = static_cast<double>(step) * freq;
    out[j] = std::sin(angle);
    out[half + j] = std::cos(angle);
  }
  return out;
}

void fill_normal(Eigen::MatrixXd& m, Rng& rng, double stddev) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = stddev * rng.normal();
    }
  }
}

// u[:, t] += tap * h[:, t + offset] for every valid t, zero padding outside.
void conv_accumulate(Eigen::MatrixXd& u, const Eigen::MatrixXd& tap, const Eigen::MatrixXd& h,
                     int offset) {
  const Eigen::Index frames = h.cols();
  if (offset == 0) {
    u.noalias() += tap * h;
    return;
  }
  const Eigen::Index shift = std::abs(offset);
  if (shift >= frames) return;
  const Eigen::Index len = frames - shift;
  if (offset < 0) {
    u.middleCols(shift, len).noalias() += tap * h.middleCols(0, len);
  } else {
    u.middleCols(0, len).noalias() += tap * h.middleCols(shift, len);
  }
}

// dtap = sum_t du[:, t] * h[:, t + offset]^T over valid t.
Eigen::MatrixXd conv_tap_gradient(const Eigen::MatrixXd& du, const Eigen::MatrixXd& h,
                                  int offset) {
  const Eigen::Index frames = h.cols();
  if (offset == 0) return du * h.transpose();
  const Eigen::Index shift = std::abs(offset);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(du.rows(), h.rows());
  if (shift >= frames) return grad;
  const Eigen::Index len = frames - shift;
  if (offset < 0) {
    grad.noalias() = du.middleCols(shift, len) * h.middleCols(0, len).transpose();
  } else {
    grad.noalias() = du.middleCols(0, len) * h.middleCols(shift, len).transpose();
  }
  return grad;
}

}  // namespace

void DenoiserConfig::validate() const {
  if (layers < 1) throw ShapeError("denoiser needs at least one layer");
  if (width < 2 || width % 2 != 0) throw ShapeError("denoiser width must be even and >= 2");
  if (classes < 2) throw ShapeError("denoiser needs at least two classes");
  if (feature_dim < 1) throw ShapeError("denoiser feature_dim must be positive");
}

DenoiserParams DenoiserParams::init(const DenoiserConfig& cfg, RngSeed seed) {
  cfg.validate();
  Rng rng(seed);
  DenoiserParams p;
  p.cfg = cfg;
  const int w = cfg.width;
  const int in_dim = cfg.classes + cfg.feature_dim;

  p.input_weight.resize(w, in_dim);
  fill_normal(p.input_weight, rng, 1.0 / std::sqrt(static_cast<double>(in_dim)));
  p.input_bias = Eigen::VectorXd::Zero(w);

  const double tap_scale = 1.0 / std::sqrt(3.0 * w);
  p.layers.resize(static_cast<std::size_t>(cfg.layers));
  for (auto& layer : p.layers) {
    for (auto& tap : layer.taps) {
      tap.resize(w, w);
      fill_normal(tap, rng, tap_scale);
    }
    layer.bias = Eigen::VectorXd::Zero(w);
  }

  p.step_weight.resize(w, w);
  fill_normal(p.step_weight, rng, 1.0 / std::sqrt(static_cast<double>(w)));
  p.step_bias = Eigen::VectorXd::Zero(w);

  p.output_weight.resize(cfg.classes, w);
  fill_normal(p.output_weight, rng, 1.0 / std::sqrt(static_cast<double>(w)));
  p.output_bias = Eigen::VectorXd::Zero(cfg.classes);
  return p;
}

DenoiserParams DenoiserParams::zeros_like(const DenoiserConfig& cfg) {
  cfg.validate();
  DenoiserParams p;
  p.cfg = cfg;
  const int w = cfg.width;
  p.input_weight = Eigen::MatrixXd::Zero(w, cfg.classes + cfg.feature_dim);
  p.input_bias = Eigen::VectorXd::Zero(w);
  p.layers.resize(static_cast<std::size_t>(cfg.layers));
  for (auto& layer : p.layers) {
    for (auto& tap : layer.taps) tap = Eigen::MatrixXd::Zero(w, w);
    layer.bias = Eigen::VectorXd::Zero(w);
  }
  p.step_weight = Eigen::MatrixXd::Zero(w, w);
  p.step_bias = Eigen::VectorXd::Zero(w);
  p.output_weight = Eigen::MatrixXd::Zero(cfg.classes, w);
  p.output_bias = Eigen::VectorXd::Zero(cfg.classes);
  return p;
}

std::vector<std::span<double>> DenoiserParams::tensor_views() {
  std::vector<std::span<double>> views;
  auto add = [&views](Eigen::MatrixXd& m) {
    views.emplace_back(m.data(), static_cast<std::size_t>(m.size()));
  };
  auto addv = [&views](Eigen::VectorXd& v) {
    views.emplace_back(v.data(), static_cast<std::size_t>(v.size()));
  };
  add(input_weight);
  addv(input_bias);
  for (auto& layer : layers) {
    for (auto& tap : layer.taps) add(tap);
    addv(layer.bias);
  }
  add(step_weight);
  addv(step_bias);
  add(output_weight);
  addv(output_bias);
  return views;
}

std::vector<std::span<const double>> DenoiserParams::tensor_views() const {
  std::vector<std::span<const double>> views;
  auto add = [&views](const Eigen::MatrixXd& m) {
    views.emplace_back(m.data(), static_cast<std::size_t>(m.size()));
  };
  auto addv = [&views](const Eigen::VectorXd& v) {
    views.emplace_back(v.data(), static_cast<std::size_t>(v.size()));
  };
  add(input_weight);
  addv(input_bias);
  for (const auto& layer : layers) {
    for (const auto& tap : layer.taps) add(tap);
    addv(layer.bias);
  }
  add(step_weight);
  addv(step_bias);
  add(output_weight);
  addv(output_bias);
  return views;
}

std::size_t DenoiserParams::parameter_count() const {
  std::size_t total = 0;
  for (const auto& view : tensor_views()) total += view.size();
  return total;
}

bool DenoiserParams::all_finite() const {
  for (const auto& view : tensor_views()) {
    for (double v : view) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void DenoiserParams::validate() const {
  cfg.validate();
  const int w = cfg.width;
  const int in_dim = cfg.classes + cfg.feature_dim;
  if (input_weight.rows() != w || input_weight.cols() != in_dim || input_bias.size() != w) {
    throw ShapeError("denoiser input projection shape mismatch");
  }
  if (static_cast<int>(layers.size()) != cfg.layers) {
    throw ShapeError("denoiser layer count mismatch");
  }
  for (const auto& layer : layers) {
    for (const auto& tap : layer.taps) {
      if (tap.rows() != w || tap.cols() != w) throw ShapeError("denoiser tap shape mismatch");
    }
    if (layer.bias.size() != w) throw ShapeError("denoiser layer bias shape mismatch");
  }
  if (step_weight.rows() != w || step_weight.cols() != w || step_bias.size() != w) {
    throw ShapeError("denoiser step projection shape mismatch");
  }
  if (output_weight.rows() != cfg.classes || output_weight.cols() != w ||
      output_bias.size() != cfg.classes) {
    throw ShapeError("denoiser output projection shape mismatch");
  }
}

void denoise_forward(const Eigen::MatrixXd& x_s_values, int step, const Eigen::MatrixXd& cond,
                     const DenoiserParams& params, DenoiserTrace& trace) {
  const DenoiserConfig& cfg = params.cfg;
  if (x_s_values.cols() != cfg.classes) throw ShapeError("diffusion state class count mismatch");
  if (cond.cols() != cfg.feature_dim) throw ShapeError("conditioning feature dim mismatch");
  if (x_s_values.rows() != cond.rows()) throw ShapeError("frame count mismatch");
  if (x_s_values.rows() < 1) throw ShapeError("empty sequence");

  const Eigen::Index frames = x_s_values.rows();
  const int w = cfg.width;

  trace.input.resize(cfg.classes + cfg.feature_dim, frames);
  trace.input.topRows(cfg.classes) = x_s_values.transpose();
  trace.input.bottomRows(cfg.feature_dim) = cond.transpose();

  trace.sinusoid = sinusoid_embedding(step, w);
  trace.step_embed = params.step_weight * trace.sinusoid + params.step_bias;

  trace.state.assign(static_cast<std::size_t>(cfg.layers) + 1, Eigen::MatrixXd());
  trace.pre.assign(static_cast<std::size_t>(cfg.layers), Eigen::MatrixXd());
  trace.state[0] = params.input_weight * trace.input;
  trace.state[0].colwise() += params.input_bias;

  for (int l = 0; l < cfg.layers; ++l) {
    const int dil = cfg.dilation(l);
    const auto& layer = params.layers[static_cast<std::size_t>(l)];
    const Eigen::MatrixXd& h = trace.state[static_cast<std::size_t>(l)];
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(w, frames);
    conv_accumulate(u, layer.taps[0], h, -dil);
    conv_accumulate(u, layer.taps[1], h, 0);
    conv_accumulate(u, layer.taps[2], h, dil);
    u.colwise() += layer.bias + trace.step_embed;
    trace.pre[static_cast<std::size_t>(l)] = u;
    trace.state[static_cast<std::size_t>(l) + 1] = h + u.cwiseMax(0.0);
  }

  trace.logits.noalias() = params.output_weight * trace.state.back();
  trace.logits.colwise() += params.output_bias;

  trace.probs.resize(cfg.classes, frames);
  for (Eigen::Index t = 0; t < frames; ++t) {
    const Eigen::VectorXd col = trace.logits.col(t);
    const double peak = col.maxCoeff();
    Eigen::VectorXd e = (col.array() - peak).exp();
    trace.probs.col(t) = e / e.sum();
  }
}

LabelSequence denoise(const LabelSequence& x_s, int step, const Eigen::MatrixXd& cond,
                      const DenoiserParams& params) {
  DenoiserTrace trace;
  denoise_forward(x_s.values, step, cond, params, trace);
  LabelSequence out;
  out.values = trace.probs.transpose();
  out.kind = SequenceKind::kSimplex;
  return out;
}

DenoiserGradients denoise_backward(const DenoiserParams& params, const DenoiserTrace& trace,
                                   const Eigen::MatrixXd& dlogits) {
  const DenoiserConfig& cfg = params.cfg;
  if (dlogits.rows() != trace.logits.rows() || dlogits.cols() != trace.logits.cols()) {
    throw ShapeError("logit gradient shape mismatch");
  }

  DenoiserGradients grads = DenoiserParams::zeros_like(cfg);

  grads.output_weight.noalias() = dlogits * trace.state.back().transpose();
  grads.output_bias = dlogits.rowwise().sum();

  Eigen::MatrixXd dstate = params.output_weight.transpose() * dlogits;
  Eigen::VectorXd dstep_embed = Eigen::VectorXd::Zero(cfg.width);

  for (int l = cfg.layers - 1; l >= 0; --l) {
    const int dil = cfg.dilation(l);
    const auto& layer = params.layers[static_cast<std::size_t>(l)];
    auto& layer_grads = grads.layers[static_cast<std::size_t>(l)];
    const Eigen::MatrixXd& h = trace.state[static_cast<std::size_t>(l)];
    const Eigen::MatrixXd& u = trace.pre[static_cast<std::size_t>(l)];

    const Eigen::MatrixXd relu_mask = (u.array() > 0.0).cast<double>().matrix();
    const Eigen::MatrixXd du = dstate.cwiseProduct(relu_mask);

    layer_grads.taps[0] = conv_tap_gradient(du, h, -dil);
    layer_grads.taps[1] = conv_tap_gradient(du, h, 0);
    layer_grads.taps[2] = conv_tap_gradient(du, h, dil);
    layer_grads.bias = du.rowwise().sum();
    dstep_embed += du.rowwise().sum();

    // Residual path plus the transposed convolution.
    conv_accumulate(dstate, layer.taps[0].transpose().eval(), du, dil);
    conv_accumulate(dstate, layer.taps[1].transpose().eval(), du, 0);
    conv_accumulate(dstate, layer.taps[2].transpose().eval(), du, -dil);
  }

  grads.step_weight.noalias() = dstep_embed * trace.sinusoid.transpose();
  grads.step_bias = dstep_embed;

  grads.input_weight.noalias() = dstate * trace.input.transpose();
  grads.input_bias = dstate.rowwise().sum();
  return grads;
}

}  // namespace d2p
