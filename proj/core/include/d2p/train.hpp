#pragma once

#include <vector>

#include "d2p/denoiser.hpp"
#include "d2p/episode.hpp"
#include "d2p/loss.hpp"
#include "d2p/rng.hpp"
#include "d2p/schedule.hpp"

namespace d2p {

struct TrainHyper {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int epochs = 1;  // 0 trains nothing and returns the seeded init
  RngSeed seed;
  void validate() const;
};

struct TrainLogRow {
  int step = 0;
  double ce = 0.0;
  double ba = 0.0;
  double ts = 0.0;
  double total = 0.0;
};

struct TrainResult {
  DenoiserParams params;
  std::vector<TrainLogRow> log;
};

// Trains the denoiser with plain SGD plus momentum. Each step samples one
// episode and one diffusion step uniformly, noises the ground-truth encoding
// and regresses the denoiser output back onto it under the configured loss.
// Throws SchemaError when an episode lacks ground-truth labels, EmptyDataset
// on an empty dataset and DivergedError when the loss stops being finite.
TrainResult train_segmenter(const std::vector<Episode>& dataset, const DenoiserConfig& arch,
                            const NoiseSchedule& schedule, const LossConfig& loss_cfg,
                            const TrainHyper& hyper);

}  // namespace d2p
