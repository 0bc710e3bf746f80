#pragma once

#include <filesystem>

#include "d2p/denoiser.hpp"

namespace d2p {

struct Checkpoint {
  DenoiserParams params;
  int schedule_steps = 0;
};

// Binary layout: 7 magic bytes "D2PSEG1", five little-endian uint32 header
// fields (classes, feature_dim, layers, width, schedule_steps), then every
// parameter tensor in declaration order as little-endian float64
// (column-major within matrices). Throws IoError on file trouble and
// ParseError on a malformed payload.
void save_checkpoint(const std::filesystem::path& path, const DenoiserParams& params,
                     int schedule_steps);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace d2p
