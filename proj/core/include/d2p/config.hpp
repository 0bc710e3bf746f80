#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "d2p/denoiser.hpp"
#include "d2p/fusion.hpp"
#include "d2p/geometry.hpp"
#include "d2p/kinematics.hpp"
#include "d2p/loss.hpp"
#include "d2p/rng.hpp"
#include "d2p/sim.hpp"
#include "d2p/train.hpp"

namespace d2p {

// Everything the CLI reads from one TOML-style config file. Defaults
// reproduce the desk-scale protocol; any field may be overridden. See
// docs/config.md for the schema.
struct PipelineConfig {
  struct CameraSettings {
    double x = 0.0;
    double y = 0.0;
    double height_above = 0.45;
    double pitch_deg = 60.0;
    double fx = 500.0;
    double fy = 500.0;
    double cx = 320.0;
    double cy = 320.0;
  };

  std::string data_dir = "data";
  std::string out_dir = "out";

  CameraSettings camera_settings;
  TablePlane table;

  std::string chain_preset = "nicol-like-8dof";
  KinematicChain custom_chain;  // used when chain_preset == "custom"

  VoteConfig vote;
  NoiseModel noise;
  LossConfig loss;
  std::vector<SceneObject> catalog = default_catalog();

  int schedule_steps = 1000;
  double schedule_scale = 1.0;

  DenoiserConfig denoiser;
  TrainHyper train{1e-3, 0.9, 20, RngSeed{}};
  double train_fraction = 0.8;

  IkSettings ik;
  double cart_step = 0.02;
  double hover = 0.10;

  double d_min = 0.05;
  double bounds_tol = 0.12;

  double grasp_radius = 0.03;
  double place_radius = 0.05;

  int frame_count = 440;
  double fps = 22.0;
  int per_object = 24;
  bool clean_features = false;

  std::uint64_t master_seed = 1;

  CameraModel camera() const;
  KinematicChain chain() const;
  NoiseSchedule schedule() const;
  RngSeed seed() const { return RngSeed{master_seed}; }
};

// Loads and validates a config file. Unknown sections or keys, malformed
// syntax and invalid values all raise ConfigError naming the offending line.
PipelineConfig load_config(const std::filesystem::path& path);

// Parses config text directly (the file loader plus tests go through this).
PipelineConfig parse_config(const std::string& text, const std::string& origin = "<config>");

// The built-in defaults, equivalent to loading an empty file.
PipelineConfig default_config();

// Serializes a config back to TOML text; parse_config(config_to_toml(c))
// reproduces c.
std::string config_to_toml(const PipelineConfig& config);

}  // namespace d2p
