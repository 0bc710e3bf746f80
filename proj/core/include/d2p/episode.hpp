#pragma once

#include <optional>
#include <string>
#include <vector>

#include "d2p/geometry.hpp"
#include "d2p/types.hpp"

namespace d2p {

// One row of the episode object manifest. Heights/footprints are simulator
// configuration, not episode data; only identity and graspability travel
// with the recording.
struct ObjectEntry {
  std::string id;
  std::string class_name;
  bool graspable = true;

  friend bool operator==(const ObjectEntry&, const ObjectEntry&) = default;
};

struct FrameRecord {
  int index = 0;
  double time_s = 0.0;
  std::vector<double> features;
  std::vector<Detection> detections;
  std::optional<ActionLabel> gt_label;
  std::optional<Pixel> gt_hand;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

// One demonstration: per-frame features, detections and ground truth plus
// the camera/table metadata needed to interpret them.
struct Episode {
  std::string id;
  double fps = 22.0;
  int frame_count = 0;
  int feature_dim = 0;
  CameraModel camera;
  double table_height_m = 0.80;
  std::vector<ObjectEntry> objects;
  std::vector<FrameRecord> frames;

  // Checks frame count, feature lengths and strictly increasing indices.
  // Throws SchemaError.
  void validate() const;

  // Ground-truth timeline; throws SchemaError if any frame lacks gt_label.
  LabelTimeline gt_timeline() const;

  bool has_gt_labels() const;

  bool operator==(const Episode& other) const;
};

// Stacks per-frame features into a frames x feature_dim matrix.
Eigen::MatrixXd feature_matrix(const Episode& episode);

}  // namespace d2p
