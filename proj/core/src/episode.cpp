#include "d2p/episode.hpp"

#include <cmath>

#include "d2p/errors.hpp"

namespace d2p {

void Episode::validate() const {
  if (static_cast<int>(frames.size()) != frame_count) {
    throw SchemaError("episode '" + id + "': header declares " + std::to_string(frame_count) +
                      " frames, file carries " + std::to_string(frames.size()));
  }
  if (!(fps > 0.0)) throw SchemaError("episode '" + id + "': fps must be positive");
  camera.validate();
  int previous = -1;
  for (const FrameRecord& frame : frames) {
    if (frame.index <= previous) {
      throw SchemaError("episode '" + id + "': frame indices not strictly increasing at " +
                        std::to_string(frame.index));
    }
    previous = frame.index;
    if (static_cast<int>(frame.features.size()) != feature_dim) {
      throw SchemaError("episode '" + id + "': frame " + std::to_string(frame.index) +
                        " has feature length " + std::to_string(frame.features.size()) +
                        ", expected " + std::to_string(feature_dim));
    }
    if (frame.gt_label && frame.gt_label->class_index < 0) {
      throw SchemaError("episode '" + id + "': negative gt label at frame " +
                        std::to_string(frame.index));
    }
    for (const Detection& det : frame.detections) {
      if (det.class_scores.empty()) {
        throw SchemaError("episode '" + id + "': detection without classes at frame " +
                          std::to_string(frame.index));
      }
      if (det.confidence < 0.0 || det.confidence > 1.0) {
        throw SchemaError("episode '" + id + "': detection confidence outside [0,1]");
      }
      for (const auto& [name, score] : det.class_scores) {
        if (score < 0.0 || score > 1.0) {
          throw SchemaError("episode '" + id + "': score for '" + name + "' outside [0,1]");
        }
      }
    }
  }
}

LabelTimeline Episode::gt_timeline() const {
  LabelTimeline timeline;
  timeline.labels.reserve(frames.size());
  for (const FrameRecord& frame : frames) {
    if (!frame.gt_label) {
      throw SchemaError("episode '" + id + "': frame " + std::to_string(frame.index) +
                        " has no ground-truth label");
    }
    timeline.labels.push_back(*frame.gt_label);
  }
  return timeline;
}

bool Episode::has_gt_labels() const {
  for (const FrameRecord& frame : frames) {
    if (!frame.gt_label) return false;
  }
  return !frames.empty();
}

bool Episode::operator==(const Episode& other) const {
  return id == other.id && fps == other.fps && frame_count == other.frame_count &&
         feature_dim == other.feature_dim && camera == other.camera &&
         table_height_m == other.table_height_m && objects == other.objects &&
         frames == other.frames;
}

Eigen::MatrixXd feature_matrix(const Episode& episode) {
  Eigen::MatrixXd cond(episode.frames.size(), episode.feature_dim);
  for (std::size_t t = 0; t < episode.frames.size(); ++t) {
    const auto& features = episode.frames[t].features;
    if (static_cast<int>(features.size()) != episode.feature_dim) {
      throw SchemaError("frame feature length does not match feature_dim");
    }
    for (int d = 0; d < episode.feature_dim; ++d) {
      cond(static_cast<Eigen::Index>(t), d) = features[static_cast<std::size_t>(d)];
    }
  }
  return cond;
}

}  // namespace d2p
