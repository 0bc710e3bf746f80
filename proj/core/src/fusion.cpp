#include "d2p/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "d2p/errors.hpp"

namespace d2p {

std::optional<std::pair<int, Pixel>> Track::nearest_center(int frame, int tolerance) const {
  std::optional<std::pair<int, Pixel>> best;
  int best_gap = tolerance + 1;
  for (const auto& [f, center] : centers) {
    if (f > frame + tolerance) break;
    const int gap = std::abs(f - frame);
    if (gap < best_gap) {
      best = {f, center};
      best_gap = gap;
    }
  }
  if (best_gap > tolerance) return std::nullopt;
  return best;
}

std::string Track::modal_class() const {
  std::string mode;
  int best = 0;
  for (const auto& [name, count] : class_histogram) {
    if (count > best) {
      best = count;
      mode = name;
    }
  }
  return mode;
}

void VoteConfig::validate() const {
  if (max_window < 0) throw DomainError("max_window must be >= 0");
  if (gate_px <= 0.0) throw DomainError("gate_px must be positive");
  if (hand_radius_px <= 0.0) throw DomainError("hand_radius_px must be positive");
  if (min_confidence < 0.0 || min_confidence > 1.0) {
    throw DomainError("min_confidence must be in [0, 1]");
  }
}

std::vector<Track> associate_tracks(const Episode& episode, const VoteConfig& cfg) {
  cfg.validate();
  std::vector<Track> tracks;
  std::vector<Pixel> last_center;
  std::vector<int> matched_frame;

  for (const FrameRecord& frame : episode.frames) {
    for (const Detection& det : frame.detections) {
      int best_track = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < tracks.size(); ++i) {
        if (matched_frame[i] == frame.index) continue;
        const double dist = pixel_distance(last_center[i], det.center);
        if (dist <= cfg.gate_px && dist < best_dist) {
          best_dist = dist;
          best_track = static_cast<int>(i);
        }
      }
      if (best_track < 0) {
        Track track;
        track.track_id = static_cast<int>(tracks.size());
        tracks.push_back(std::move(track));
        last_center.push_back(det.center);
        matched_frame.push_back(-1);
        best_track = static_cast<int>(tracks.size()) - 1;
      }
      Track& track = tracks[static_cast<std::size_t>(best_track)];
      track.centers[frame.index] = det.center;
      track.class_histogram[det.top_class()] += 1;
      track.last_confidence = det.confidence;
      last_center[static_cast<std::size_t>(best_track)] = det.center;
      matched_frame[static_cast<std::size_t>(best_track)] = frame.index;
    }
  }
  return tracks;
}

Resolution resolve_at_keyframe(const std::vector<Track>& tracks, int keyframe, Pixel hand,
                               const VoteConfig& cfg) {
  cfg.validate();

  struct Candidate {
    bool plausible = false;
    std::string modal;
  };
  std::vector<Candidate> info(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    info[i].modal = tracks[i].modal_class();
    info[i].plausible = cfg.class_blacklist.count(info[i].modal) == 0 &&
                        tracks[i].last_confidence >= cfg.min_confidence;
  }

  auto appearance_count = [&](std::size_t i, int k) {
    if (!info[i].plausible) return 0;
    int count = 0;
    for (const auto& [frame, center] : tracks[i].centers) {
      if (frame < keyframe - k || frame > keyframe + k) continue;
      if (pixel_distance(center, hand) <= cfg.hand_radius_px) ++count;
    }
    return count;
  };

  for (int k = 0; k <= cfg.max_window; ++k) {
    int total = 0;
    int best_count = 0;
    std::size_t best_track = 0;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      const int count = appearance_count(i, k);
      total += count;
      if (count > best_count) {
        best_count = count;
        best_track = i;
      }
    }
    if (best_count > 0 && 2 * best_count > total) {
      const Track& winner = tracks[best_track];
      Resolution res;
      res.track_id = winner.track_id;
      res.class_name = info[best_track].modal;
      res.frames_used = 2 * k + 1;
      res.decided = true;
      // Winning position: the plausible appearance nearest the keyframe.
      int best_gap = std::numeric_limits<int>::max();
      for (const auto& [frame, center] : winner.centers) {
        if (frame < keyframe - k || frame > keyframe + k) continue;
        if (pixel_distance(center, hand) > cfg.hand_radius_px) continue;
        const int gap = std::abs(frame - keyframe);
        if (gap < best_gap) {
          best_gap = gap;
          res.position = center;
        }
      }
      return res;
    }
  }

  Resolution res;
  res.frames_used = 2 * cfg.max_window + 1;
  res.decided = false;
  return res;
}

double displacement(const Track& track, int before, int after) {
  const auto a = track.nearest_center(before, 3);
  const auto b = track.nearest_center(after, 3);
  if (!a || !b) {
    throw MissingObservation("track " + std::to_string(track.track_id) +
                             " has no observation near frame " +
                             std::to_string(a ? after : before));
  }
  return pixel_distance(a->second, b->second);
}

}  // namespace d2p
