#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "d2p/episode.hpp"
#include "d2p/types.hpp"

namespace d2p {

// One tracked detection chain. Centers are keyed by frame index; the class
// histogram counts every associated detection's top class.
struct Track {
  int track_id = 0;
  std::map<int, Pixel> centers;
  std::map<std::string, int> class_histogram;
  double last_confidence = 0.0;

  bool present_at(int frame) const { return centers.count(frame) > 0; }

  // Center at the presence frame nearest to `frame`, looking at most
  // `tolerance` frames away; earlier frame wins a distance tie.
  std::optional<std::pair<int, Pixel>> nearest_center(int frame, int tolerance) const;

  // Most frequent class; count ties resolve to the lexicographically
  // smallest name. Empty histogram yields the empty string.
  std::string modal_class() const;
};

struct VoteConfig {
  int max_window = 10;
  double min_confidence = 0.3;
  double gate_px = 40.0;
  std::set<std::string> class_blacklist = {"arm", "hand"};
  double hand_radius_px = 60.0;
  void validate() const;
};

struct Resolution {
  int track_id = -1;
  std::string class_name;
  Pixel position;
  int frames_used = 0;
  bool decided = false;
};

// Greedy nearest-neighbor association of per-frame detections into tracks.
// Each detection joins the track whose last center is nearest and within
// gate_px (ties pick the lower track_id, one detection per track per frame)
// or starts a new track. Deterministic given the detection order on file.
std::vector<Track> associate_tracks(const Episode& episode, const VoteConfig& cfg);

// Majority voting around a keyframe. Windows grow k = 0..max_window; at each
// k the plausible (track, frame) appearances inside [keyframe-k, keyframe+k]
// are counted and the vote decides once one track holds a strict majority.
// Plausible means: center within hand_radius_px of `hand`, modal class not
// blacklisted, track confidence >= min_confidence. Undecided votes return
// decided=false rather than throwing.
Resolution resolve_at_keyframe(const std::vector<Track>& tracks, int keyframe, Pixel hand,
                               const VoteConfig& cfg);

// Euclidean pixel distance between the track centers nearest to `before` and
// `after` (at most 3 frames away each). Throws MissingObservation when the
// track has no presence near either frame.
double displacement(const Track& track, int before, int after);

}  // namespace d2p
