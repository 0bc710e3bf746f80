#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace d2p {

// Default action alphabet. More classes may be configured (class_index < C),
// these two are what the default pipeline produces and consumes.
inline constexpr int kHandFree = 0;
inline constexpr int kObjectHeld = 1;
inline constexpr int kDefaultClassCount = 2;

struct ActionLabel {
  int class_index = kHandFree;

  friend bool operator==(const ActionLabel&, const ActionLabel&) = default;
};

// Image coordinates in pixels.
struct Pixel {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

inline double pixel_distance(const Pixel& a, const Pixel& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

// Position in meters, robot base frame.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline double distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double horizontal_distance(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// One detector output box. class_scores maps class name -> score in [0,1];
// at least one class must be present.
struct Detection {
  Pixel center;
  std::array<double, 2> half_extent{0.0, 0.0};
  std::map<std::string, double> class_scores;
  double confidence = 0.0;

  // Highest-scoring class; lexicographic tie-break keeps it deterministic.
  const std::string& top_class() const;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Per-frame class assignment over the action alphabet.
struct LabelTimeline {
  std::vector<ActionLabel> labels;

  int size() const { return static_cast<int>(labels.size()); }
  int at(int frame) const { return labels.at(static_cast<std::size_t>(frame)).class_index; }

  friend bool operator==(const LabelTimeline&, const LabelTimeline&) = default;
};

}  // namespace d2p
