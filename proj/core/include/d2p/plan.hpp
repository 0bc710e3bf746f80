#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2p/episode.hpp"
#include "d2p/fusion.hpp"
#include "d2p/geometry.hpp"
#include "d2p/types.hpp"

namespace d2p {

// Maximal run of OBJECT_HELD frames plus, once grounded, the evidence for
// which object moved and where it was picked up and put down.
struct HeldSegment {
  int start_frame = 0;
  int end_frame = 0;
  std::optional<Resolution> object;
  std::optional<Point3> grasp_point;
  std::optional<Point3> release_point;
};

enum class StepKind {
  kApproach,
  kDescend,
  kGrasp,
  kLift,
  kTransport,
  kLower,
  kRelease,
  kRetreat,
};

std::string to_string(StepKind kind);

struct PlanStep {
  StepKind kind = StepKind::kApproach;
  Point3 target;
  std::optional<std::string> object_id;
};

struct ActionPlan {
  std::vector<PlanStep> steps;
};

enum class ValidationKind {
  kAmbiguousObject,     // V1: no decided resolution
  kMissingEvidence,     // V1b: resolved but a grasp/release point is missing
  kInconsistentEvidence,  // V2: object did not actually move
  kOutOfWorkspace,      // V3: a point leaves the table bounds
  kMalformedTimeline,   // V4: segments overlap or are out of order
};

std::string to_string(ValidationKind kind);

struct ValidationResult {
  int segment_index = 0;
  bool passed = true;
  std::optional<ValidationKind> failure;
  std::string message;
};

// Either a plan (reasons empty) or a request for a new demonstration with
// the reasons listed; diagnostics always carry the per-segment results.
struct PlanReport {
  ActionPlan plan;
  std::vector<std::string> reasons;
  std::vector<ValidationResult> diagnostics;
  bool has_plan() const { return reasons.empty(); }
};

// Class-name to object-height lookup used to lift backprojected table points
// to grasp height (z = table + height / 2).
struct HeightCatalog {
  std::map<std::string, double> by_class;
  double fallback = 0.0;
  double height_for(const std::string& class_name) const;
};

// Maximal OBJECT_HELD runs, in temporal order.
std::vector<HeldSegment> extract_segments(const LabelTimeline& timeline);

// Grounds each segment: resolves the moved object by majority vote at the
// grasp keyframe (start - 1, clamped to 0), backprojects its pixel onto the
// object-center plane (table + height / 2, avoiding table-plane parallax),
// and takes the same track's position at the release keyframe (end + 1,
// clamped to the last frame). When that track has no observation within 3
// frames of the release keyframe the vote is repeated at the release
// keyframe, anchored on the last held frame's hand position. Missing
// evidence leaves the optionals empty; nothing throws here.
std::vector<HeldSegment> ground_segments(const std::vector<HeldSegment>& segments,
                                         const Episode& episode, const std::vector<Track>& tracks,
                                         const CameraModel& camera, const TablePlane& table,
                                         const VoteConfig& cfg,
                                         const HeightCatalog& heights = {});

// Per-segment checks, first failure wins: V1 resolved object, evidence
// present, V2 the object moved at least d_min, V3 both points within table
// bounds (tolerance bounds_tol), V4 ordered non-overlapping segments.
std::vector<ValidationResult> validate(const std::vector<HeldSegment>& grounded,
                                       const TablePlane& table, double d_min = 0.05,
                                       double bounds_tol = 0.12);

// Emits the 8-step pick-and-place cycle per segment when every validation
// passed, otherwise a RequestNewDemonstration carrying the failure reasons.
PlanReport synthesize(const std::vector<HeldSegment>& grounded,
                      const std::vector<ValidationResult>& validations, double hover = 0.10);

}  // namespace d2p
