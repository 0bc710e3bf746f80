#include "d2p/plan.hpp"

#include <cmath>

#include "d2p/errors.hpp"

namespace d2p {

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kApproach: return "APPROACH";
    case StepKind::kDescend: return "DESCEND";
    case StepKind::kGrasp: return "GRASP";
    case StepKind::kLift: return "LIFT";
    case StepKind::kTransport: return "TRANSPORT";
    case StepKind::kLower: return "LOWER";
    case StepKind::kRelease: return "RELEASE";
    case StepKind::kRetreat: return "RETREAT";
  }
  return "UNKNOWN";
}

std::string to_string(ValidationKind kind) {
  switch (kind) {
    case ValidationKind::kAmbiguousObject: return "AmbiguousObject";
    case ValidationKind::kMissingEvidence: return "MissingEvidence";
    case ValidationKind::kInconsistentEvidence: return "InconsistentEvidence";
    case ValidationKind::kOutOfWorkspace: return "OutOfWorkspace";
    case ValidationKind::kMalformedTimeline: return "MalformedTimeline";
  }
  return "Unknown";
}

double HeightCatalog::height_for(const std::string& class_name) const {
  const auto it = by_class.find(class_name);
  return it == by_class.end() ? fallback : it->second;
}

std::vector<HeldSegment> extract_segments(const LabelTimeline& timeline) {
  std::vector<HeldSegment> segments;
  int start = -1;
  for (int t = 0; t < timeline.size(); ++t) {
    const bool held = timeline.at(t) == kObjectHeld;
    if (held && start < 0) start = t;
    if (!held && start >= 0) {
      segments.push_back({start, t - 1, {}, {}, {}});
      start = -1;
    }
  }
  if (start >= 0) segments.push_back({start, timeline.size() - 1, {}, {}, {}});
  return segments;
}

std::vector<HeldSegment> ground_segments(const std::vector<HeldSegment>& segments,
                                         const Episode& episode, const std::vector<Track>& tracks,
                                         const CameraModel& camera, const TablePlane& table,
                                         const VoteConfig& cfg, const HeightCatalog& heights) {
  const int last_frame = static_cast<int>(episode.frames.size()) - 1;
  // The detector sees the object's center, half an object height above the
  // table; intersecting the viewing ray with the table itself would smear
  // the point away from the camera. Raising the plane to the center height
  // removes that parallax and lands on z = table + height / 2 directly.
  auto lift = [&](const Pixel& px, const std::string& class_name) -> std::optional<Point3> {
    try {
      TablePlane center_plane = table;
      center_plane.height_m = table.height_m + heights.height_for(class_name) / 2.0;
      return backproject(px, camera, center_plane);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  std::vector<HeldSegment> grounded = segments;
  for (HeldSegment& segment : grounded) {
    const int grasp_kf = std::max(segment.start_frame - 1, 0);
    const int release_kf = std::min(segment.end_frame + 1, last_frame);
    if (last_frame < 0) continue;

    const auto& hand = episode.frames[static_cast<std::size_t>(grasp_kf)].gt_hand;
    if (!hand) continue;

    const Resolution res = resolve_at_keyframe(tracks, grasp_kf, *hand, cfg);
    if (!res.decided) continue;
    segment.object = res;
    segment.grasp_point = lift(res.position, res.class_name);

    // Release evidence, two attempts. The grasp-voted track often fragments
    // mid-transport (occlusion plus arm detections steal frames), so when it
    // has no observation near the release keyframe, re-vote there: the object
    // rests in the open at that moment and the place-anchored track wins.
    std::optional<Pixel> release_px;
    for (const Track& track : tracks) {
      if (track.track_id != res.track_id) continue;
      if (const auto near = track.nearest_center(release_kf, 3)) release_px = near->second;
      break;
    }
    if (!release_px) {
      const auto& held_hand = episode.frames[static_cast<std::size_t>(segment.end_frame)].gt_hand;
      if (held_hand) {
        const Resolution rel = resolve_at_keyframe(tracks, release_kf, *held_hand, cfg);
        if (rel.decided) release_px = rel.position;
      }
    }
    if (release_px) segment.release_point = lift(*release_px, res.class_name);
  }
  return grounded;
}

std::vector<ValidationResult> validate(const std::vector<HeldSegment>& grounded,
                                       const TablePlane& table, double d_min, double bounds_tol) {
  std::vector<ValidationResult> results;
  results.reserve(grounded.size());
  for (std::size_t i = 0; i < grounded.size(); ++i) {
    const HeldSegment& seg = grounded[i];
    ValidationResult res;
    res.segment_index = static_cast<int>(i);
    const std::string prefix = "segment " + std::to_string(i) + ": ";

    auto fail = [&](ValidationKind kind, const std::string& message) {
      res.passed = false;
      res.failure = kind;
      res.message = prefix + message;
    };

    if (!seg.object || !seg.object->decided) {
      fail(ValidationKind::kAmbiguousObject, "no object resolved at the grasp keyframe");
    } else if (!seg.grasp_point || !seg.release_point) {
      fail(ValidationKind::kMissingEvidence,
           std::string(seg.grasp_point ? "release" : "grasp") + " point could not be grounded");
    } else if (distance(*seg.grasp_point, *seg.release_point) < d_min) {
      fail(ValidationKind::kInconsistentEvidence,
           "object did not move (displacement below " + std::to_string(d_min) + " m)");
    } else if (!in_bounds(*seg.grasp_point, table, bounds_tol) ||
               !in_bounds(*seg.release_point, table, bounds_tol)) {
      fail(ValidationKind::kOutOfWorkspace, "grounded point outside the table workspace");
    } else if (seg.start_frame > seg.end_frame ||
               (i > 0 && grounded[i - 1].end_frame >= seg.start_frame)) {
      fail(ValidationKind::kMalformedTimeline, "segments overlap or are out of order");
    }
    results.push_back(std::move(res));
  }
  return results;
}

PlanReport synthesize(const std::vector<HeldSegment>& grounded,
                      const std::vector<ValidationResult>& validations, double hover) {
  if (validations.size() != grounded.size()) {
    throw DomainError("validation results do not match the segment list");
  }
  PlanReport report;
  report.diagnostics = validations;
  for (const ValidationResult& v : validations) {
    if (!v.passed) report.reasons.push_back(v.message);
  }
  if (!report.reasons.empty()) return report;

  for (const HeldSegment& seg : grounded) {
    const Point3 grasp = *seg.grasp_point;
    const Point3 release = *seg.release_point;
    const Point3 grasp_hover{grasp.x, grasp.y, grasp.z + hover};
    const Point3 release_hover{release.x, release.y, release.z + hover};
    const std::string object_id = seg.object->class_name;
    report.plan.steps.push_back({StepKind::kApproach, grasp_hover, {}});
    report.plan.steps.push_back({StepKind::kDescend, grasp, {}});
    report.plan.steps.push_back({StepKind::kGrasp, grasp, object_id});
    report.plan.steps.push_back({StepKind::kLift, grasp_hover, {}});
    report.plan.steps.push_back({StepKind::kTransport, release_hover, {}});
    report.plan.steps.push_back({StepKind::kLower, release, {}});
    report.plan.steps.push_back({StepKind::kRelease, release, object_id});
    report.plan.steps.push_back({StepKind::kRetreat, release_hover, {}});
  }
  return report;
}

}  // namespace d2p
