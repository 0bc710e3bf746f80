#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2p/episode.hpp"
#include "d2p/geometry.hpp"
#include "d2p/kinematics.hpp"
#include "d2p/plan.hpp"
#include "d2p/rng.hpp"
#include "d2p/types.hpp"

namespace d2p {

struct SceneObject {
  std::string object_id;
  std::string class_name;
  double footprint_radius = 0.04;
  double height = 0.06;
  Point3 position;  // center; on the table z = table height + height / 2
  bool graspable = true;
};

// Detection corruption calibrated to the reported ViLD behavior: detection
// and classification rates, a systematic bias class, false positives per
// frame, intermittent arm detections near the hand, occlusion while held
// and pixel jitter.
struct NoiseModel {
  double detect_prob = 0.8724;
  double class_accuracy = 0.5011;
  std::string confusion_bias_class = "cardboard box";
  double fp_rate_per_frame = 0.406;
  double arm_fp_prob = 0.3;
  double held_occlusion_prob = 0.5;
  double center_jitter_px = 3.0;

  static NoiseModel none();
  void validate() const;
};

// Hidden ground truth of one demonstration: which object moves, the four
// waypoints (pick2 equals place1: the object is picked up again where it was
// released) and the phase boundaries b0..b3. OBJECT_HELD holds exactly on
// frames [b0, b1) and [b2, b3).
struct DemoScript {
  std::string moved_object_id;
  Point3 pick1, place1, pick2, place2;
  std::array<int, 4> boundaries = {0, 0, 0, 0};
  bool timing_outlier = false;

  bool held_at(int frame) const {
    return (frame >= boundaries[0] && frame < boundaries[1]) ||
           (frame >= boundaries[2] && frame < boundaries[3]);
  }
};

struct GenOptions {
  std::string id = "episode";
  int frame_count = 440;
  double fps = 22.0;
  int feature_dim = 64;
  bool clean_features = false;  // drop feature noise and held-flag flips
};

struct DemoOutcome {
  Episode episode;
  DemoScript script;
  std::vector<SceneObject> scene;  // spawn placements; the mover sits at pick1
};

// Generates one demonstration. The first catalog entry is the demonstrated
// (moved) object; the rest are distractors placed at sampled non-overlapping
// positions. Everything (script, placements, detections, features) derives
// deterministically from script_seed. Throws SceneError when `objects` is
// empty or contains no graspable object.
DemoOutcome generate_demo(const std::vector<SceneObject>& objects, RngSeed script_seed,
                          const NoiseModel& noise, const CameraModel& camera,
                          const TablePlane& table, const GenOptions& opts = {});

// per_object episodes per catalog entry, each scene holding the mover plus
// 2 to 4 distractors from the rest of the catalog.
std::vector<DemoOutcome> gen_dataset(const std::vector<SceneObject>& catalog, int per_object,
                                     RngSeed seed, const NoiseModel& noise,
                                     const CameraModel& camera, const TablePlane& table,
                                     const GenOptions& opts = {});

struct ExecSettings {
  double grasp_radius = 0.03;
  double place_radius = 0.05;
  std::optional<std::string> moved_object_id;
  std::optional<Point3> expected_final;  // demonstrated place2
  RngSeed push_seed;
  void validate() const;
};

struct GraspOutcome {
  bool success = false;
  double position_error_m = 0.0;
};

struct ExecEvent {
  int leg_index = 0;
  std::string kind;  // "grasp" | "grasp_failed" | "push" | "release"
  std::string detail;
};

struct ExecutionResult {
  std::vector<GraspOutcome> grasp_outcomes;
  std::map<std::string, Point3> final_object_positions;
  bool imitation_success = false;
  std::vector<ExecEvent> events;
};

// Plays a trajectory against the scene. GRASP attaches the nearest graspable
// object whose center is within grasp_radius of the tool (a failed grasp
// pushes the nearest object 0.02 to 0.05 m horizontally away from the tool);
// attached objects follow the tool rigidly; RELEASE drops the object onto
// the table. imitation_success requires at least one grasp, no failed
// grasps, and the moved object resting within place_radius of
// expected_final. Throws PlanObjectMismatch when a gripper leg references an
// object absent from the scene (by id or class).
ExecutionResult execute(const std::vector<SceneObject>& scene, const Trajectory& trajectory,
                        const KinematicChain& chain, const ExecSettings& settings);

struct RunSummary {
  double grasp_rate = 0.0;
  double first_grasp_rate = 0.0;
  double second_grasp_rate = 0.0;
  double imitation_rate = 0.0;
};

// Batch ratios; throws EmptyBatch on empty input.
RunSummary score_run(const std::vector<ExecutionResult>& results);

// The five tabletop objects the demonstrations cycle through.
std::vector<SceneObject> default_catalog();

// 15-class detector vocabulary (includes "arm" and "hand").
const std::vector<std::string>& detection_vocabulary();

// Class-name heights derived from a catalog, for plan grounding.
HeightCatalog height_catalog_from(const std::vector<SceneObject>& catalog);

}  // namespace d2p
