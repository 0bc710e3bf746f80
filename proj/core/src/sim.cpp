#include "d2p/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

constexpr double kFeatureNoiseSigma = 0.1;
constexpr double kHeldFlipProb = 0.1;
constexpr double kTimingOutlierProb = 0.1;
constexpr double kMinWaypointGap = 0.15;
constexpr double kWaypointInset = 0.08;
constexpr double kFreeHandLift = 0.20;
constexpr int kDwell = 3;
constexpr int kMinPhaseLen = 12;
constexpr int kFeatureInputs = 7;
constexpr std::uint64_t kProjectionSeed = 0x0D2BFEED0001ull;

struct Anchor {
  int frame = 0;
  Point3 pos;
};

Point3 lerp(const Point3& a, const Point3& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t};
}

Point3 path_at(const std::vector<Anchor>& anchors, int frame) {
  if (frame <= anchors.front().frame) return anchors.front().pos;
  if (frame >= anchors.back().frame) return anchors.back().pos;
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    if (frame <= anchors[i].frame) {
      const Anchor& a = anchors[i - 1];
      const Anchor& b = anchors[i];
      const double t = static_cast<double>(frame - a.frame) / (b.frame - a.frame);
      return lerp(a.pos, b.pos, t);
    }
  }
  return anchors.back().pos;
}

Eigen::MatrixXd feature_projection(int feature_dim) {
  Rng rng(RngSeed{kProjectionSeed});
  Eigen::MatrixXd proj(feature_dim, kFeatureInputs);
  const double scale = 1.0 / std::sqrt(static_cast<double>(kFeatureInputs));
  for (int d = 0; d < feature_dim; ++d) {
    for (int j = 0; j < kFeatureInputs; ++j) proj(d, j) = scale * rng.normal();
  }
  return proj;
}

double camera_depth(const Point3& p, const CameraModel& cam) {
  const Eigen::Vector3d world(p.x, p.y, p.z);
  const Eigen::Vector3d in_cam = cam.rotation.transpose() * (world - cam.translation);
  return in_cam.z();
}

Point3 sample_waypoint(Rng& rng, const TablePlane& table, double z) {
  return {rng.uniform(table.x_min + kWaypointInset, table.x_max - kWaypointInset),
          rng.uniform(table.y_min + kWaypointInset, table.y_max - kWaypointInset), z};
}

std::array<int, 4> sample_boundaries(Rng& rng, int frame_count, bool& outlier_out) {
  const std::array<double, 5> means = {0.18, 0.22, 0.20, 0.22, 0.18};
  std::array<double, 5> weights;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double m = means[i];
    weights[i] = rng.truncated_normal(m, 0.25 * m, 0.3 * m, 3.0 * m);
  }
  outlier_out = rng.bernoulli(kTimingOutlierProb);
  if (outlier_out) {
    const std::size_t held = rng.bernoulli(0.5) ? 1 : 3;
    weights[held] *= 2.5;
  }
  const double total = weights[0] + weights[1] + weights[2] + weights[3] + weights[4];

  std::array<int, 4> bounds;
  double cum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    cum += weights[i];
    bounds[i] = static_cast<int>(std::llround(frame_count * cum / total));
  }
  // Keep every phase at least kMinPhaseLen frames long.
  bounds[0] = std::max(bounds[0], kMinPhaseLen);
  for (std::size_t i = 1; i < 4; ++i) {
    bounds[i] = std::max(bounds[i], bounds[i - 1] + kMinPhaseLen);
  }
  const int limit = frame_count - kMinPhaseLen;
  bounds[3] = std::min(bounds[3], limit);
  for (int i = 2; i >= 0; --i) {
    bounds[static_cast<std::size_t>(i)] =
        std::min(bounds[static_cast<std::size_t>(i)], bounds[static_cast<std::size_t>(i) + 1] - kMinPhaseLen);
  }
  return bounds;
}

}  // namespace

NoiseModel NoiseModel::none() {
  NoiseModel noise;
  noise.detect_prob = 1.0;
  noise.class_accuracy = 1.0;
  noise.fp_rate_per_frame = 0.0;
  noise.arm_fp_prob = 0.0;
  noise.held_occlusion_prob = 0.0;
  noise.center_jitter_px = 0.0;
  return noise;
}

void NoiseModel::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(detect_prob) || !prob(class_accuracy) || !prob(arm_fp_prob) ||
      !prob(held_occlusion_prob)) {
    throw DomainError("noise probabilities must be in [0, 1]");
  }
  if (fp_rate_per_frame < 0.0 || center_jitter_px < 0.0) {
    throw DomainError("noise rates must be nonnegative");
  }
}

void ExecSettings::validate() const {
  if (grasp_radius <= 0.0 || place_radius <= 0.0) {
    throw DomainError("execution tolerances must be positive");
  }
}

DemoOutcome generate_demo(const std::vector<SceneObject>& objects, RngSeed script_seed,
                          const NoiseModel& noise, const CameraModel& camera,
                          const TablePlane& table, const GenOptions& opts) {
  noise.validate();
  camera.validate();
  table.validate();
  if (objects.empty()) throw SceneError("scene needs at least one object");
  if (std::none_of(objects.begin(), objects.end(),
                   [](const SceneObject& o) { return o.graspable; })) {
    throw SceneError("scene needs at least one graspable object");
  }
  if (opts.frame_count < 5 * kMinPhaseLen) throw SceneError("frame_count too small for a script");

  Rng rng(script_seed);
  DemoOutcome out;
  DemoScript& script = out.script;
  const SceneObject& mover = objects.front();
  script.moved_object_id = mover.object_id;
  script.boundaries = sample_boundaries(rng, opts.frame_count, script.timing_outlier);

  const double grasp_z = table.height_m + mover.height / 2.0;
  script.pick1 = sample_waypoint(rng, table, grasp_z);
  for (int tries = 0;; ++tries) {
    script.place1 = sample_waypoint(rng, table, grasp_z);
    if (horizontal_distance(script.place1, script.pick1) >= kMinWaypointGap) break;
    if (tries > 10000) throw SceneError("could not sample separated waypoints");
  }
  script.pick2 = script.place1;
  for (int tries = 0;; ++tries) {
    script.place2 = sample_waypoint(rng, table, grasp_z);
    if (horizontal_distance(script.place2, script.place1) >= kMinWaypointGap &&
        horizontal_distance(script.place2, script.pick1) >= kMinWaypointGap) {
      break;
    }
    if (tries > 10000) throw SceneError("could not sample separated waypoints");
  }

  // Spawn placements: the mover at pick1, distractors clear of the waypoints
  // and of each other.
  out.scene = objects;
  out.scene.front().position = script.pick1;
  for (std::size_t i = 1; i < out.scene.size(); ++i) {
    SceneObject& obj = out.scene[i];
    const double z = table.height_m + obj.height / 2.0;
    bool placed = false;
    for (int tries = 0; tries < 10000 && !placed; ++tries) {
      const Point3 candidate = sample_waypoint(rng, table, z);
      bool ok = horizontal_distance(candidate, script.pick1) >= obj.footprint_radius + 0.12 &&
                horizontal_distance(candidate, script.place1) >= obj.footprint_radius + 0.12 &&
                horizontal_distance(candidate, script.place2) >= obj.footprint_radius + 0.12;
      for (std::size_t j = 1; ok && j < i; ++j) {
        ok = horizontal_distance(candidate, out.scene[j].position) >=
             obj.footprint_radius + out.scene[j].footprint_radius + 0.03;
      }
      if (ok) {
        obj.position = candidate;
        placed = true;
      }
    }
    if (!placed) throw SceneError("could not place distractor " + obj.object_id);
  }

  // Hand path through the pick/place cycle with dwell at each waypoint.
  const double lift_z = table.height_m + kFreeHandLift;
  const Point3 hand_start = sample_waypoint(rng, table, lift_z);
  const Point3 via = sample_waypoint(rng, table, lift_z);
  const Point3 rest = sample_waypoint(rng, table, lift_z);
  const auto& b = script.boundaries;
  const int mid_free = (b[1] + b[2]) / 2;
  const std::vector<Anchor> hand_path = {
      {0, hand_start},
      {b[0] - kDwell, script.pick1},
      {b[0] + kDwell, script.pick1},
      {b[1] - kDwell - 1, script.place1},
      {b[1] + kDwell - 1, script.place1},
      {mid_free, via},
      {b[2] - kDwell, script.pick2},
      {b[2] + kDwell, script.pick2},
      {b[3] - kDwell - 1, script.place2},
      {b[3] + kDwell - 1, script.place2},
      {opts.frame_count - 1, rest},
  };

  auto mover_at = [&](int frame) -> Point3 {
    if (frame < b[0]) return script.pick1;
    if (frame < b[1]) return path_at(hand_path, frame);
    if (frame < b[2]) return script.place1;
    if (frame < b[3]) return path_at(hand_path, frame);
    return script.place2;
  };

  // False positives draw from vocabulary classes absent from the scene so
  // they stay identifiable (the systematic in-scene confusion is modeled by
  // confusion_bias_class instead).
  std::vector<std::string> fp_classes;
  for (const std::string& name : detection_vocabulary()) {
    if (name == "arm" || name == "hand") continue;
    if (std::any_of(objects.begin(), objects.end(),
                    [&](const SceneObject& o) { return o.class_name == name; })) {
      continue;
    }
    fp_classes.push_back(name);
  }

  const Eigen::MatrixXd projection = feature_projection(opts.feature_dim);

  Episode& ep = out.episode;
  ep.id = opts.id;
  ep.fps = opts.fps;
  ep.frame_count = opts.frame_count;
  ep.feature_dim = opts.feature_dim;
  ep.camera = camera;
  ep.table_height_m = table.height_m;
  for (const SceneObject& obj : out.scene) {
    ep.objects.push_back({obj.object_id, obj.class_name, obj.graspable});
  }
  ep.frames.reserve(static_cast<std::size_t>(opts.frame_count));

  Point3 prev_hand = path_at(hand_path, 0);
  for (int f = 0; f < opts.frame_count; ++f) {
    FrameRecord frame;
    frame.index = f;
    frame.time_s = f / opts.fps;
    const Point3 hand = path_at(hand_path, f);
    const bool held = script.held_at(f);
    frame.gt_label = ActionLabel{held ? kObjectHeld : kHandFree};
    frame.gt_hand = project(hand, camera);

    for (std::size_t i = 0; i < out.scene.size(); ++i) {
      const bool occludable = i == 0 && held;
      if (occludable && rng.bernoulli(noise.held_occlusion_prob)) continue;
      if (!rng.bernoulli(noise.detect_prob)) continue;
      const Point3 center = i == 0 ? mover_at(f) : out.scene[i].position;
      Pixel px = project(center, camera);
      if (noise.center_jitter_px > 0.0) {
        px.u += rng.normal(0.0, noise.center_jitter_px);
        px.v += rng.normal(0.0, noise.center_jitter_px);
      }
      const bool correct = rng.bernoulli(noise.class_accuracy);
      const std::string cls = correct ? out.scene[i].class_name : noise.confusion_bias_class;
      const double conf = rng.uniform(0.55, 0.95);
      const double depth = std::max(camera_depth(center, camera), 0.05);
      Detection det;
      det.center = px;
      det.half_extent = {camera.fx * out.scene[i].footprint_radius / depth,
                         camera.fy * (out.scene[i].height / 2.0) / depth};
      det.class_scores[cls] = conf;
      det.confidence = conf;
      frame.detections.push_back(std::move(det));
    }

    if (!fp_classes.empty()) {
      const int fp_count = rng.poisson(noise.fp_rate_per_frame);
      for (int j = 0; j < fp_count; ++j) {
        Detection det;
        det.center = {rng.uniform(0.0, 2.0 * camera.cx), rng.uniform(0.0, 2.0 * camera.cy)};
        det.half_extent = {rng.uniform(5.0, 40.0), rng.uniform(5.0, 40.0)};
        const auto pick = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(fp_classes.size()) - 1));
        const double conf = rng.uniform(0.3, 0.9);
        det.class_scores[fp_classes[pick]] = conf;
        det.confidence = conf;
        frame.detections.push_back(std::move(det));
      }
    }

    if (rng.bernoulli(noise.arm_fp_prob)) {
      Detection det;
      det.center = {frame.gt_hand->u + rng.normal(0.0, 15.0),
                    frame.gt_hand->v + rng.normal(0.0, 15.0)};
      det.half_extent = {30.0, 60.0};
      const double conf = rng.uniform(0.5, 0.9);
      det.class_scores["arm"] = conf;
      det.confidence = conf;
      frame.detections.push_back(std::move(det));
    }

    Eigen::VectorXd base(kFeatureInputs);
    for (int i = 0; i < 5; ++i) {
      if (i < static_cast<int>(out.scene.size())) {
        const Point3 center = i == 0 ? mover_at(f) : out.scene[static_cast<std::size_t>(i)].position;
        base[i] = horizontal_distance(hand, center);
      } else {
        base[i] = 1.0;
      }
    }
    base[5] = distance(hand, prev_hand) * opts.fps;
    bool held_feature = held;
    if (!opts.clean_features && rng.bernoulli(kHeldFlipProb)) held_feature = !held_feature;
    base[6] = held_feature ? 1.0 : 0.0;

    Eigen::VectorXd features = projection * base;
    if (!opts.clean_features) {
      for (int d = 0; d < opts.feature_dim; ++d) features[d] += rng.normal(0.0, kFeatureNoiseSigma);
    }
    frame.features.assign(features.data(), features.data() + features.size());

    prev_hand = hand;
    ep.frames.push_back(std::move(frame));
  }

  ep.validate();
  return out;
}

std::vector<DemoOutcome> gen_dataset(const std::vector<SceneObject>& catalog, int per_object,
                                     RngSeed seed, const NoiseModel& noise,
                                     const CameraModel& camera, const TablePlane& table,
                                     const GenOptions& opts) {
  if (per_object < 1) throw DomainError("per_object must be >= 1");
  if (catalog.empty()) throw SceneError("catalog is empty");

  std::vector<DemoOutcome> demos;
  demos.reserve(catalog.size() * static_cast<std::size_t>(per_object));
  int episode_index = 0;
  for (std::size_t mover = 0; mover < catalog.size(); ++mover) {
    for (int k = 0; k < per_object; ++k, ++episode_index) {
      const RngSeed ep_seed = derive_seed(seed, static_cast<std::uint64_t>(episode_index));
      Rng pick_rng(derive_seed(ep_seed, 0xD15Cull));

      std::vector<std::size_t> others;
      for (std::size_t i = 0; i < catalog.size(); ++i) {
        if (i != mover) others.push_back(i);
      }
      for (std::size_t i = others.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(
            pick_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(others[i - 1], others[j]);
      }
      const auto want = static_cast<std::size_t>(pick_rng.uniform_int(2, 4));
      const std::size_t count = std::min(want, others.size());

      std::vector<SceneObject> objects = {catalog[mover]};
      bool any_graspable = catalog[mover].graspable;
      for (std::size_t i = 0; i < count; ++i) {
        objects.push_back(catalog[others[i]]);
        any_graspable = any_graspable || catalog[others[i]].graspable;
      }
      if (!any_graspable) {
        for (std::size_t i = count; i < others.size(); ++i) {
          if (catalog[others[i]].graspable) {
            objects.back() = catalog[others[i]];
            break;
          }
        }
      }

      GenOptions ep_opts = opts;
      ep_opts.id = catalog[mover].object_id + "_" + std::to_string(k);
      demos.push_back(generate_demo(objects, derive_seed(ep_seed, 0xEAull), noise, camera, table,
                                    ep_opts));
    }
  }
  return demos;
}

ExecutionResult execute(const std::vector<SceneObject>& scene, const Trajectory& trajectory,
                        const KinematicChain& chain, const ExecSettings& settings) {
  settings.validate();
  chain.validate();

  for (const TrajectoryLeg& leg : trajectory) {
    if ((leg.kind == StepKind::kGrasp || leg.kind == StepKind::kRelease) && leg.object_id) {
      const bool known =
          std::any_of(scene.begin(), scene.end(), [&](const SceneObject& o) {
            return o.object_id == *leg.object_id || o.class_name == *leg.object_id;
          });
      if (!known) {
        throw PlanObjectMismatch("plan references unknown object '" + *leg.object_id + "'");
      }
    }
  }

  ExecutionResult result;
  std::vector<SceneObject> objects = scene;
  std::vector<double> rest_z;
  rest_z.reserve(objects.size());
  for (const SceneObject& obj : objects) rest_z.push_back(obj.position.z);

  Rng rng(settings.push_seed);
  std::optional<std::size_t> attached;
  Point3 hold_offset{0.0, 0.0, 0.0};
  std::optional<Point3> tool;

  for (std::size_t leg_index = 0; leg_index < trajectory.size(); ++leg_index) {
    const TrajectoryLeg& leg = trajectory[leg_index];
    const int leg_i = static_cast<int>(leg_index);

    if (leg.kind == StepKind::kGrasp) {
      double nearest_any = std::numeric_limits<double>::infinity();
      double nearest_graspable = std::numeric_limits<double>::infinity();
      std::size_t any_idx = 0;
      std::size_t grasp_idx = 0;
      if (tool) {
        for (std::size_t i = 0; i < objects.size(); ++i) {
          if (attached && *attached == i) continue;
          const double dist = distance(*tool, objects[i].position);
          if (dist < nearest_any) {
            nearest_any = dist;
            any_idx = i;
          }
          if (objects[i].graspable && dist < nearest_graspable) {
            nearest_graspable = dist;
            grasp_idx = i;
          }
        }
      }

      if (tool && !attached && nearest_graspable <= settings.grasp_radius) {
        attached = grasp_idx;
        hold_offset = {objects[grasp_idx].position.x - tool->x,
                       objects[grasp_idx].position.y - tool->y,
                       objects[grasp_idx].position.z - tool->z};
        result.grasp_outcomes.push_back({true, nearest_graspable});
        result.events.push_back({leg_i, "grasp", objects[grasp_idx].object_id});
      } else {
        result.grasp_outcomes.push_back({false, nearest_any});
        result.events.push_back(
            {leg_i, "grasp_failed",
             attached ? "gripper already holding " + objects[*attached].object_id
                      : (tool ? "nothing graspable within reach" : "no motion before grasp")});
        if (tool && !attached && nearest_any <= 0.08) {
          SceneObject& pushed = objects[any_idx];
          double dx = pushed.position.x - tool->x;
          double dy = pushed.position.y - tool->y;
          const double norm = std::hypot(dx, dy);
          if (norm < 1e-12) {
            dx = 1.0;
            dy = 0.0;
          } else {
            dx /= norm;
            dy /= norm;
          }
          const double shove = rng.uniform(0.02, 0.05);
          pushed.position.x += dx * shove;
          pushed.position.y += dy * shove;
          result.events.push_back({leg_i, "push", pushed.object_id});
        }
      }
      continue;
    }

    if (leg.kind == StepKind::kRelease) {
      if (attached) {
        SceneObject& held = objects[*attached];
        held.position.z = rest_z[*attached];
        result.events.push_back({leg_i, "release", held.object_id});
        attached.reset();
      } else {
        result.events.push_back({leg_i, "release", "nothing held"});
      }
      continue;
    }

    for (const JointConfig& q : leg.waypoints) {
      const FkResult state = fk(chain, q);
      tool = state.tool;
      if (attached) {
        objects[*attached].position = {tool->x + hold_offset.x, tool->y + hold_offset.y,
                                       tool->z + hold_offset.z};
      }
    }
  }

  for (std::size_t i = 0; i < objects.size(); ++i) {
    result.final_object_positions[objects[i].object_id] = objects[i].position;
  }

  bool all_grasps_ok = !result.grasp_outcomes.empty();
  for (const GraspOutcome& g : result.grasp_outcomes) all_grasps_ok = all_grasps_ok && g.success;
  if (all_grasps_ok && settings.moved_object_id && settings.expected_final) {
    const auto it = result.final_object_positions.find(*settings.moved_object_id);
    result.imitation_success =
        it != result.final_object_positions.end() &&
        horizontal_distance(it->second, *settings.expected_final) <= settings.place_radius;
  }
  return result;
}

RunSummary score_run(const std::vector<ExecutionResult>& results) {
  if (results.empty()) throw EmptyBatch("score_run needs at least one result");
  RunSummary summary;
  int grasp_total = 0, grasp_ok = 0;
  int first_total = 0, first_ok = 0;
  int second_total = 0, second_ok = 0;
  int imitation_ok = 0;
  for (const ExecutionResult& r : results) {
    for (const GraspOutcome& g : r.grasp_outcomes) {
      ++grasp_total;
      if (g.success) ++grasp_ok;
    }
    if (!r.grasp_outcomes.empty()) {
      ++first_total;
      if (r.grasp_outcomes[0].success) ++first_ok;
    }
    if (r.grasp_outcomes.size() >= 2) {
      ++second_total;
      if (r.grasp_outcomes[1].success) ++second_ok;
    }
    if (r.imitation_success) ++imitation_ok;
  }
  summary.grasp_rate = grasp_total > 0 ? static_cast<double>(grasp_ok) / grasp_total : 0.0;
  summary.first_grasp_rate = first_total > 0 ? static_cast<double>(first_ok) / first_total : 0.0;
  summary.second_grasp_rate =
      second_total > 0 ? static_cast<double>(second_ok) / second_total : 0.0;
  summary.imitation_rate = static_cast<double>(imitation_ok) / static_cast<double>(results.size());
  return summary;
}

std::vector<SceneObject> default_catalog() {
  return {
      {"red_bowl", "red plate", 0.070, 0.05, {}, false},
      {"spam_can", "metal can", 0.035, 0.08, {}, true},
      {"jello_strawberry", "cardboard box", 0.030, 0.07, {}, true},
      {"jello_chocolate", "cardboard box", 0.030, 0.07, {}, true},
      {"tomato_can", "metal can", 0.037, 0.08, {}, false},
  };
}

const std::vector<std::string>& detection_vocabulary() {
  static const std::vector<std::string> vocab = {
      "red plate", "metal can", "cardboard box", "arm",    "hand",
      "mug",       "banana",    "apple",         "scissors", "stapler",
      "bottle",    "book",      "cup",           "fork",   "spoon",
  };
  return vocab;
}

HeightCatalog height_catalog_from(const std::vector<SceneObject>& catalog) {
  HeightCatalog heights;
  heights.fallback = 0.06;
  std::map<std::string, std::pair<double, int>> sums;
  for (const SceneObject& obj : catalog) {
    auto& [sum, count] = sums[obj.class_name];
    sum += obj.height;
    ++count;
  }
  for (const auto& [name, acc] : sums) {
    heights.by_class[name] = acc.first / acc.second;
  }
  return heights;
}

}  // namespace d2p
