// Acceptance gate. Each criterion prints exactly one [PASS]/[FAIL] line
// with the measured numbers and its wall time; the process exits nonzero
// when any criterion fails. Criteria with a runtime budget fail when they
// blow it.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "d2p/config.hpp"
#include "d2p/episode_io.hpp"
#include "d2p/errors.hpp"
#include "d2p/eval.hpp"
#include "d2p/fusion.hpp"
#include "d2p/geometry.hpp"
#include "d2p/infer.hpp"
#include "d2p/kinematics.hpp"
#include "d2p/plan.hpp"
#include "d2p/rng.hpp"
#include "d2p/schedule.hpp"
#include "d2p/sim.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace d2p;

namespace {

const fs::path kScratch = fs::path("scratch") / "acceptance";

struct CliRun {
  int code = -1;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path logs = kScratch / "logs";
  fs::create_directories(logs);
  const fs::path log = logs / ("run_" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string("\"") + D2P_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  CliRun run;
  run.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  run.output = test_helpers::read_file(log);
  return run;
}

void must(const std::string& args) {
  const CliRun run = run_cli(args);
  if (run.code != 0) {
    throw std::runtime_error("command failed (" + args + "):\n" + run.output);
  }
}

json read_json_file(const fs::path& path) {
  return json::parse(test_helpers::read_file(path));
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Diffusion mechanism: analytic gradients against central differences and
//    forward-noising statistics against the closed-form moments.

Outcome criterion_diffusion() {
  const double err_ce = test_helpers::gradcheck_max_rel_err(LossConfig{});
  LossConfig full;
  full.use_ba = true;
  full.use_ts = true;
  const double err_full = test_helpers::gradcheck_max_rel_err(full);
  const bool grads_ok = err_ce < 1e-4 && err_full < 1e-4;

  const NoiseSchedule sched = NoiseSchedule::cosine(1000);
  const LabelSequence gt = one_hot({0}, 2);
  Rng rng(RngSeed{2024});
  bool moments_ok = true;
  const int n = 20000;
  for (int step : {1, 250, 500, 999}) {
    const double ab = sched.alpha_bar[static_cast<std::size_t>(step)];
    const double mu = std::sqrt(ab);
    const double var = 1.0 - ab;
    double sum = 0.0;
    double sumsq = 0.0;
    Eigen::MatrixXd noise(1, 2);
    for (int i = 0; i < n; ++i) {
      noise(0, 0) = rng.normal();
      noise(0, 1) = rng.normal();
      const double x = q_sample(gt, step, noise, sched).values(0, 0);
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / n;
    const double sample_var = sumsq / n - mean * mean;
    if (std::abs(mean - mu) > 3.0 * std::sqrt(var / n)) moments_ok = false;
    if (std::abs(sample_var - var) > 3.0 * var * std::sqrt(2.0 / (n - 1))) moments_ok = false;
  }

  Outcome out;
  out.pass = grads_ok && moments_ok;
  out.detail = "gradcheck max rel err " + fmt(err_ce, 8) + " (ce), " + fmt(err_full, 8) +
               " (ce+ba+ts), tolerance 1e-4; q_sample mean/var at steps 1/250/500/999 " +
               (moments_ok ? "within" : "OUTSIDE") + " 3 sigma of the closed form";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Segmentation protocol: 120 noisy episodes (5 objects x 24, 440 frames),
//    80/20 split, CE-only training through the CLI; test frame accuracy must
//    reach 0.95 with 100-step and direct inference, and the eval command must
//    emit the four ablation rows.

Outcome criterion_protocol() {
  const fs::path dir = kScratch / "protocol";
  fs::create_directories(dir);

  PipelineConfig cfg = default_config();
  cfg.master_seed = 7;
  const fs::path config = dir / "protocol.toml";
  test_helpers::write_file(config, config_to_toml(cfg));
  const std::string with_config = " --config " + config.string();

  const fs::path data = dir / "data";
  must("gen-dataset" + with_config + " --out-dir " + data.string());
  const json manifest = read_json_file(data / "manifest.json");
  const std::size_t count = manifest.at("episodes").size();

  const fs::path model = dir / "ce.bin";
  must("train" + with_config + " --data " + data.string() + " --losses ce --out " +
       model.string());

  const DatasetSplit split = split_indices(count, cfg.train_fraction, protocol_split_seed(cfg));
  double sum_100 = 0.0;
  double sum_direct = 0.0;
  int scored = 0;
  for (const std::size_t index : split.test) {
    const std::string file = manifest.at("episodes").at(index).at("file").get<std::string>();
    const fs::path episode = data / file;
    const fs::path out_100 = dir / ("t100_" + std::to_string(index) + ".json");
    const fs::path out_direct = dir / ("tdir_" + std::to_string(index) + ".json");
    must("segment" + with_config + " --model " + model.string() + " --episode " +
         episode.string() + " --steps 100 --out " + out_100.string());
    must("segment" + with_config + " --model " + model.string() + " --episode " +
         episode.string() + " --steps direct --out " + out_direct.string());
    sum_100 += read_json_file(out_100).at("frame_accuracy").get<double>();
    sum_direct += read_json_file(out_direct).at("frame_accuracy").get<double>();
    ++scored;
  }
  const double acc_100 = sum_100 / scored;
  const double acc_direct = sum_direct / scored;

  const fs::path report_path = dir / "report.txt";
  must("eval" + with_config + " --data " + data.string() + " --model " + model.string() +
       " --out " + report_path.string());
  const std::string report = test_helpers::read_file(report_path);
  const bool rows_ok = contains(report, "CE ") && contains(report, "CE+BA ") &&
                       contains(report, "CE+BA+TS") && contains(report, "CE+TS");

  Outcome out;
  out.pass = count == 120 && acc_100 >= 0.95 && acc_direct >= 0.95 && rows_ok;
  out.detail = std::to_string(count) + " episodes, test accuracy " + fmt(acc_100) +
               " (100-step) and " + fmt(acc_direct) + " (direct) over " +
               std::to_string(scored) + " held-out episodes, threshold 0.95; 4 ablation rows " +
               (rows_ok ? "present" : "MISSING");
  return out;
}

// ---------------------------------------------------------------------------
// 3. Majority voting: brute-force oracle equivalence on random instances,
//    the undecided dead heat, and an accuracy win over the single-keyframe
//    baseline on noisy episodes.

Resolution oracle_vote(const std::vector<Track>& tracks, int keyframe, Pixel hand,
                       const VoteConfig& cfg) {
  Resolution res;
  res.frames_used = 2 * cfg.max_window + 1;
  for (int k = 0; k <= cfg.max_window; ++k) {
    std::vector<int> counts(tracks.size(), 0);
    int total = 0;
    for (std::size_t t = 0; t < tracks.size(); ++t) {
      if (cfg.class_blacklist.count(tracks[t].modal_class()) > 0) continue;
      if (tracks[t].last_confidence < cfg.min_confidence) continue;
      for (int f = keyframe - k; f <= keyframe + k; ++f) {
        const auto it = tracks[t].centers.find(f);
        if (it == tracks[t].centers.end()) continue;
        if (pixel_distance(it->second, hand) > cfg.hand_radius_px) continue;
        ++counts[t];
        ++total;
      }
    }
    int best = -1;
    int best_count = 0;
    for (std::size_t t = 0; t < tracks.size(); ++t) {
      if (counts[t] > best_count) {
        best = static_cast<int>(t);
        best_count = counts[t];
      }
    }
    if (best_count > 0 && 2 * best_count > total) {
      res.decided = true;
      res.track_id = tracks[static_cast<std::size_t>(best)].track_id;
      res.class_name = tracks[static_cast<std::size_t>(best)].modal_class();
      res.frames_used = 2 * k + 1;
      int best_gap = k + 1;
      for (int f = keyframe - k; f <= keyframe + k; ++f) {
        const auto it = tracks[static_cast<std::size_t>(best)].centers.find(f);
        if (it == tracks[static_cast<std::size_t>(best)].centers.end()) continue;
        if (pixel_distance(it->second, hand) > cfg.hand_radius_px) continue;
        const int gap = std::abs(f - keyframe);
        if (gap < best_gap) {
          best_gap = gap;
          res.position = it->second;
        }
      }
      return res;
    }
  }
  return res;
}

std::vector<Track> random_tracks(Rng& rng) {
  const std::vector<std::string> classes = {"apple", "banana", "cardboard box", "arm", "hand"};
  const int track_count = rng.uniform_int(1, 5);
  std::vector<Track> tracks;
  for (int t = 0; t < track_count; ++t) {
    Track track;
    track.track_id = t;
    const int presences = rng.uniform_int(1, 8);
    for (int i = 0; i < presences; ++i) {
      const int frame = rng.uniform_int(0, 20);
      const double radius =
          rng.uniform() < 0.6 ? rng.uniform(0.0, 55.0) : rng.uniform(65.0, 200.0);
      const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979);
      track.centers[frame] =
          Pixel{320.0 + radius * std::cos(angle), 320.0 + radius * std::sin(angle)};
    }
    const std::string primary = classes[static_cast<std::size_t>(rng.uniform_int(0, 4))];
    track.class_histogram[primary] = rng.uniform_int(1, 5);
    if (rng.uniform() < 0.3) {
      const std::string second = classes[static_cast<std::size_t>(rng.uniform_int(0, 4))];
      track.class_histogram[second] += rng.uniform_int(1, 5);
    }
    track.last_confidence = rng.uniform();
    tracks.push_back(std::move(track));
  }
  return tracks;
}

Outcome criterion_voting() {
  Rng rng(RngSeed{314});
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<Track> tracks = random_tracks(rng);
    VoteConfig cfg;
    cfg.max_window = rng.uniform_int(0, 3);
    cfg.min_confidence = rng.uniform(0.0, 0.6);
    const int keyframe = rng.uniform_int(0, 20);
    const Pixel hand{320.0, 320.0};

    const Resolution got = resolve_at_keyframe(tracks, keyframe, hand, cfg);
    const Resolution want = oracle_vote(tracks, keyframe, hand, cfg);
    bool same = got.decided == want.decided && got.frames_used == want.frames_used &&
                got.track_id == want.track_id;
    if (same && want.decided) {
      same = got.class_name == want.class_name && got.position.u == want.position.u &&
             got.position.v == want.position.v;
    }
    if (!same) ++mismatches;
  }

  // Dead heat: two clean tracks with identical appearance counts at every
  // window size never reach a strict majority.
  std::vector<Track> tied(2);
  for (int t = 0; t < 2; ++t) {
    tied[static_cast<std::size_t>(t)].track_id = t;
    tied[static_cast<std::size_t>(t)].class_histogram["apple"] = 1;
    tied[static_cast<std::size_t>(t)].last_confidence = 0.9;
    for (int f = 0; f <= 20; ++f) {
      tied[static_cast<std::size_t>(t)].centers[f] = Pixel{300.0 + 40.0 * t, 320.0};
    }
  }
  VoteConfig tie_cfg;
  tie_cfg.max_window = 10;
  const Resolution tie = resolve_at_keyframe(tied, 10, Pixel{320.0, 320.0}, tie_cfg);
  const bool tie_ok = !tie.decided && tie.track_id == -1 && tie.frames_used == 21;

  // Noisy identification: voting window 10 against the single-keyframe
  // baseline, correctness = resolved position within 25 px of the true
  // mover detection center at spawn.
  const TablePlane table = default_table();
  const CameraModel camera = default_camera(table);
  const std::vector<SceneObject> catalog = default_catalog();
  int vote_correct = 0;
  int base_correct = 0;
  const int episodes = 100;
  for (int seed = 1; seed <= episodes; ++seed) {
    std::vector<SceneObject> objects;
    objects.push_back(catalog[static_cast<std::size_t>(seed % 5)]);
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      if (static_cast<int>(i) != seed % 5) objects.push_back(catalog[i]);
    }
    const DemoOutcome demo =
        generate_demo(objects, RngSeed{static_cast<std::uint64_t>(seed)}, NoiseModel{}, camera,
                      table);
    const int keyframe = std::max(demo.script.boundaries[0] - 1, 0);
    const Pixel hand = *demo.episode.frames[static_cast<std::size_t>(keyframe)].gt_hand;
    const Pixel truth = project(demo.scene[0].position, camera);

    const std::vector<Track> tracks = associate_tracks(demo.episode, VoteConfig{});
    VoteConfig voting;
    VoteConfig baseline;
    baseline.max_window = 0;
    const Resolution with_vote = resolve_at_keyframe(tracks, keyframe, hand, voting);
    const Resolution without = resolve_at_keyframe(tracks, keyframe, hand, baseline);
    if (with_vote.decided && pixel_distance(with_vote.position, truth) <= 25.0) ++vote_correct;
    if (without.decided && pixel_distance(without.position, truth) <= 25.0) ++base_correct;
  }

  Outcome out;
  out.pass = mismatches == 0 && tie_ok && vote_correct > base_correct;
  out.detail = "oracle mismatches " + std::to_string(mismatches) +
               "/1000; dead heat at window 10 " + std::string(tie_ok ? "undecided" : "DECIDED") +
               "; noisy identification " + std::to_string(vote_correct) + "/100 voted vs " +
               std::to_string(base_correct) + "/100 single keyframe";
  return out;
}

// ---------------------------------------------------------------------------
// 4. Geometry: projection round trip over random table points.

Outcome criterion_geometry() {
  const TablePlane table = default_table();
  const CameraModel camera = default_camera(table);
  Rng rng(RngSeed{41});
  double worst = 0.0;
  bool exact_z = true;
  const int points = 10000;
  for (int i = 0; i < points; ++i) {
    Point3 p;
    p.x = rng.uniform(table.x_min, table.x_max);
    p.y = rng.uniform(table.y_min, table.y_max);
    p.z = table.height_m;
    const Point3 q = backproject(project(p, camera), camera, table);
    worst = std::max(worst, distance(p, q));
    exact_z = exact_z && q.z == table.height_m;
  }
  Outcome out;
  out.pass = worst < 1e-9 && exact_z;
  out.detail = "worst round-trip error " + fmt(worst, 12) + " m over 10000 table points, " +
               "tolerance 1e-9; backprojected z " +
               (exact_z ? "bit-exact at table height" : "NOT exact");
  return out;
}

// ---------------------------------------------------------------------------
// 5. Inverse kinematics: analytic two-link oracle, workspace convergence for
//    the 8-joint preset, and the finite-difference Jacobian check.

double jacobian_fd_error(const KinematicChain& chain, const JointConfig& q) {
  const Eigen::Matrix3Xd analytic = jacobian(chain, q);
  double worst = 0.0;
  const double h = 1e-7;
  for (int j = 0; j < chain.dof(); ++j) {
    JointConfig lo = q;
    JointConfig hi = q;
    lo.q[j] -= h;
    hi.q[j] += h;
    const Point3 a = fk(chain, lo).tool;
    const Point3 b = fk(chain, hi).tool;
    const Eigen::Vector3d fd{(b.x - a.x) / (2 * h), (b.y - a.y) / (2 * h),
                             (b.z - a.z) / (2 * h)};
    worst = std::max(worst, (analytic.col(j) - fd).norm());
  }
  return worst;
}

Outcome criterion_ik() {
  const IkSettings settings;
  Rng rng(RngSeed{55});

  const KinematicChain two = KinematicChain::two_link_planar();
  JointConfig zeros2;
  zeros2.q = Eigen::VectorXd::Zero(2);
  double worst_oracle = 0.0;
  double worst_two = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double r = rng.uniform(0.2, 1.95);
    const double theta = rng.uniform(-3.1, 3.1);
    const Point3 target{r * std::cos(theta), r * std::sin(theta), 0.0};

    const double c2 = std::clamp((r * r - 2.0) / 2.0, -1.0, 1.0);
    const double q2 = std::acos(c2);
    const double q1 = theta - std::atan2(std::sin(q2), 1.0 + std::cos(q2));
    JointConfig analytic;
    analytic.q = Eigen::Vector2d{q1, q2};
    worst_oracle = std::max(worst_oracle, distance(fk(two, analytic).tool, target));

    const JointConfig solved = solve_ik(two, target, zeros2, settings);
    worst_two = std::max(worst_two, distance(fk(two, solved).tool, target));
  }

  const KinematicChain arm = KinematicChain::nicol_like_8dof();
  JointConfig zeros8;
  zeros8.q = Eigen::VectorXd::Zero(arm.dof());
  int solved_count = 0;
  const int targets = 1000;
  for (int i = 0; i < targets; ++i) {
    const Point3 target{rng.uniform(0.25, 0.85), rng.uniform(-0.45, 0.45),
                        0.80 + rng.uniform(0.02, 0.25)};
    try {
      const JointConfig q = solve_ik(arm, target, zeros8, settings);
      if (distance(fk(arm, q).tool, target) < 1e-3) ++solved_count;
    } catch (const UnreachableTarget&) {
    }
  }

  double worst_jac = 0.0;
  for (const KinematicChain* chain : {&two, &arm}) {
    for (int i = 0; i < 100; ++i) {
      JointConfig q;
      q.q = Eigen::VectorXd(chain->dof());
      for (int j = 0; j < chain->dof(); ++j) {
        q.q[j] = rng.uniform(chain->joints[static_cast<std::size_t>(j)].limit_lo,
                             chain->joints[static_cast<std::size_t>(j)].limit_hi);
      }
      worst_jac = std::max(worst_jac, jacobian_fd_error(*chain, q));
    }
  }

  Outcome out;
  out.pass = worst_oracle < 1e-9 && worst_two < 1e-3 && solved_count >= 990 &&
             worst_jac < 1e-6;
  out.detail = "two-link fk error " + fmt(worst_two, 6) + " m (oracle sanity " +
               fmt(worst_oracle, 12) + "), tolerance 1e-3; 8-dof convergence " +
               std::to_string(solved_count) + "/1000 (need 990); Jacobian FD error " +
               fmt(worst_jac, 9) + ", tolerance 1e-6";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Noiseless closure: ground-truth timelines of clean demonstrations with
//    graspable movers must plan 16 steps and execute to imitation success.

struct EpisodeRun {
  PlanReport report;
  std::optional<ExecutionResult> result;
};

EpisodeRun run_episode(const DemoOutcome& demo, const LabelTimeline& timeline,
                       const PipelineConfig& cfg, const KinematicChain& chain,
                       const JointConfig& start, int seed) {
  EpisodeRun run;
  run.report = plan_from_timeline(demo.episode, timeline, cfg.vote,
                                  height_catalog_from(cfg.catalog), cfg.table, cfg.d_min,
                                  cfg.bounds_tol, cfg.hover);
  if (!run.report.has_plan()) return run;

  const Trajectory trajectory =
      plan_to_trajectory(chain, run.report.plan, start, cfg.ik, cfg.cart_step);
  ExecSettings settings;
  settings.grasp_radius = cfg.grasp_radius;
  settings.place_radius = cfg.place_radius;
  settings.moved_object_id = demo.script.moved_object_id;
  settings.expected_final = demo.script.place2;
  settings.push_seed = derive_seed(RngSeed{static_cast<std::uint64_t>(seed)}, 0x9054ull);
  run.result = execute(demo.scene, trajectory, chain, settings);
  return run;
}

Outcome criterion_closure() {
  const PipelineConfig cfg = default_config();
  const CameraModel camera = cfg.camera();
  const KinematicChain chain = cfg.chain();
  const JointConfig start = parked_start(chain, cfg);
  const std::vector<SceneObject> catalog = default_catalog();
  std::vector<SceneObject> graspable;
  for (const auto& obj : catalog) {
    if (obj.graspable) graspable.push_back(obj);
  }

  int good_plans = 0;
  int imitations = 0;
  std::vector<int> failures;
  const int episodes = 50;
  for (int seed = 1; seed <= episodes; ++seed) {
    const SceneObject& mover = graspable[static_cast<std::size_t>(seed) % graspable.size()];
    std::vector<SceneObject> objects{mover};
    for (const auto& obj : catalog) {
      if (obj.object_id != mover.object_id) objects.push_back(obj);
    }
    GenOptions opts;
    opts.clean_features = true;
    const DemoOutcome demo =
        generate_demo(objects, RngSeed{static_cast<std::uint64_t>(seed)}, NoiseModel::none(),
                      camera, cfg.table, opts);

    const EpisodeRun run =
        run_episode(demo, demo.episode.gt_timeline(), cfg, chain, start, seed);
    const bool plan_ok = run.report.has_plan() && run.report.plan.steps.size() == 16;
    bool exec_ok = false;
    if (plan_ok && run.result) {
      exec_ok = run.result->imitation_success && run.result->grasp_outcomes.size() == 2;
      for (const auto& g : run.result->grasp_outcomes) exec_ok = exec_ok && g.success;
    }
    good_plans += plan_ok;
    imitations += exec_ok;
    if (!(plan_ok && exec_ok)) failures.push_back(seed);
  }

  Outcome out;
  out.pass = good_plans == episodes && imitations == episodes;
  out.detail = std::to_string(good_plans) + "/50 sixteen-step plans, " +
               std::to_string(imitations) + "/50 imitation successes (need 50/50)";
  if (!failures.empty()) {
    out.detail += "; failing seeds:";
    for (std::size_t i = 0; i < failures.size() && i < 5; ++i) {
      out.detail += " " + std::to_string(failures[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 7. Noisy behavior: corrupted evidence must be rejected with a new
//    demonstration request, plans must never contradict their own
//    validations, and the execution rates are reported.

Episode strip_keyframe_detections(const Episode& episode, int keyframe, const VoteConfig& vote) {
  Episode corrupted = episode;
  const Pixel hand = *episode.frames[static_cast<std::size_t>(keyframe)].gt_hand;
  const int lo = keyframe - vote.max_window;
  const int hi = keyframe + vote.max_window;
  for (int f = std::max(lo, 0); f <= hi && f < episode.frame_count; ++f) {
    auto& detections = corrupted.frames[static_cast<std::size_t>(f)].detections;
    std::erase_if(detections, [&](const Detection& det) {
      return pixel_distance(det.center, hand) <= vote.hand_radius_px;
    });
  }
  return corrupted;
}

Episode shift_pixels(const Episode& episode, double du) {
  Episode corrupted = episode;
  for (auto& frame : corrupted.frames) {
    for (auto& det : frame.detections) det.center.u += du;
    if (frame.gt_hand) frame.gt_hand->u += du;
  }
  return corrupted;
}

LabelTimeline degenerate_timeline(const Episode& episode, int b0) {
  LabelTimeline timeline;
  timeline.labels.assign(static_cast<std::size_t>(episode.frame_count),
                         ActionLabel{kHandFree});
  timeline.labels[static_cast<std::size_t>(b0)] = ActionLabel{kObjectHeld};
  if (b0 + 1 < episode.frame_count) {
    timeline.labels[static_cast<std::size_t>(b0 + 1)] = ActionLabel{kObjectHeld};
  }
  return timeline;
}

bool biconditional_holds(const PlanReport& report) {
  bool all_passed = true;
  for (const auto& d : report.diagnostics) all_passed = all_passed && d.passed;
  const bool consistent = report.has_plan() == all_passed;
  const bool steps_match =
      !report.has_plan() || report.plan.steps.size() == 8 * report.diagnostics.size();
  return consistent && steps_match;
}

Outcome criterion_noisy() {
  const PipelineConfig cfg = default_config();
  const CameraModel camera = cfg.camera();
  const KinematicChain chain = cfg.chain();
  const JointConfig start = parked_start(chain, cfg);
  const std::vector<SceneObject> catalog = default_catalog();

  int corrupted_total = 0;
  int corrupted_rejected = 0;
  int biconditional_failures = 0;
  std::vector<ExecutionResult> executed;
  const int episodes = 100;
  for (int seed = 1; seed <= episodes; ++seed) {
    std::vector<SceneObject> objects;
    objects.push_back(catalog[static_cast<std::size_t>(seed % 5)]);
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      if (static_cast<int>(i) != seed % 5) objects.push_back(catalog[i]);
    }
    const DemoOutcome demo = generate_demo(
        objects, RngSeed{static_cast<std::uint64_t>(seed)}, NoiseModel{}, camera, cfg.table);
    const LabelTimeline timeline = demo.episode.gt_timeline();
    const int keyframe = std::max(demo.script.boundaries[0] - 1, 0);

    const EpisodeRun clean = run_episode(demo, timeline, cfg, chain, start, seed);
    biconditional_failures += !biconditional_holds(clean.report);
    if (clean.result) executed.push_back(*clean.result);

    PlanReport corrupted;
    switch (seed % 3) {
      case 0: {
        const Episode ep = strip_keyframe_detections(demo.episode, keyframe, cfg.vote);
        corrupted = plan_from_timeline(ep, timeline, cfg.vote, height_catalog_from(cfg.catalog),
                                       cfg.table, cfg.d_min, cfg.bounds_tol, cfg.hover);
        break;
      }
      case 1:
        corrupted = plan_from_timeline(demo.episode,
                                       degenerate_timeline(demo.episode,
                                                           demo.script.boundaries[0]),
                                       cfg.vote, height_catalog_from(cfg.catalog), cfg.table,
                                       cfg.d_min, cfg.bounds_tol, cfg.hover);
        break;
      default: {
        const Episode ep = shift_pixels(demo.episode, 2000.0);
        corrupted = plan_from_timeline(ep, timeline, cfg.vote, height_catalog_from(cfg.catalog),
                                       cfg.table, cfg.d_min, cfg.bounds_tol, cfg.hover);
        break;
      }
    }
    ++corrupted_total;
    corrupted_rejected += !corrupted.has_plan();
    biconditional_failures += !biconditional_holds(corrupted);
  }

  std::string rates = "no plans executed";
  if (!executed.empty()) {
    const RunSummary summary = score_run(executed);
    rates = "rates over " + std::to_string(executed.size()) + " executed plans: grasp " +
            fmt(summary.grasp_rate) + ", first grasp " + fmt(summary.first_grasp_rate) +
            ", second grasp " + fmt(summary.second_grasp_rate) + ", imitation " +
            fmt(summary.imitation_rate);
  }

  const double rejection = static_cast<double>(corrupted_rejected) / corrupted_total;
  Outcome out;
  out.pass = rejection >= 0.90 && biconditional_failures == 0;
  out.detail = "rejected " + std::to_string(corrupted_rejected) + "/" +
               std::to_string(corrupted_total) +
               " corrupted episodes (need 90%); biconditional violations " +
               std::to_string(biconditional_failures) + "; " + rates;
  return out;
}

// ---------------------------------------------------------------------------
// 8. Determinism: every CLI command, rerun with the same config and seed,
//    produces byte-identical machine-readable outputs.

std::map<std::string, std::string> run_pipeline_once(const fs::path& base) {
  fs::remove_all(base);
  fs::create_directories(base);

  PipelineConfig cfg = default_config();
  cfg.frame_count = 80;
  cfg.per_object = 2;
  cfg.denoiser.layers = 2;
  cfg.denoiser.width = 8;
  cfg.denoiser.feature_dim = 8;
  cfg.schedule_steps = 200;
  cfg.train.epochs = 8;
  cfg.train.learning_rate = 0.05;
  cfg.noise = NoiseModel::none();
  cfg.clean_features = true;
  cfg.master_seed = 11;
  const fs::path config = base / "tiny.toml";
  test_helpers::write_file(config, config_to_toml(cfg));
  const std::string with_config = " --config " + config.string();

  const fs::path data = base / "data";
  must("gen-dataset" + with_config + " --out-dir " + data.string());

  const json manifest = read_json_file(data / "manifest.json");
  fs::path episode;
  for (const auto& entry : manifest.at("episodes")) {
    const std::string mover = entry.at("moved_object_id").get<std::string>();
    for (const auto& obj : entry.at("scene")) {
      if (obj.at("id").get<std::string>() == mover && obj.at("graspable").get<bool>()) {
        episode = data / entry.at("file").get<std::string>();
        break;
      }
    }
    if (!episode.empty()) break;
  }
  if (episode.empty()) throw std::runtime_error("no graspable mover in the tiny dataset");

  const fs::path model = base / "model.bin";
  must("train" + with_config + " --data " + data.string() + " --out " + model.string());

  const fs::path timeline = base / "timeline.json";
  must("segment" + with_config + " --model " + model.string() + " --episode " +
       episode.string() + " --steps 100 --out " + timeline.string());

  const LabelTimeline gt = read_episode(episode).gt_timeline();
  json labels = json::array();
  for (const auto& label : gt.labels) labels.push_back(label.class_index);
  const fs::path gt_timeline = base / "gt_timeline.json";
  test_helpers::write_file(gt_timeline, json{{"labels", labels}}.dump(2) + "\n");

  const fs::path plan = base / "plan.json";
  must("plan" + with_config + " --episode " + episode.string() + " --timeline " +
       gt_timeline.string() + " --out " + plan.string());

  const fs::path exec_out = base / "exec.json";
  must("execute" + with_config + " --plan " + plan.string() + " --out " + exec_out.string());

  const fs::path report = base / "report.txt";
  must("eval" + with_config + " --data " + data.string() + " --model " + model.string() +
       " --out " + report.string());

  const fs::path svg = base / "render.svg";
  const fs::path txt = base / "render.txt";
  must("render-timeline --timeline " + timeline.string() + " --gt " + episode.string() +
       " --out " + svg.string());
  must("render-timeline --timeline " + timeline.string() + " --gt " + episode.string() +
       " --out " + txt.string());

  std::map<std::string, std::string> snapshot;
  snapshot["manifest.json"] = test_helpers::read_file(data / "manifest.json");
  for (const auto& entry : fs::directory_iterator(data)) {
    if (entry.path().extension() == ".jsonl") {
      snapshot[entry.path().filename().string()] = test_helpers::read_file(entry.path());
    }
  }
  fs::path csv = model;
  csv.replace_extension(".csv");
  snapshot["model.bin"] = test_helpers::read_file(model);
  snapshot["model.csv"] = test_helpers::read_file(csv);
  snapshot["timeline.json"] = test_helpers::read_file(timeline);
  snapshot["plan.json"] = test_helpers::read_file(plan);
  snapshot["exec.json"] = test_helpers::read_file(exec_out);
  snapshot["report.txt"] = test_helpers::read_file(report);
  snapshot["render.svg"] = test_helpers::read_file(svg);
  snapshot["render.txt"] = test_helpers::read_file(txt);
  return snapshot;
}

Outcome criterion_determinism() {
  const fs::path base = kScratch / "determinism";
  const auto first = run_pipeline_once(base);
  const auto second = run_pipeline_once(base);

  int differing = 0;
  std::string first_diff;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) {
      ++differing;
      if (first_diff.empty()) first_diff = name;
    }
  }
  if (second.size() != first.size()) ++differing;

  Outcome out;
  out.pass = differing == 0;
  out.detail = std::to_string(first.size()) + " machine-readable outputs from 7 commands " +
               (differing == 0 ? "byte-identical across reruns"
                               : "DIFFER (" + std::to_string(differing) + ", first: " +
                                     first_diff + ")");
  return out;
}

using Criterion = std::function<Outcome()>;

}  // namespace

int main() {
  fs::remove_all(kScratch);
  fs::create_directories(kScratch);

  struct Entry {
    std::string name;
    Criterion run;
    double budget_s;  // 0 = no budget
  };
  const std::vector<Entry> criteria = {
      {"diffusion gradients and q-sample statistics", criterion_diffusion, 60.0},
      {"segmentation protocol on the synthetic dataset", criterion_protocol, 900.0},
      {"majority voting oracle and noisy identification", criterion_voting, 120.0},
      {"pixel to table backprojection round trip", criterion_geometry, 0.0},
      {"inverse kinematics convergence", criterion_ik, 60.0},
      {"noiseless end-to-end closure", criterion_closure, 300.0},
      {"noisy rejection and validation biconditional", criterion_noisy, 0.0},
      {"CLI determinism", criterion_determinism, 0.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].budget_s > 0.0 && elapsed > criteria[i].budget_s) {
      outcome.pass = false;
      outcome.detail += "; over the " + fmt(criteria[i].budget_s, 0) + " s budget";
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << criteria[i].name
              << ": " << outcome.detail << " [" << fmt(elapsed, 1) << " s]" << std::endl;
  }

  std::cout << "acceptance: " << criteria.size() - failures << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
