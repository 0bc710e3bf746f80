// Command-line front end: dataset generation, training, segmentation,
// planning, execution, evaluation and timeline rendering.
//
// Exit codes: 0 success, 2 usage or I/O trouble, 3 domain failure
// (infeasible plan, diverged training, unreachable target).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "d2p/checkpoint.hpp"
#include "d2p/config.hpp"
#include "d2p/episode_io.hpp"
#include "d2p/errors.hpp"
#include "d2p/eval.hpp"
#include "d2p/infer.hpp"
#include "d2p/kinematics.hpp"
#include "d2p/render.hpp"
#include "d2p/sim.hpp"
#include "d2p/train.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kTrainCmdTag = 0x7c11ull;
constexpr std::uint64_t kSegmentTag = 0x5e6dull;
constexpr std::uint64_t kPushTag = 0x9054ull;

struct CommonFlags {
  std::string config_path;
  d2p::PipelineConfig load() const {
    return config_path.empty() ? d2p::default_config() : d2p::load_config(config_path);
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw d2p::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw d2p::IoError("write to " + path.string() + " failed");
}

void write_json(const fs::path& path, const json& payload) {
  write_text(path, payload.dump(2) + "\n");
}

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw d2p::IoError("cannot open " + path.string());
  json payload;
  try {
    in >> payload;
  } catch (const json::parse_error& e) {
    throw d2p::ParseError(path.string() + ": " + e.what());
  }
  return payload;
}

json point_json(const d2p::Point3& p) { return json::array({p.x, p.y, p.z}); }

d2p::Point3 point_from(const json& arr) {
  if (!arr.is_array() || arr.size() != 3) throw d2p::ParseError("expected a 3-element point");
  return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

d2p::LabelTimeline timeline_from(const json& payload, const std::string& origin) {
  if (!payload.contains("labels") || !payload["labels"].is_array()) {
    throw d2p::ParseError(origin + ": timeline file lacks a labels array");
  }
  d2p::LabelTimeline timeline;
  for (const auto& v : payload["labels"]) {
    timeline.labels.push_back(d2p::ActionLabel{v.get<int>()});
  }
  return timeline;
}

d2p::LabelTimeline load_gt(const fs::path& path) {
  if (path.extension() == ".jsonl") return d2p::read_episode(path).gt_timeline();
  return timeline_from(read_json(path), path.string());
}

// One manifest entry: the episode file plus the generator truth needed to
// score and execute against the hidden scene.
struct ManifestEntry {
  std::string file;
  d2p::DemoScript script;
  std::vector<d2p::SceneObject> scene;
};

json entry_to_json(const d2p::DemoOutcome& demo, const std::string& file) {
  json scene = json::array();
  for (const auto& obj : demo.scene) {
    scene.push_back({{"id", obj.object_id},
                     {"class", obj.class_name},
                     {"radius", obj.footprint_radius},
                     {"height", obj.height},
                     {"graspable", obj.graspable},
                     {"position", point_json(obj.position)}});
  }
  return {{"file", file},
          {"id", demo.episode.id},
          {"moved_object_id", demo.script.moved_object_id},
          {"pick1", point_json(demo.script.pick1)},
          {"place1", point_json(demo.script.place1)},
          {"pick2", point_json(demo.script.pick2)},
          {"place2", point_json(demo.script.place2)},
          {"boundaries", demo.script.boundaries},
          {"timing_outlier", demo.script.timing_outlier},
          {"scene", scene}};
}

ManifestEntry entry_from_json(const json& e) {
  ManifestEntry entry;
  entry.file = e.at("file").get<std::string>();
  entry.script.moved_object_id = e.at("moved_object_id").get<std::string>();
  entry.script.pick1 = point_from(e.at("pick1"));
  entry.script.place1 = point_from(e.at("place1"));
  entry.script.pick2 = point_from(e.at("pick2"));
  entry.script.place2 = point_from(e.at("place2"));
  const auto& bounds = e.at("boundaries");
  for (std::size_t i = 0; i < 4; ++i) entry.script.boundaries[i] = bounds.at(i).get<int>();
  entry.script.timing_outlier = e.at("timing_outlier").get<bool>();
  for (const auto& o : e.at("scene")) {
    d2p::SceneObject obj;
    obj.object_id = o.at("id").get<std::string>();
    obj.class_name = o.at("class").get<std::string>();
    obj.footprint_radius = o.at("radius").get<double>();
    obj.height = o.at("height").get<double>();
    obj.graspable = o.at("graspable").get<bool>();
    obj.position = point_from(o.at("position"));
    entry.scene.push_back(std::move(obj));
  }
  return entry;
}

std::vector<ManifestEntry> read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) {
    throw d2p::IoError("no manifest.json in " + dir.string() +
                       "; generate the dataset with gen-dataset first");
  }
  const json manifest = read_json(path);
  std::vector<ManifestEntry> entries;
  for (const auto& e : manifest.at("episodes")) entries.push_back(entry_from_json(e));
  return entries;
}

// Episodes in manifest order when a manifest exists, otherwise every
// *.jsonl in the directory sorted by name. One canonical order keeps the
// train/test split identical across commands.
std::vector<d2p::Episode> load_episodes(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::exists(dir / "manifest.json")) {
    for (const auto& entry : read_manifest(dir)) files.push_back(dir / entry.file);
  } else {
    if (!fs::is_directory(dir)) throw d2p::IoError(dir.string() + " is not a directory");
    for (const auto& it : fs::directory_iterator(dir)) {
      if (it.path().extension() == ".jsonl") files.push_back(it.path());
    }
    std::sort(files.begin(), files.end());
  }
  if (files.empty()) throw d2p::EmptyDataset("no episodes found in " + dir.string());
  std::vector<d2p::Episode> episodes;
  episodes.reserve(files.size());
  for (const auto& file : files) episodes.push_back(d2p::read_episode(file));
  return episodes;
}

std::vector<d2p::DemoOutcome> load_outcomes(const fs::path& dir) {
  std::vector<d2p::DemoOutcome> outcomes;
  for (const auto& entry : read_manifest(dir)) {
    d2p::DemoOutcome demo;
    demo.episode = d2p::read_episode(dir / entry.file);
    demo.script = entry.script;
    demo.scene = entry.scene;
    outcomes.push_back(std::move(demo));
  }
  return outcomes;
}

d2p::GenOptions gen_options(const d2p::PipelineConfig& cfg) {
  d2p::GenOptions opts;
  opts.frame_count = cfg.frame_count;
  opts.fps = cfg.fps;
  opts.feature_dim = cfg.denoiser.feature_dim;
  opts.clean_features = cfg.clean_features;
  return opts;
}

int cmd_gen_dataset(const CommonFlags& common, const std::string& out_dir,
                    std::optional<int> per_object, std::optional<std::uint64_t> seed) {
  d2p::PipelineConfig cfg = common.load();
  if (per_object) cfg.per_object = *per_object;
  if (seed) cfg.master_seed = *seed;
  if (cfg.per_object < 1) throw d2p::DomainError("--per-object must be >= 1");

  const auto demos = d2p::gen_dataset(cfg.catalog, cfg.per_object, cfg.seed(), cfg.noise,
                                      cfg.camera(), cfg.table, gen_options(cfg));

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw d2p::IoError("cannot create " + out_dir + ": " + ec.message());

  json episodes = json::array();
  for (const auto& demo : demos) {
    const std::string file = demo.episode.id + ".jsonl";
    d2p::write_episode(demo.episode, fs::path(out_dir) / file);
    episodes.push_back(entry_to_json(demo, file));
  }
  json manifest = {{"dataset", "d2p-demonstrations"},
                   {"seed", cfg.master_seed},
                   {"per_object", cfg.per_object},
                   {"episode_count", demos.size()},
                   {"episodes", episodes}};
  write_json(fs::path(out_dir) / "manifest.json", manifest);
  std::cout << "wrote " << demos.size() << " episodes to " << out_dir << "\n";
  return 0;
}

d2p::LossConfig losses_from_flag(const d2p::PipelineConfig& cfg, const std::string& spec) {
  std::set<std::string> parts;
  std::stringstream stream(spec);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token != "ce" && token != "ba" && token != "ts") {
      throw d2p::DomainError("--losses accepts ce[,ba][,ts], got '" + token + "'");
    }
    parts.insert(token);
  }
  if (parts.count("ce") == 0) throw d2p::DomainError("--losses must include ce");
  d2p::LossConfig losses = cfg.loss;
  losses.use_ce = true;
  losses.use_ba = parts.count("ba") > 0;
  losses.use_ts = parts.count("ts") > 0;
  return losses;
}

int cmd_train(const CommonFlags& common, const std::string& data_dir, const std::string& losses,
              const std::string& out_path) {
  const d2p::PipelineConfig cfg = common.load();
  const d2p::LossConfig loss_cfg = losses_from_flag(cfg, losses);
  const auto episodes = load_episodes(data_dir);
  auto [train_set, test_set] =
      d2p::split_dataset(episodes, cfg.train_fraction, d2p::protocol_split_seed(cfg));

  d2p::TrainHyper hyper = cfg.train;
  hyper.seed = d2p::derive_seed(cfg.seed(), kTrainCmdTag);
  const d2p::TrainResult result =
      d2p::train_segmenter(train_set, cfg.denoiser, cfg.schedule(), loss_cfg, hyper);

  d2p::save_checkpoint(out_path, result.params, cfg.schedule_steps);

  std::ostringstream log;
  log.precision(17);
  log << "step,ce,ba,ts,total\n";
  for (const auto& row : result.log) {
    log << row.step << ',' << row.ce << ',' << row.ba << ',' << row.ts << ',' << row.total
        << '\n';
  }
  fs::path log_path(out_path);
  log_path.replace_extension(".csv");
  write_text(log_path, log.str());

  std::cout << "trained on " << train_set.size() << " episodes (" << result.log.size()
            << " steps, " << test_set.size() << " held out); checkpoint " << out_path << "\n";
  return 0;
}

std::vector<int> steps_from_flag(const std::string& spec, int total_steps) {
  if (spec == "direct") return d2p::evenly_spaced_steps(total_steps, 1);
  int count = 0;
  try {
    count = std::stoi(spec);
  } catch (const std::exception&) {
    throw d2p::DomainError("--steps takes 'direct' or a step count, got '" + spec + "'");
  }
  return d2p::evenly_spaced_steps(total_steps, count);
}

int cmd_segment(const CommonFlags& common, const std::string& model_path,
                const std::string& episode_path, const std::string& steps_flag,
                const std::string& out_path) {
  const d2p::PipelineConfig cfg = common.load();
  const d2p::Checkpoint checkpoint = d2p::load_checkpoint(model_path);
  const d2p::Episode episode = d2p::read_episode(episode_path);
  const d2p::NoiseSchedule schedule =
      d2p::NoiseSchedule::cosine(checkpoint.schedule_steps, cfg.schedule_scale);
  const std::vector<int> steps = steps_from_flag(steps_flag, schedule.total_steps);

  const d2p::InferResult result =
      d2p::infer_timeline(d2p::feature_matrix(episode), checkpoint.params, schedule, steps,
                          d2p::derive_seed(cfg.seed(), kSegmentTag));

  json labels = json::array();
  for (const auto& label : result.timeline.labels) labels.push_back(label.class_index);
  json payload = {{"episode_id", episode.id},
                  {"episode_file", episode_path},
                  {"inference_steps", steps.size()},
                  {"labels", labels}};
  if (episode.has_gt_labels()) {
    payload["frame_accuracy"] = d2p::frame_accuracy(result.timeline, episode.gt_timeline());
  }
  write_json(out_path, payload);
  std::cout << "segmented " << episode.id << " (" << steps.size() << " steps)";
  if (payload.contains("frame_accuracy")) {
    std::cout << ", frame accuracy " << payload["frame_accuracy"].get<double>();
  }
  std::cout << "\n";
  return 0;
}

int cmd_plan(const CommonFlags& common, const std::string& episode_path,
             const std::string& timeline_path, const std::string& out_path) {
  const d2p::PipelineConfig cfg = common.load();
  const d2p::Episode episode = d2p::read_episode(episode_path);
  const d2p::LabelTimeline timeline =
      timeline_from(read_json(timeline_path), timeline_path);
  if (timeline.size() != episode.frame_count) {
    throw d2p::SchemaError("timeline length does not match the episode frame count");
  }

  const d2p::HeightCatalog heights = d2p::height_catalog_from(cfg.catalog);
  const d2p::PlanReport report =
      d2p::plan_from_timeline(episode, timeline, cfg.vote, heights, cfg.table, cfg.d_min,
                              cfg.bounds_tol, cfg.hover);

  json diagnostics = json::array();
  for (const auto& d : report.diagnostics) {
    json item = {{"segment", d.segment_index}, {"passed", d.passed}, {"message", d.message}};
    if (d.failure) item["failure"] = d2p::to_string(*d.failure);
    diagnostics.push_back(item);
  }
  json payload = {{"episode_id", episode.id}, {"episode_file", episode_path}};
  if (report.has_plan()) {
    json steps = json::array();
    for (const auto& step : report.plan.steps) {
      json item = {{"kind", d2p::to_string(step.kind)}, {"target", point_json(step.target)}};
      if (step.object_id) item["object_id"] = *step.object_id;
      steps.push_back(item);
    }
    payload["steps"] = steps;
  } else {
    payload["request_new_demonstration"] = true;
    payload["reasons"] = report.reasons;
  }
  payload["diagnostics"] = diagnostics;
  write_json(out_path, payload);

  if (report.has_plan()) {
    std::cout << "plan with " << report.plan.steps.size() << " steps -> " << out_path << "\n";
  } else {
    std::cout << "requesting a new demonstration (" << report.reasons.size() << " reasons) -> "
              << out_path << "\n";
  }
  return 0;
}

int cmd_execute(const CommonFlags& common, const std::string& plan_path,
                const std::string& out_path) {
  const d2p::PipelineConfig cfg = common.load();
  const json plan_json = read_json(plan_path);
  if (plan_json.value("request_new_demonstration", false)) {
    throw d2p::PlanInfeasible("plan requests a new demonstration; nothing to execute", 0);
  }
  if (!plan_json.contains("steps")) {
    throw d2p::ParseError(plan_path + ": plan has neither steps nor a demonstration request");
  }

  d2p::ActionPlan plan;
  for (const auto& s : plan_json["steps"]) {
    d2p::PlanStep step;
    const std::string kind = s.at("kind").get<std::string>();
    bool known = false;
    for (int k = 0; k <= static_cast<int>(d2p::StepKind::kRetreat); ++k) {
      if (d2p::to_string(static_cast<d2p::StepKind>(k)) == kind) {
        step.kind = static_cast<d2p::StepKind>(k);
        known = true;
        break;
      }
    }
    if (!known) throw d2p::ParseError(plan_path + ": unknown step kind " + kind);
    step.target = point_from(s.at("target"));
    if (s.contains("object_id")) step.object_id = s["object_id"].get<std::string>();
    plan.steps.push_back(std::move(step));
  }

  const std::string episode_id = plan_json.at("episode_id").get<std::string>();
  const fs::path episode_file = plan_json.at("episode_file").get<std::string>();
  const auto manifest = read_manifest(episode_file.parent_path());
  const ManifestEntry* entry = nullptr;
  std::size_t index = 0;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    if (manifest[i].file == episode_file.filename().string()) {
      entry = &manifest[i];
      index = i;
      break;
    }
  }
  if (entry == nullptr) {
    throw d2p::IoError("episode " + episode_id + " not listed in the dataset manifest");
  }

  const d2p::KinematicChain chain = cfg.chain();
  const d2p::Trajectory trajectory =
      d2p::plan_to_trajectory(chain, plan, d2p::parked_start(chain, cfg), cfg.ik, cfg.cart_step);

  d2p::ExecSettings settings;
  settings.grasp_radius = cfg.grasp_radius;
  settings.place_radius = cfg.place_radius;
  settings.moved_object_id = entry->script.moved_object_id;
  settings.expected_final = entry->script.place2;
  settings.push_seed = d2p::derive_seed(d2p::derive_seed(cfg.seed(), kPushTag), index);

  const d2p::ExecutionResult result = d2p::execute(entry->scene, trajectory, chain, settings);

  json grasps = json::array();
  for (const auto& g : result.grasp_outcomes) {
    grasps.push_back({{"success", g.success}, {"position_error_m", g.position_error_m}});
  }
  json finals = json::object();
  for (const auto& [id, position] : result.final_object_positions) {
    finals[id] = point_json(position);
  }
  json events = json::array();
  for (const auto& e : result.events) {
    events.push_back({{"leg", e.leg_index}, {"kind", e.kind}, {"detail", e.detail}});
  }
  write_json(out_path, json{{"episode_id", episode_id},
                            {"imitation_success", result.imitation_success},
                            {"grasp_outcomes", grasps},
                            {"final_object_positions", finals},
                            {"events", events}});
  std::cout << "imitation " << (result.imitation_success ? "succeeded" : "failed") << " ("
            << grasps.size() << " grasps) -> " << out_path << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& common, const std::string& data_dir,
             const std::string& model_path, const std::string& out_path) {
  const d2p::PipelineConfig cfg = common.load();
  const auto outcomes = load_outcomes(data_dir);
  const d2p::Checkpoint checkpoint = d2p::load_checkpoint(model_path);
  const d2p::EvalReport report = d2p::run_eval(outcomes, cfg, checkpoint.params);
  const std::string text = d2p::format_report(report);
  write_text(out_path, text);
  std::cout << text;
  return 0;
}

int cmd_render(const std::string& timeline_path, const std::string& gt_path,
               const std::string& out_path) {
  const d2p::LabelTimeline timeline = timeline_from(read_json(timeline_path), timeline_path);
  std::optional<d2p::LabelTimeline> gt;
  if (!gt_path.empty()) gt = load_gt(gt_path);
  const bool svg = fs::path(out_path).extension() == ".svg";
  write_text(out_path,
             svg ? d2p::render_timeline_svg(timeline, gt) : d2p::render_timeline_txt(timeline, gt));
  std::cout << "rendered " << (svg ? "svg" : "txt") << " -> " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demonstration-to-imitation pipeline for a desk-scale tabletop robot"};
  app.require_subcommand(1);

  CommonFlags common;
  std::function<int()> run;

  auto add_config = [&common](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "Pipeline config file (TOML)");
  };

  {
    auto* cmd = app.add_subcommand("gen-dataset", "Generate a synthetic demonstration dataset");
    add_config(cmd);
    auto out_dir = std::make_shared<std::string>();
    auto per_object = std::make_shared<int>(-1);
    auto seed = std::make_shared<std::uint64_t>(0);
    cmd->add_option("--out-dir", *out_dir, "Output directory")->required();
    auto* per_opt = cmd->add_option("--per-object", *per_object, "Episodes per catalog object");
    auto* seed_opt = cmd->add_option("--seed", *seed, "Master seed override");
    cmd->callback([&, cmd, out_dir, per_object, seed, per_opt, seed_opt] {
      run = [&, out_dir, per_object, seed, per_opt, seed_opt] {
        return cmd_gen_dataset(common, *out_dir,
                               per_opt->count() ? std::optional<int>(*per_object) : std::nullopt,
                               seed_opt->count() ? std::optional<std::uint64_t>(*seed)
                                                 : std::nullopt);
      };
    });
  }
  {
    auto* cmd = app.add_subcommand("train", "Train the diffusion segmenter on the 80% split");
    add_config(cmd);
    auto data = std::make_shared<std::string>();
    auto losses = std::make_shared<std::string>("ce");
    auto out = std::make_shared<std::string>();
    cmd->add_option("--data", *data, "Dataset directory")->required();
    cmd->add_option("--losses", *losses, "Loss combination: ce[,ba][,ts]");
    cmd->add_option("--out", *out, "Checkpoint path")->required();
    cmd->callback([&, data, losses, out] {
      run = [&, data, losses, out] { return cmd_train(common, *data, *losses, *out); };
    });
  }
  {
    auto* cmd = app.add_subcommand("segment", "Label every frame of an episode");
    add_config(cmd);
    auto model = std::make_shared<std::string>();
    auto episode = std::make_shared<std::string>();
    auto steps = std::make_shared<std::string>("100");
    auto out = std::make_shared<std::string>();
    cmd->add_option("--model", *model, "Checkpoint path")->required();
    cmd->add_option("--episode", *episode, "Episode JSONL file")->required();
    cmd->add_option("--steps", *steps, "'direct' or an inference step count");
    cmd->add_option("--out", *out, "Timeline JSON output")->required();
    cmd->callback([&, model, episode, steps, out] {
      run = [&, model, episode, steps, out] {
        return cmd_segment(common, *model, *episode, *steps, *out);
      };
    });
  }
  {
    auto* cmd = app.add_subcommand("plan", "Fuse, ground, validate and synthesize a plan");
    add_config(cmd);
    auto episode = std::make_shared<std::string>();
    auto timeline = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--episode", *episode, "Episode JSONL file")->required();
    cmd->add_option("--timeline", *timeline, "Timeline JSON from segment")->required();
    cmd->add_option("--out", *out, "Plan JSON output")->required();
    cmd->callback([&, episode, timeline, out] {
      run = [&, episode, timeline, out] { return cmd_plan(common, *episode, *timeline, *out); };
    });
  }
  {
    auto* cmd = app.add_subcommand("execute", "Run a plan through IK and the simulator");
    add_config(cmd);
    auto plan = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--plan", *plan, "Plan JSON from plan")->required();
    cmd->add_option("--out", *out, "Result JSON output")->required();
    cmd->callback([&, plan, out] {
      run = [&, plan, out] { return cmd_execute(common, *plan, *out); };
    });
  }
  {
    auto* cmd = app.add_subcommand("eval", "Loss ablation table plus grasp/imitation rates");
    add_config(cmd);
    auto data = std::make_shared<std::string>();
    auto model = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--data", *data, "Dataset directory (with manifest)")->required();
    cmd->add_option("--model", *model, "Checkpoint for the execution summary")->required();
    cmd->add_option("--out", *out, "Report text output")->required();
    cmd->callback([&, data, model, out] {
      run = [&, data, model, out] { return cmd_eval(common, *data, *model, *out); };
    });
  }
  {
    auto* cmd = app.add_subcommand("render-timeline", "Draw a timeline as SVG or text bars");
    auto timeline = std::make_shared<std::string>();
    auto gt = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--timeline", *timeline, "Timeline JSON")->required();
    cmd->add_option("--gt", *gt, "Ground truth: episode JSONL or timeline JSON");
    cmd->add_option("--out", *out, "Output file; .svg for SVG, anything else text")->required();
    cmd->callback([&, timeline, gt, out] {
      run = [&, timeline, gt, out] { return cmd_render(*timeline, *gt, *out); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run ? run() : 2;
  } catch (const d2p::PlanInfeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const d2p::UnreachableTarget& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const d2p::PlanObjectMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const d2p::DivergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const d2p::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
