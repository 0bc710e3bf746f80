#include <doctest/doctest.h>

#include <string>
#include <vector>

#include "d2p/errors.hpp"
#include "d2p/eval.hpp"
#include "d2p/train.hpp"
#include "helpers.hpp"

using namespace d2p;

namespace {

// Small, noiseless and fast: 80-frame demos, tiny model, two epochs of
// training are enough because the clean held flag is linearly decodable.
PipelineConfig tiny_config() {
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
  cfg.master_seed = 7;
  return cfg;
}

std::vector<DemoOutcome> tiny_dataset(const PipelineConfig& cfg) {
  GenOptions opts;
  opts.frame_count = cfg.frame_count;
  opts.fps = cfg.fps;
  opts.feature_dim = cfg.denoiser.feature_dim;
  opts.clean_features = cfg.clean_features;
  return gen_dataset(cfg.catalog, cfg.per_object, cfg.seed(), cfg.noise, cfg.camera(),
                     cfg.table, opts);
}

HeldSegment segment_at(int start, int end, Point3 grasp, Point3 release) {
  HeldSegment seg;
  seg.start_frame = start;
  seg.end_frame = end;
  Resolution res;
  res.decided = true;
  res.class_name = "metal can";
  seg.object = res;
  seg.grasp_point = grasp;
  seg.release_point = release;
  return seg;
}

}  // namespace

TEST_SUITE_BEGIN("eval");

TEST_CASE("ablation_rows lists the four loss combinations with reference numbers") {
  const std::vector<AblationRow> rows = ablation_rows(LossConfig{});
  REQUIRE(rows.size() == 4);

  CHECK(rows[0].label == "CE");
  CHECK(!rows[0].losses.use_ba);
  CHECK(!rows[0].losses.use_ts);
  CHECK(rows[0].reference_segmentation == 0.8919);
  CHECK(rows[0].reference_position == 0.8171);

  CHECK(rows[1].label == "CE+BA");
  CHECK(rows[1].losses.use_ba);
  CHECK(!rows[1].losses.use_ts);
  CHECK(rows[1].reference_segmentation == 0.8732);
  CHECK(rows[1].reference_position == 0.7777);

  CHECK(rows[2].label == "CE+BA+TS");
  CHECK(rows[2].losses.use_ba);
  CHECK(rows[2].losses.use_ts);
  CHECK(rows[2].reference_segmentation == 0.8748);
  CHECK(rows[2].reference_position == 0.7453);

  CHECK(rows[3].label == "CE+TS");
  CHECK(!rows[3].losses.use_ba);
  CHECK(rows[3].losses.use_ts);
  CHECK(rows[3].reference_segmentation == 0.8778);
  CHECK(rows[3].reference_position == 0.7314);

  for (const AblationRow& row : rows) CHECK(row.losses.use_ce);

  LossConfig custom;
  custom.lambda_ba = 0.7;
  CHECK(ablation_rows(custom)[1].losses.lambda_ba == 0.7);
}

TEST_CASE("position_score matches segments to cycles by overlap") {
  DemoScript script;
  script.boundaries = {10, 30, 50, 70};
  script.pick1 = {0.3, 0.0, 0.83};
  script.place1 = {0.5, 0.1, 0.83};
  script.pick2 = script.place1;
  script.place2 = {0.7, -0.2, 0.83};

  const std::vector<HeldSegment> perfect = {
      segment_at(10, 29, script.pick1, script.place1),
      segment_at(50, 69, script.pick2, script.place2),
  };
  CHECK(position_score(perfect, script, 0.05) == 1.0);

  // One release point off by more than the tolerance loses a quarter.
  std::vector<HeldSegment> off = perfect;
  off[1].release_point = Point3{0.7, -0.2 + 0.06, 0.83};
  CHECK(position_score(off, script, 0.05) == 0.75);

  // Within tolerance still counts.
  off[1].release_point = Point3{0.7, -0.2 + 0.04, 0.83};
  CHECK(position_score(off, script, 0.05) == 1.0);

  // A single segment can only serve one cycle; the other contributes zero.
  const std::vector<HeldSegment> lone = {segment_at(10, 29, script.pick1, script.place1)};
  CHECK(position_score(lone, script, 0.05) == 0.5);

  CHECK(position_score({}, script, 0.05) == 0.0);

  // Missing evidence scores zero for its half.
  std::vector<HeldSegment> missing = perfect;
  missing[0].grasp_point.reset();
  CHECK(position_score(missing, script, 0.05) == 0.75);
}

TEST_CASE("run_eval on a tiny noiseless dataset hits the ceiling") {
  const PipelineConfig cfg = tiny_config();
  const std::vector<DemoOutcome> dataset = tiny_dataset(cfg);
  REQUIRE(dataset.size() == 10);

  const NoiseSchedule schedule = cfg.schedule();
  std::vector<Episode> train_set;
  for (const DemoOutcome& demo : dataset) train_set.push_back(demo.episode);
  const DenoiserParams exec_model =
      train_segmenter(train_set, cfg.denoiser, schedule, LossConfig{}, cfg.train).params;

  const EvalReport report = run_eval(dataset, cfg, exec_model);
  CHECK(report.train_count == 8);
  CHECK(report.test_count == 2);
  CHECK(report.infer_steps == 100);
  CHECK(report.position_tol_m == 0.05);
  REQUIRE(report.rows.size() == 4);
  for (const AblationRow& row : report.rows) {
    CHECK(row.segmentation_accuracy >= 0.95);
    CHECK(row.position_accuracy >= 0.95);
  }
  CHECK(report.execution.episodes == 2);
  CHECK(report.execution.planned + report.execution.rejected == 2);

  const std::string text = format_report(report);
  for (const char* needle :
       {"CE+BA+TS", "grasp rate", "first grasp", "second grasp", "imitation"}) {
    CHECK(text.find(needle) != std::string::npos);
  }
  CHECK(text.find("0.8919") != std::string::npos);
  CHECK(text.find("published") != std::string::npos);
}

TEST_CASE("run_eval is deterministic") {
  const PipelineConfig cfg = tiny_config();
  const std::vector<DemoOutcome> dataset = tiny_dataset(cfg);
  std::vector<Episode> train_set;
  for (const DemoOutcome& demo : dataset) train_set.push_back(demo.episode);
  const DenoiserParams exec_model =
      train_segmenter(train_set, cfg.denoiser, cfg.schedule(), LossConfig{}, cfg.train).params;
  const EvalReport a = run_eval(dataset, cfg, exec_model);
  const EvalReport b = run_eval(dataset, cfg, exec_model);
  CHECK(format_report(a) == format_report(b));
}

TEST_CASE("run_eval rejects empty or degenerate datasets") {
  const PipelineConfig cfg = tiny_config();
  const DenoiserParams model = DenoiserParams::zeros_like(cfg.denoiser);
  CHECK_THROWS_AS(run_eval({}, cfg, model), EmptyDataset);

  PipelineConfig skewed = cfg;
  skewed.train_fraction = 0.99;
  const std::vector<DemoOutcome> two(2, tiny_dataset(cfg)[0]);
  CHECK_THROWS_AS(run_eval(two, skewed, model), EmptyDataset);
}

TEST_CASE("parked_start solves above the table center") {
  const PipelineConfig cfg = default_config();
  const KinematicChain chain = cfg.chain();
  const JointConfig start = parked_start(chain, cfg);
  const Point3 tool = fk(chain, start).tool;
  CHECK(tool.z > cfg.table.height_m);
  CHECK(in_bounds({tool.x, tool.y, cfg.table.height_m}, cfg.table, 1e-6));
}

TEST_SUITE_END();
