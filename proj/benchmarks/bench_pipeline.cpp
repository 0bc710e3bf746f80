// Microbenchmarks for the hot paths: denoiser forward pass, forward
// noising, backprojection, IK and track association.

#include <benchmark/benchmark.h>

#include <vector>

#include "d2p/denoiser.hpp"
#include "d2p/fusion.hpp"
#include "d2p/geometry.hpp"
#include "d2p/kinematics.hpp"
#include "d2p/rng.hpp"
#include "d2p/schedule.hpp"
#include "d2p/sim.hpp"

namespace {

using namespace d2p;

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  }
  return m;
}

void BM_DenoiserForward(benchmark::State& state) {
  const DenoiserConfig cfg;
  const DenoiserParams params = DenoiserParams::init(cfg, RngSeed{1});
  Rng rng(RngSeed{2});
  const int frames = 440;
  LabelSequence x_s;
  x_s.kind = SequenceKind::kContinuous;
  x_s.values = random_matrix(frames, cfg.classes, rng);
  const Eigen::MatrixXd cond = random_matrix(frames, cfg.feature_dim, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise(x_s, 500, cond, params));
  }
}
BENCHMARK(BM_DenoiserForward);

void BM_QSample(benchmark::State& state) {
  const NoiseSchedule sched = NoiseSchedule::cosine(1000);
  Rng rng(RngSeed{3});
  std::vector<int> labels(440);
  for (auto& l : labels) l = rng.bernoulli(0.5) ? 1 : 0;
  const LabelSequence gt = one_hot(labels, 2);
  const Eigen::MatrixXd noise = random_matrix(440, 2, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_sample(gt, 500, noise, sched));
  }
}
BENCHMARK(BM_QSample);

void BM_Backproject(benchmark::State& state) {
  const TablePlane table = default_table();
  const CameraModel camera = default_camera(table);
  const Pixel px{340.0, 300.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(backproject(px, camera, table));
  }
}
BENCHMARK(BM_Backproject);

void BM_SolveIk(benchmark::State& state) {
  const KinematicChain chain = KinematicChain::nicol_like_8dof();
  JointConfig seed;
  seed.q = Eigen::VectorXd::Zero(chain.dof());
  const IkSettings settings;
  const Point3 target{0.55, 0.1, 0.9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ik(chain, target, seed, settings));
  }
}
BENCHMARK(BM_SolveIk);

void BM_AssociateTracks(benchmark::State& state) {
  const TablePlane table = default_table();
  const CameraModel camera = default_camera(table);
  const DemoOutcome demo =
      generate_demo(default_catalog(), RngSeed{7}, NoiseModel{}, camera, table);
  const VoteConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(associate_tracks(demo.episode, cfg));
  }
}
BENCHMARK(BM_AssociateTracks);

}  // namespace

BENCHMARK_MAIN();
