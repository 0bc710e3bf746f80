#pragma once

#include <optional>
#include <string>
#include <vector>

#include "d2p/config.hpp"
#include "d2p/denoiser.hpp"
#include "d2p/kinematics.hpp"
#include "d2p/plan.hpp"
#include "d2p/sim.hpp"

namespace d2p {

// Seed of the 80/20 protocol split. The train command and the evaluation
// both derive it from the master seed so they see the same partition.
RngSeed protocol_split_seed(const PipelineConfig& cfg);

// Start configuration for executing plans: parked above the table center,
// solved by IK from zero; falls back to all-zero joints when that target is
// out of reach (custom chains).
JointConfig parked_start(const KinematicChain& chain, const PipelineConfig& cfg);

// Fusion, grounding, validation and synthesis in one call, shared by the
// plan command, the eval report and the end-to-end tests. `table` supplies
// the workspace bounds; its height is overridden by the episode header.
PlanReport plan_from_timeline(const Episode& episode, const LabelTimeline& timeline,
                              const VoteConfig& vote, const HeightCatalog& heights,
                              const TablePlane& table, double d_min, double bounds_tol,
                              double hover);

struct AblationRow {
  std::string label;
  LossConfig losses;
  double segmentation_accuracy = 0.0;
  double position_accuracy = 0.0;
  double reference_segmentation = 0.0;  // published result on real video
  double reference_position = 0.0;
};

// The four loss combinations of the original study, reference numbers
// included. `base` supplies the lambda/clip/sigma knobs.
std::vector<AblationRow> ablation_rows(const LossConfig& base);

struct ExecutionSummary {
  int episodes = 0;    // test episodes driven end to end
  int planned = 0;     // produced a plan
  int rejected = 0;    // requested a new demonstration instead
  int infeasible = 0;  // plan existed but IK or object lookup failed
  RunSummary rates;    // over every planned episode
};

struct EvalReport {
  int train_count = 0;
  int test_count = 0;
  int infer_steps = 0;
  double position_tol_m = 0.0;
  std::vector<AblationRow> rows;
  ExecutionSummary execution;
};

// The full evaluation protocol: split the dataset, train one model per loss
// combination, score segmentation and position accuracy on the test split
// with 100-step inference, then drive `exec_model` through planning, IK and
// simulated execution for the grasp/imitation summary. Deterministic given
// the config seed. Throws EmptyDataset when either split comes up empty.
EvalReport run_eval(const std::vector<DemoOutcome>& dataset, const PipelineConfig& cfg,
                    const DenoiserParams& exec_model);

// Position-detection accuracy of one episode's grounded segments against the
// generator script: each true cycle contributes its grasp and release point,
// counted correct when the matching grounded point (segments matched to
// cycles by frame overlap) lies within tol meters. Returns correct / 4.
double position_score(const std::vector<HeldSegment>& grounded, const DemoScript& script,
                      double tol);

// Fixed-width report: the ablation table with the published reference
// numbers alongside, then the grasp/imitation rates.
std::string format_report(const EvalReport& report);

}  // namespace d2p
