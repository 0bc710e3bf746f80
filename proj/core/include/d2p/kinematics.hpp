#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "d2p/plan.hpp"
#include "d2p/types.hpp"

namespace d2p {

struct Joint {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d origin_offset = Eigen::Vector3d::Zero();
  double limit_lo = -3.14;
  double limit_hi = 3.14;
};

// Serial revolute chain. Forward kinematics composes, per joint,
// Translate(origin_offset) * Rotate(axis, q), starting from the base pose
// and finishing with the tool offset.
struct KinematicChain {
  std::string name;
  std::vector<Joint> joints;
  Eigen::Isometry3d base = Eigen::Isometry3d::Identity();
  Eigen::Vector3d tool_offset = Eigen::Vector3d::Zero();

  int dof() const { return static_cast<int>(joints.size()); }
  void validate() const;

  // Planar 2R test chain: two z-axis joints, 1 m links along x.
  static KinematicChain two_link_planar();

  // Desk stand-in for a redundant humanoid arm: 8 revolute joints with
  // alternating z/y axes, 1.1 m of links past the shoulder riser, base
  // raised to table level so the whole table workspace is reachable.
  static KinematicChain nicol_like_8dof();
};

struct JointConfig {
  Eigen::VectorXd q;
};

struct IkSettings {
  double damping = 0.05;
  double tol_pos = 1e-3;
  int max_iters = 200;
  double step_clip = 0.2;
  void validate() const;
};

struct FkResult {
  Point3 tool;
  Eigen::Isometry3d tool_pose = Eigen::Isometry3d::Identity();
};

// Throws ShapeError when q length differs from the chain's joint count.
FkResult fk(const KinematicChain& chain, const JointConfig& q);

// Position Jacobian (3 x N): column i = axis_i x (tool - joint_i origin),
// both expressed in the world frame at q.
Eigen::Matrix3Xd jacobian(const KinematicChain& chain, const JointConfig& q);

// Damped least squares: dq = J^T (J J^T + damping^2 I)^-1 e, per-component
// clipped to step_clip and clamped to joint limits each iteration. Returns
// once |e| < tol_pos. Throws UnreachableTarget (with the best residual) when
// iterations run out or the residual stalls (relative improvement < 1e-6
// over the last 20 iterations).
JointConfig solve_ik(const KinematicChain& chain, const Point3& target, const JointConfig& seed,
                     const IkSettings& settings);

struct TrajectoryLeg {
  StepKind kind = StepKind::kApproach;
  std::optional<std::string> object_id;
  std::vector<JointConfig> waypoints;  // empty for GRASP/RELEASE gripper events
};

using Trajectory = std::vector<TrajectoryLeg>;

// Straight-line Cartesian interpolation at spacing <= cart_step between plan
// targets, each waypoint solved by IK warm-started from the previous one.
// GRASP and RELEASE become motionless gripper legs. An unreachable waypoint
// aborts with PlanInfeasible naming the plan step.
Trajectory plan_to_trajectory(const KinematicChain& chain, const ActionPlan& plan,
                              const JointConfig& start_q, const IkSettings& settings,
                              double cart_step = 0.02);

}  // namespace d2p
