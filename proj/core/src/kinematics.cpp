#include "d2p/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

struct FrameWalk {
  Eigen::Vector3d tool = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> joint_origins;
  std::vector<Eigen::Vector3d> joint_axes;  // world frame
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();
};

FrameWalk walk_chain(const KinematicChain& chain, const Eigen::VectorXd& q) {
  if (q.size() != chain.dof()) {
    throw ShapeError("joint vector length " + std::to_string(q.size()) +
                     " does not match chain dof " + std::to_string(chain.dof()));
  }
  FrameWalk walk;
  walk.pose = chain.base;
  walk.joint_origins.reserve(chain.joints.size());
  walk.joint_axes.reserve(chain.joints.size());
  for (int i = 0; i < chain.dof(); ++i) {
    const Joint& joint = chain.joints[static_cast<std::size_t>(i)];
    walk.pose = walk.pose * Eigen::Translation3d(joint.origin_offset);
    walk.joint_origins.push_back(walk.pose.translation());
    walk.joint_axes.push_back(walk.pose.rotation() * joint.axis);
    walk.pose = walk.pose * Eigen::AngleAxisd(q[i], joint.axis);
  }
  walk.tool = walk.pose * chain.tool_offset;
  return walk;
}

Eigen::VectorXd clamp_to_limits(const KinematicChain& chain, Eigen::VectorXd q) {
  for (int i = 0; i < chain.dof(); ++i) {
    const Joint& joint = chain.joints[static_cast<std::size_t>(i)];
    q[i] = std::clamp(q[i], joint.limit_lo, joint.limit_hi);
  }
  return q;
}

}  // namespace

void KinematicChain::validate() const {
  if (joints.empty()) throw ShapeError("chain needs at least one joint");
  for (const Joint& joint : joints) {
    if (std::abs(joint.axis.norm() - 1.0) > 1e-9) {
      throw DomainError("joint axis must be unit length");
    }
    if (!(joint.limit_lo < joint.limit_hi)) {
      throw DomainError("joint limits must satisfy lo < hi");
    }
  }
}

void IkSettings::validate() const {
  if (damping <= 0.0 || tol_pos <= 0.0 || step_clip <= 0.0) {
    throw DomainError("IK settings must be positive");
  }
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
}

KinematicChain KinematicChain::two_link_planar() {
  KinematicChain chain;
  chain.name = "two-link-planar";
  chain.joints.push_back({Eigen::Vector3d::UnitZ(), Eigen::Vector3d::Zero(), -3.14, 3.14});
  chain.joints.push_back({Eigen::Vector3d::UnitZ(), Eigen::Vector3d(1.0, 0.0, 0.0), -3.14, 3.14});
  chain.tool_offset = Eigen::Vector3d(1.0, 0.0, 0.0);
  return chain;
}

KinematicChain KinematicChain::nicol_like_8dof() {
  KinematicChain chain;
  chain.name = "nicol-like-8dof";
  chain.base = Eigen::Isometry3d(Eigen::Translation3d(0.0, 0.0, 0.8));
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d y = Eigen::Vector3d::UnitY();
  const double lo = -2.9;
  const double hi = 2.9;
  chain.joints.push_back({z, Eigen::Vector3d(0.0, 0.0, 0.0), lo, hi});
  chain.joints.push_back({y, Eigen::Vector3d(0.0, 0.0, 0.25), lo, hi});
  chain.joints.push_back({z, Eigen::Vector3d(0.25, 0.0, 0.0), lo, hi});
  chain.joints.push_back({y, Eigen::Vector3d(0.20, 0.0, 0.0), lo, hi});
  chain.joints.push_back({z, Eigen::Vector3d(0.20, 0.0, 0.0), lo, hi});
  chain.joints.push_back({y, Eigen::Vector3d(0.15, 0.0, 0.0), lo, hi});
  chain.joints.push_back({z, Eigen::Vector3d(0.10, 0.0, 0.0), lo, hi});
  chain.joints.push_back({y, Eigen::Vector3d(0.10, 0.0, 0.0), lo, hi});
  chain.tool_offset = Eigen::Vector3d(0.10, 0.0, 0.0);
  return chain;
}

FkResult fk(const KinematicChain& chain, const JointConfig& q) {
  const FrameWalk walk = walk_chain(chain, q.q);
  FkResult result;
  result.tool = Point3{walk.tool.x(), walk.tool.y(), walk.tool.z()};
  result.tool_pose = walk.pose * Eigen::Translation3d(chain.tool_offset);
  return result;
}

Eigen::Matrix3Xd jacobian(const KinematicChain& chain, const JointConfig& q) {
  const FrameWalk walk = walk_chain(chain, q.q);
  Eigen::Matrix3Xd jac(3, chain.dof());
  for (int i = 0; i < chain.dof(); ++i) {
    const Eigen::Vector3d& axis = walk.joint_axes[static_cast<std::size_t>(i)];
    const Eigen::Vector3d lever = walk.tool - walk.joint_origins[static_cast<std::size_t>(i)];
    jac.col(i) = axis.cross(lever);
  }
  return jac;
}

JointConfig solve_ik(const KinematicChain& chain, const Point3& target, const JointConfig& seed,
                     const IkSettings& settings) {
  chain.validate();
  settings.validate();
  const Eigen::Vector3d goal(target.x, target.y, target.z);

  Eigen::VectorXd q = clamp_to_limits(chain, seed.q);
  double best_residual = std::numeric_limits<double>::infinity();
  std::deque<double> window;

  for (int iter = 0; iter <= settings.max_iters; ++iter) {
    const FrameWalk walk = walk_chain(chain, q);
    const Eigen::Vector3d error = goal - walk.tool;
    const double residual = error.norm();
    best_residual = std::min(best_residual, residual);
    if (residual < settings.tol_pos) return JointConfig{q};
    if (iter == settings.max_iters) break;

    window.push_back(residual);
    if (window.size() > 21) window.pop_front();
    if (window.size() == 21) {
      const double past = window.front();
      if (past - residual < 1e-6 * past) break;
    }

    Eigen::Matrix3Xd jac(3, chain.dof());
    for (int i = 0; i < chain.dof(); ++i) {
      const Eigen::Vector3d& axis = walk.joint_axes[static_cast<std::size_t>(i)];
      jac.col(i) = axis.cross(walk.tool - walk.joint_origins[static_cast<std::size_t>(i)]);
    }
    const Eigen::Matrix3d gram =
        jac * jac.transpose() + settings.damping * settings.damping * Eigen::Matrix3d::Identity();
    Eigen::VectorXd dq = jac.transpose() * gram.ldlt().solve(error);
    dq = dq.cwiseMax(-settings.step_clip).cwiseMin(settings.step_clip);
    q = clamp_to_limits(chain, q + dq);
  }

  throw UnreachableTarget("IK failed to reach (" + std::to_string(target.x) + ", " +
                              std::to_string(target.y) + ", " + std::to_string(target.z) + ")",
                          best_residual);
}

Trajectory plan_to_trajectory(const KinematicChain& chain, const ActionPlan& plan,
                              const JointConfig& start_q, const IkSettings& settings,
                              double cart_step) {
  chain.validate();
  settings.validate();
  if (cart_step <= 0.0) throw DomainError("cart_step must be positive");

  Trajectory trajectory;
  JointConfig current = start_q;
  Eigen::Vector3d position;
  {
    const FkResult home = fk(chain, current);
    position = Eigen::Vector3d(home.tool.x, home.tool.y, home.tool.z);
  }

  for (std::size_t index = 0; index < plan.steps.size(); ++index) {
    const PlanStep& step = plan.steps[index];
    TrajectoryLeg leg;
    leg.kind = step.kind;
    leg.object_id = step.object_id;

    if (step.kind == StepKind::kGrasp || step.kind == StepKind::kRelease) {
      trajectory.push_back(std::move(leg));
      continue;
    }

    const Eigen::Vector3d goal(step.target.x, step.target.y, step.target.z);
    const double dist = (goal - position).norm();
    const int pieces = std::max(1, static_cast<int>(std::ceil(dist / cart_step)));
    for (int i = 1; i <= pieces; ++i) {
      const Eigen::Vector3d waypoint =
          position + (goal - position) * (static_cast<double>(i) / pieces);
      const Point3 target{waypoint.x(), waypoint.y(), waypoint.z()};
      try {
        current = solve_ik(chain, target, current, settings);
      } catch (const UnreachableTarget& e) {
        throw PlanInfeasible("step " + std::to_string(index) + " (" + to_string(step.kind) +
                                 ") unreachable: " + e.what(),
                             static_cast<int>(index));
      }
      leg.waypoints.push_back(current);
    }
    const FkResult reached = fk(chain, current);
    position = Eigen::Vector3d(reached.tool.x, reached.tool.y, reached.tool.z);
    trajectory.push_back(std::move(leg));
  }
  return trajectory;
}

}  // namespace d2p
