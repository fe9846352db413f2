#pragma once

#include "tendon_hand/compensation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace tendon_hand {

struct ControlTarget {
  JointVector desired = JointVector::Zero();
  JointVector clipped = JointVector::Zero();
  JointWeights weights = JointWeights::Ones();
};

inline JointVector clip_to_workspace(const Workspace& w, const JointVector& q) {
  return q.cwiseMax(w.q_min).cwiseMin(w.q_max);
}

inline ControlTarget make_target(const Workspace& w, const JointVector& q_d,
                                 const JointWeights& weights = JointWeights::Ones()) {
  if (!q_d.allFinite()) throw std::invalid_argument("target posture must be finite");
  if ((weights.array() < 0.0).any() || !weights.allFinite()) {
    throw std::invalid_argument("joint weights must be finite and non-negative");
  }
  return {q_d, clip_to_workspace(w, q_d), weights};
}

/// Compensated gains of a digit scattered into joint rows (zero elsewhere).
inline JointVector compensated_gain_rows(const HandGeometry& g, Digit d) {
  JointVector k = JointVector::Zero();
  const Eigen::VectorXd kappa = compensated_gains(build_coupling_system(g, d));
  const std::size_t n = g.digit(d).joint_count();
  for (std::size_t i = 0; i < n; ++i) k[joint_row(d, n - 1 - i)] = kappa[static_cast<Eigen::Index>(i)];
  return k;
}

struct DrivenInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool empty() const { return lo > hi; }
};

/// Driven angles whose compensated posture keeps every joint of the digit in the workspace.
inline DrivenInterval workspace_driven_interval(const HandGeometry& g, Digit d) {
  const JointVector k = compensated_gain_rows(g, d);
  DrivenInterval iv;
  const std::size_t n = g.digit(d).joint_count();
  for (std::size_t slot = 0; slot < n; ++slot) {
    const std::size_t row = joint_row(d, slot);
    const double lo = g.workspace.q_min[row];
    const double hi = g.workspace.q_max[row];
    const double kr = k[row];
    if (kr > 0.0) {
      iv.lo = std::max(iv.lo, lo / kr);
      iv.hi = std::min(iv.hi, hi / kr);
    } else if (kr < 0.0) {
      iv.lo = std::max(iv.lo, hi / kr);
      iv.hi = std::min(iv.hi, lo / kr);
    } else if (lo > 0.0 || hi < 0.0) {
      return {1.0, 0.0};
    }
  }
  return iv;
}

/// Upper end of each servo's safe range: the largest command that keeps the modelled
/// digit inside the workspace. Lower end is 0 (full extension).
inline ServoVector servo_safe_max(const HandGeometry& g) {
  ServoVector u = ServoVector::Zero();
  for (Digit d : kAllDigits) {
    const DigitGeometry& dg = g.digit(d);
    const DrivenInterval iv = workspace_driven_interval(g, d);
    if (iv.empty() || iv.hi < 0.0) {
      throw GeometryInfeasible("workspace admits no flexion of " + std::string(digit_name(d)), servo_of(d) + 1);
    }
    const double s = std::min(iv.hi, dg.guide.alpha);
    u[servo_of(d)] = servo_from_driven_angle(dg.guide, dg.servo_pulley_radius, s);
  }
  u[kCmcServo] = g.workspace.q_max[kCmcJoint] / g.cmc_gain;
  return u;
}

/// Weighted least-squares driven angle for one digit of a target posture.
///
/// The bias is evaluated at the driven angle being solved for, so minimising
/// sum w_i (q_i + b_i(s) - A_i s)^2 reduces to fitting the compensated gains:
/// s = sum w k q / sum w k^2. All-zero weights give s = 0.
inline double least_squares_driven_angle(const HandGeometry& g, Digit d, const JointVector& target,
                                         const JointWeights& weights) {
  const JointVector k = compensated_gain_rows(g, d);
  double num = 0.0;
  double den = 0.0;
  const std::size_t n = g.digit(d).joint_count();
  for (std::size_t slot = 0; slot < n; ++slot) {
    const std::size_t row = joint_row(d, slot);
    num += weights[row] * k[row] * target[row];
    den += weights[row] * k[row] * k[row];
  }
  return den > 0.0 ? num / den : 0.0;
}

/// b(q~_d) for an arbitrary target: each digit's bias at its least-squares driven angle.
inline JointVector target_bias(const HandGeometry& g, const JointVector& target,
                               const JointWeights& weights = JointWeights::Ones()) {
  JointVector q_ideal = JointVector::Zero();
  for (Digit d : kAllDigits) {
    detail::write_digit(q_ideal, d, couple_digit(g.digit(d), least_squares_driven_angle(g, d, target, weights)));
  }
  return compensation_bias(g, q_ideal);
}

/// Servo command u* = H+(q~_d + b(q~_d)), solved digit by digit through the exact
/// closed-form inverse of the guide geometry. The driven angle is clamped to the range
/// that keeps the compensated digit inside the workspace.
inline ServoVector inverse_map(const HandGeometry& g, const JointVector& clipped_target,
                               const JointWeights& weights = JointWeights::Ones()) {
  ServoVector u = ServoVector::Zero();
  for (Digit d : kAllDigits) {
    const DigitGeometry& dg = g.digit(d);
    const DrivenInterval iv = workspace_driven_interval(g, d);
    if (iv.empty()) {
      throw GeometryInfeasible("workspace admits no posture of " + std::string(digit_name(d)), servo_of(d) + 1);
    }
    const double s = std::clamp(least_squares_driven_angle(g, d, clipped_target, weights), iv.lo, iv.hi);
    if (s < 0.0 || s > dg.guide.alpha) {
      throw GeometryInfeasible("servo " + std::to_string(servo_of(d) + 1) + " (" + std::string(digit_name(d)) +
                                   "): driven angle " + std::to_string(s) + " rad outside [0, alpha]",
                               servo_of(d) + 1);
    }
    u[servo_of(d)] = servo_from_driven_angle(dg.guide, dg.servo_pulley_radius, s);
  }
  u[kCmcServo] = clipped_target[kCmcJoint] / g.cmc_gain;
  return u;
}

struct PosePlan {
  ServoVector command = ServoVector::Zero();
  JointVector target = JointVector::Zero();    // after clipping
  JointVector achieved = JointVector::Zero();  // forward_compensated(command)
  JointVector residual = JointVector::Zero();  // target - achieved
  std::array<bool, kNumJoints> clipped{};
};

inline PosePlan plan_to_pose(const HandGeometry& g, const JointVector& pose,
                             const JointWeights& weights = JointWeights::Ones()) {
  const ControlTarget t = make_target(g.workspace, pose, weights);
  PosePlan plan;
  plan.target = t.clipped;
  for (std::size_t i = 0; i < kNumJoints; ++i) plan.clipped[i] = t.clipped[i] != pose[i];
  plan.command = inverse_map(g, t.clipped, t.weights);
  plan.achieved = forward_compensated(g, plan.command);
  plan.residual = plan.target - plan.achieved;
  return plan;
}

}  // namespace tendon_hand
