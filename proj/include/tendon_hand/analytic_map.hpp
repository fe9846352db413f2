#pragma once

#include "tendon_hand/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tendon_hand {

/// Flexion of the directly driven joint after the servo reels in r_j * u_j of tendon.
///
/// The guide chord shortens from L0 to L = L0 - r_j u_j; the included angle follows
/// from the law of cosines and flexion is its decrease from alpha. Negative u (slack)
/// is allowed as long as the triangle still closes.
inline double driven_angle_from_servo(const GuideGeometry& guide, double pulley_radius, double servo_angle) {
  const double d1 = guide.d1;
  const double d2 = guide.d2;
  const double l0 = guide.initial_chord();
  const double retraction = pulley_radius * servo_angle;
  const double chord = l0 - retraction;
  if (!std::isfinite(chord) || chord < std::abs(d1 - d2) || chord > d1 + d2) {
    throw GeometryInfeasible("servo angle " + std::to_string(servo_angle) +
                             " rad leaves the guide triangle (chord " + std::to_string(chord) + " m)");
  }
  // cos(phi) - cos(alpha), formed without cancellation so that u = 0 gives exactly 0.
  const double dcos = retraction * (l0 + chord) / (2.0 * d1 * d2);
  const double phi = std::acos(std::clamp(std::cos(guide.alpha) + dcos, -1.0, 1.0));
  // alpha - phi = 2 asin(dcos / (2 sin((alpha + phi) / 2)))
  const double s = std::clamp(dcos / (2.0 * std::sin(0.5 * (guide.alpha + phi))), -1.0, 1.0);
  return 2.0 * std::asin(s);
}

/// Exact inverse of driven_angle_from_servo on [0, alpha].
inline double servo_from_driven_angle(const GuideGeometry& guide, double pulley_radius, double driven_angle) {
  if (!(driven_angle >= 0.0 && driven_angle <= guide.alpha)) {
    throw std::domain_error("driven angle " + std::to_string(driven_angle) + " rad outside [0, alpha]");
  }
  const double d1 = guide.d1;
  const double d2 = guide.d2;
  const double l0 = guide.initial_chord();
  const double chord =
      std::sqrt(std::max(0.0, d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * std::cos(guide.alpha - driven_angle)));
  // L0^2 - L^2 = 4 d1 d2 sin(alpha - q/2) sin(q/2)
  const double diff_sq = 4.0 * d1 * d2 * std::sin(guide.alpha - 0.5 * driven_angle) * std::sin(0.5 * driven_angle);
  return diff_sq / (l0 + chord) / pulley_radius;
}

/// d(driven angle)/du at u = 0; the gain used for H when a servo sits at zero.
inline double driven_gain_at_rest(const GuideGeometry& guide, double pulley_radius) {
  return guide.initial_chord() * pulley_radius / (guide.d1 * guide.d2 * std::sin(guide.alpha));
}

/// Ideal coupling gains A_i = R_driven / R_i, distal to proximal (driven entry is 1).
inline std::vector<double> coupling_gains(const DigitGeometry& digit) {
  std::vector<double> a(digit.joint_radii.size());
  const double r_driven = digit.driven_radius();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = r_driven / digit.joint_radii[i];
  return a;
}

/// Tendon-length conservation: every joint of the chain turns by R_driven / R_i times the
/// driven angle. Output is distal to proximal.
inline std::vector<double> couple_digit(const DigitGeometry& digit, double driven_angle) {
  std::vector<double> q = coupling_gains(digit);
  for (double& v : q) v *= driven_angle;
  q.back() = driven_angle;
  return q;
}

namespace detail {

inline double driven_angle_for(const HandGeometry& g, Digit d, double u) {
  const DigitGeometry& dg = g.digit(d);
  try {
    return driven_angle_from_servo(dg.guide, dg.servo_pulley_radius, u);
  } catch (const GeometryInfeasible& e) {
    throw GeometryInfeasible("servo " + std::to_string(servo_of(d) + 1) + " (" + std::string(digit_name(d)) +
                                 "): " + e.what(),
                             servo_of(d) + 1);
  }
}

inline void write_digit(JointVector& q, Digit d, const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) q[joint_row(d, k)] = values[k];
}

}  // namespace detail

/// Uncompensated posture q_ideal for a servo command.
inline JointVector forward_ideal(const HandGeometry& g, const ServoVector& u) {
  JointVector q = JointVector::Zero();
  for (Digit d : kAllDigits) {
    const double s = detail::driven_angle_for(g, d, u[servo_of(d)]);
    detail::write_digit(q, d, couple_digit(g.digit(d), s));
  }
  q[kCmcJoint] = g.cmc_gain * u[kCmcServo];
  return q;
}

/// Evaluated 15x6 actuator-to-joint matrix with H(u) u == forward_ideal(g, u).
///
/// Entries of a digit column are q_i / u_j; at u_j == 0 the analytic limit gain is used
/// so the matrix stays defined and its sparsity pattern never changes.
inline MappingMatrix assemble_mapping(const HandGeometry& g, const ServoVector& u) {
  MappingMatrix h = MappingMatrix::Zero();
  for (Digit d : kAllDigits) {
    const DigitGeometry& dg = g.digit(d);
    const std::size_t col = servo_of(d);
    const double uj = u[col];
    const double gain = uj == 0.0 ? driven_gain_at_rest(dg.guide, dg.servo_pulley_radius)
                                  : detail::driven_angle_for(g, d, uj) / uj;
    const std::vector<double> a = coupling_gains(dg);
    for (std::size_t k = 0; k < a.size(); ++k) h(joint_row(d, k), col) = a[k] * gain;
  }
  h(kCmcJoint, kCmcServo) = g.cmc_gain;
  return h;
}

}  // namespace tendon_hand
