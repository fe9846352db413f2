#pragma once

#include "tendon_hand/types.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace tendon_hand {

/// Two tendon guides at distances d1, d2 from the driven joint centre, separated by
/// the included angle alpha at full extension.
struct GuideGeometry {
  double d1 = 0.0;     // m
  double d2 = 0.0;     // m
  double alpha = 0.0;  // rad

  /// Chord between the guides at full extension (law of cosines).
  double initial_chord() const { return std::sqrt(d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * std::cos(alpha)); }

  bool operator==(const GuideGeometry&) const = default;
};

struct TransmissionParams {
  double spring_stiffness = 0.0;  // k_s, N/m
  double tendon_axial_stiffness = 1.0;  // EA, N

  bool operator==(const TransmissionParams&) const = default;
};

/// One tendon-coupled flexion chain (the thumb's IP/MP pair or a finger's DIP/PIP/MCP).
///
/// Radii and path lengths are listed distal to proximal. The driven joint is always
/// the most proximal one, so `driven_slot()` is the last radius index.
struct DigitGeometry {
  std::string name;
  std::vector<double> joint_radii;   // m, fingers [DIP, PIP, MCP], thumb [IP, MP]
  std::vector<double> path_lengths;  // m, fingers [L_PIP_DIP, L_MCP_PIP], thumb [L_MP_IP]
  std::vector<double> radius_ratio;  // declared design ratio, same order as joint_radii
  GuideGeometry guide;
  double servo_pulley_radius = 0.0;  // m
  TransmissionParams transmission;

  std::size_t joint_count() const { return joint_radii.size(); }
  std::size_t driven_slot() const { return joint_radii.size() - 1; }
  double driven_radius() const { return joint_radii.back(); }

  bool operator==(const DigitGeometry&) const = default;
};

struct Workspace {
  JointVector q_min = JointVector::Zero();
  JointVector q_max = JointVector::Zero();

  bool operator==(const Workspace& o) const { return q_min == o.q_min && q_max == o.q_max; }
};

struct HandGeometry {
  std::array<DigitGeometry, kNumDigits> digits;  // indexed by Digit
  double cmc_gain = 1.0;
  Workspace workspace;

  const DigitGeometry& digit(Digit d) const { return digits[index_of(d)]; }
  DigitGeometry& digit(Digit d) { return digits[index_of(d)]; }

  bool operator==(const HandGeometry&) const = default;
};

/// Admissible joint ranges of the reference hand, q1..q15 in rad.
inline Workspace reference_workspace() {
  Workspace w;
  w.q_min.setZero();
  w.q_max << 0.99, 1.25,  // thumb IP, MP
      1.31, 1.61, 1.27,   // index DIP, PIP, MCP
      1.28, 1.58, 1.24,   // middle
      1.29, 1.59, 1.25,   // ring
      1.25, 1.55, 1.23,   // pinky
      1.57;               // thumb CMC
  return w;
}

struct Violation {
  std::string field;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

namespace detail {

inline bool positive(double v) { return std::isfinite(v) && v > 0.0; }

inline void check_digit(const DigitGeometry& dg, Digit which, const std::string& path,
                        std::vector<Violation>& out) {
  const std::size_t n = flexion_joint_count(which);
  if (dg.joint_radii.size() != n) {
    out.push_back({path + ".joint_radii_m", "expected " + std::to_string(n) + " radii"});
  }
  if (dg.path_lengths.size() != n - 1) {
    out.push_back({path + ".path_lengths_m", "expected " + std::to_string(n - 1) + " path lengths"});
  }
  for (std::size_t i = 0; i < dg.joint_radii.size(); ++i) {
    if (!positive(dg.joint_radii[i]))
      out.push_back({path + ".joint_radii_m[" + std::to_string(i) + "]", "radius must be positive"});
  }
  for (std::size_t i = 0; i < dg.path_lengths.size(); ++i) {
    if (!positive(dg.path_lengths[i]))
      out.push_back({path + ".path_lengths_m[" + std::to_string(i) + "]", "path length must be positive"});
  }
  if (!positive(dg.guide.d1)) out.push_back({path + ".guide.d1_m", "d1 must be positive"});
  if (!positive(dg.guide.d2)) out.push_back({path + ".guide.d2_m", "d2 must be positive"});
  if (!(std::isfinite(dg.guide.alpha) && dg.guide.alpha > 0.0 && dg.guide.alpha < std::numbers::pi))
    out.push_back({path + ".guide.alpha_rad", "alpha must lie in (0, pi)"});
  if (!positive(dg.servo_pulley_radius))
    out.push_back({path + ".servo_pulley_radius_m", "servo pulley radius must be positive"});
  if (!(std::isfinite(dg.transmission.spring_stiffness) && dg.transmission.spring_stiffness >= 0.0))
    out.push_back({path + ".transmission.k_s_n_per_m", "k_s must be non-negative"});
  if (!positive(dg.transmission.tendon_axial_stiffness))
    out.push_back({path + ".transmission.ea_n", "EA must be positive"});

  if (dg.radius_ratio.size() != dg.joint_radii.size()) {
    out.push_back({path + ".radius_ratio", "ratio must list one entry per joint radius"});
  } else if (!dg.joint_radii.empty()) {
    const double ref_r = dg.joint_radii.back();
    const double ref_k = dg.radius_ratio.back();
    for (std::size_t i = 0; i < dg.joint_radii.size(); ++i) {
      if (!positive(dg.radius_ratio[i])) {
        out.push_back({path + ".radius_ratio[" + std::to_string(i) + "]", "ratio entries must be positive"});
        continue;
      }
      const double want = dg.radius_ratio[i] / ref_k;
      const double got = dg.joint_radii[i] / ref_r;
      if (std::abs(got - want) > 1e-9 * std::abs(want))
        out.push_back({path + ".joint_radii_m[" + std::to_string(i) + "]", "radii do not match declared ratio"});
    }
  }
}

}  // namespace detail

/// Every violated invariant of `g`; empty iff the geometry is usable.
inline std::vector<Violation> validate_geometry(const HandGeometry& g) {
  std::vector<Violation> out;
  for (Digit d : kAllDigits) {
    const std::string path = "digits[" + std::to_string(index_of(d)) + "]";
    const DigitGeometry& dg = g.digit(d);
    if (dg.name != digit_name(d))
      out.push_back({path + ".name", "expected digit '" + std::string(digit_name(d)) + "'"});
    detail::check_digit(dg, d, path, out);
  }
  if (!detail::positive(g.cmc_gain)) out.push_back({"cmc_gain", "cmc_gain must be positive"});

  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const std::string name(kJointTable[i].name);
    const double lo = g.workspace.q_min[i];
    const double hi = g.workspace.q_max[i];
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      out.push_back({"workspace.q" + std::to_string(i + 1), "bounds must be finite (" + name + ")"});
    } else if (lo > hi) {
      out.push_back({"workspace.q" + std::to_string(i + 1), "q_min exceeds q_max (" + name + ")"});
    }
  }
  // The driven joint's upper bound must be reachable before the guides collapse.
  for (Digit d : kAllDigits) {
    const std::size_t row = driven_joint_row(d);
    if (g.workspace.q_max[row] > g.digit(d).guide.alpha)
      out.push_back({"workspace.q" + std::to_string(row + 1),
                     "driven joint bound exceeds guide angle alpha (" + std::string(kJointTable[row].name) + ")"});
  }
  return out;
}

inline constexpr double kDefaultTendonEA = 2000.0;  // N
// Fitted so the uncompensated index-DIP sweep error is 1.15 deg (see `thand fit`).
inline constexpr double kDefaultSpringStiffness = 285.52021557698026;  // N/m

/// Built-in human-scale parameter set. Matches data/default_hand.json.
inline HandGeometry default_geometry() {
  HandGeometry g;
  auto finger = [](std::string name, double scale, std::vector<double> paths, GuideGeometry guide) {
    DigitGeometry dg;
    dg.name = std::move(name);
    dg.joint_radii = {0.005 * scale, 0.004 * scale, 0.005 * scale};
    dg.radius_ratio = {5.0, 4.0, 5.0};
    dg.path_lengths = std::move(paths);
    dg.guide = guide;
    dg.servo_pulley_radius = 0.005;
    return dg;
  };
  DigitGeometry thumb;
  thumb.name = "thumb";
  thumb.joint_radii = {0.005, 0.004};
  thumb.radius_ratio = {5.0, 4.0};
  thumb.path_lengths = {0.034};
  thumb.guide = {0.010, 0.008, 1.85};
  thumb.servo_pulley_radius = 0.005;

  g.digit(Digit::Thumb) = thumb;
  g.digit(Digit::Index) = finger("index", 1.0, {0.025, 0.045}, {0.011, 0.009, 1.9});
  g.digit(Digit::Middle) = finger("middle", 1.0, {0.028, 0.048}, {0.011, 0.009, 1.9});
  g.digit(Digit::Ring) = finger("ring", 1.0, {0.027, 0.046}, {0.011, 0.009, 1.9});
  g.digit(Digit::Pinky) = finger("pinky", 0.9, {0.021, 0.036}, {0.010, 0.008, 1.9});

  for (auto& dg : g.digits) dg.transmission = {kDefaultSpringStiffness, kDefaultTendonEA};
  g.cmc_gain = 1.0;
  g.workspace = reference_workspace();
  return g;
}

}  // namespace tendon_hand
