#pragma once

#include "tendon_hand/analytic_map.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace tendon_hand {

/// Quasi-static balance of one flexion chain under spring counter-tension.
///
/// Unknowns are ordered driven joint first, then outward to the tip (MCP, PIP, DIP for
/// fingers; MP, IP for the thumb). Row 0 is the unit row: the driven joint is not
/// compensated. For each distal joint i,
///   q_i + C_i * sum_m R_m q_m = A_i * q_driven,
/// i.e. the tendon stretch T_spr * L_path / EA absorbs R_i * (ideal - actual).
struct CouplingSystem {
  Eigen::MatrixXd matrix;        // M
  Eigen::VectorXd ideal_gains;   // A, driven first
  Eigen::VectorXd compliance;    // C (1/m), driven first; entry 0 is always 0
  Eigen::VectorXd radii;         // R, driven first
  Digit digit = Digit::Index;

  Eigen::Index size() const { return ideal_gains.size(); }
};

/// Spring restoring force k_s * sum R_i q_i (N). `q` is distal to proximal, like the radii.
inline double spring_tension(const DigitGeometry& digit, const TransmissionParams& t, const std::vector<double>& q) {
  double excursion = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) excursion += digit.joint_radii[i] * q[i];
  return t.spring_stiffness * excursion;
}

/// Builds M from radii (driven first) and compliance coefficients (driven entry ignored).
inline CouplingSystem make_coupling_system(const Eigen::VectorXd& radii_driven_first,
                                           const Eigen::VectorXd& compliance, Digit digit = Digit::Index) {
  const Eigen::Index n = radii_driven_first.size();
  CouplingSystem sys;
  sys.digit = digit;
  sys.radii = radii_driven_first;
  sys.compliance = compliance;
  sys.compliance[0] = 0.0;
  sys.ideal_gains = Eigen::VectorXd(n);
  for (Eigen::Index i = 0; i < n; ++i) sys.ideal_gains[i] = radii_driven_first[0] / radii_driven_first[i];
  sys.matrix = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index m = 0; m < n; ++m) sys.matrix(i, m) += sys.compliance[i] * radii_driven_first[m];
  }
  return sys;
}

/// Compliance coefficients from cumulative tendon path length between the driven joint
/// and each distal joint: C_i = k_s * L_cum,i / (EA * R_i).
inline CouplingSystem build_coupling_system(const DigitGeometry& digit, const TransmissionParams& t, Digit which) {
  const std::size_t n = digit.joint_radii.size();
  Eigen::VectorXd radii(n);
  Eigen::VectorXd compliance = Eigen::VectorXd::Zero(n);
  // Reverse to driven-first order. path_lengths[k] spans joints k and k+1 (distal indexing).
  double cumulative = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t distal_idx = n - 1 - i;
    radii[i] = digit.joint_radii[distal_idx];
    if (i > 0) {
      cumulative += digit.path_lengths[distal_idx];
      compliance[i] = t.spring_stiffness * cumulative / (t.tendon_axial_stiffness * radii[i]);
    }
  }
  return make_coupling_system(radii, compliance, which);
}

inline CouplingSystem build_coupling_system(const HandGeometry& g, Digit d) {
  return build_coupling_system(g.digit(d), g.digit(d).transmission, d);
}

/// q_comp = M^-1 A q_driven, driven first. Linear in q_driven; the driven entry is exact.
inline Eigen::VectorXd solve_compensated(const CouplingSystem& sys, double driven_angle) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.matrix);
  if (!lu.isInvertible()) {
    throw ContractViolation("coupling matrix of " + std::string(digit_name(sys.digit)) + " is singular");
  }
  Eigen::VectorXd q = lu.solve(sys.ideal_gains * driven_angle);
  q[0] = driven_angle;
  return q;
}

/// Compensated gains kappa with q_comp = kappa * q_driven (driven first).
inline Eigen::VectorXd compensated_gains(const CouplingSystem& sys) { return solve_compensated(sys, 1.0); }

/// Bias b = q_ideal - q_comp for a posture on the ideal coupling manifold.
///
/// Non-zero only on IP/PIP/DIP rows. Throws ContractViolation naming every digit whose
/// joints are not in the ideal coupling ratio.
inline JointVector compensation_bias(const HandGeometry& g, const JointVector& q_ideal) {
  JointVector b = JointVector::Zero();
  std::vector<std::string> off_manifold;
  for (Digit d : kAllDigits) {
    const DigitGeometry& dg = g.digit(d);
    const double s = q_ideal[driven_joint_row(d)];
    const std::vector<double> expected = couple_digit(dg, s);
    bool on = true;
    for (std::size_t k = 0; k < expected.size(); ++k) {
      const double got = q_ideal[joint_row(d, k)];
      if (std::abs(got - expected[k]) > 1e-9 * std::max(1.0, std::abs(expected[k]))) on = false;
    }
    if (!on) {
      off_manifold.emplace_back(digit_name(d));
      continue;
    }
    const Eigen::VectorXd qc = solve_compensated(build_coupling_system(g, d), s);
    const std::size_t n = dg.joint_count();
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t row = joint_row(d, n - 1 - i);
      b[row] = q_ideal[row] - qc[static_cast<Eigen::Index>(i)];
    }
  }
  if (!off_manifold.empty()) {
    std::string names;
    for (const auto& n : off_manifold) names += (names.empty() ? "" : ", ") + n;
    throw ContractViolation("posture is off the ideal coupling manifold for: " + names);
  }
  return b;
}

/// Posture predicted with spring and tendon compliance. The CMC joint is direct drive and
/// never compensated.
inline JointVector forward_compensated(const HandGeometry& g, const ServoVector& u) {
  JointVector q = JointVector::Zero();
  for (Digit d : kAllDigits) {
    const double s = detail::driven_angle_for(g, d, u[servo_of(d)]);
    const Eigen::VectorXd qc = solve_compensated(build_coupling_system(g, d), s);
    const std::size_t n = g.digit(d).joint_count();
    for (std::size_t i = 0; i < n; ++i) q[joint_row(d, n - 1 - i)] = qc[static_cast<Eigen::Index>(i)];
  }
  q[kCmcJoint] = g.cmc_gain * u[kCmcServo];
  return q;
}

}  // namespace tendon_hand
