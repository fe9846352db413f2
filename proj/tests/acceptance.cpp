// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "oracles.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace tendon_hand;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> check;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HandGeometry loaded() { return load_geometry(test_support::data_path("default_hand.json")); }

Outcome sparsity() {
  const HandGeometry g = loaded();
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const ServoVector u = test_support::random_command(g, rng);
    const MappingMatrix h = assemble_mapping(g, u);
    for (Eigen::Index row = 0; row < h.rows(); ++row) {
      const Eigen::Index owner = row == kCmcJoint ? kCmcServo : servo_of(kJointTable[row].digit);
      for (Eigen::Index col = 0; col < h.cols(); ++col) {
        if ((h(row, col) != 0.0) != (col == owner)) return {false, "bad pattern at trial " + std::to_string(trial)};
      }
    }
    if ((h.array() != 0.0).count() != 15) return {false, "nnz != 15"};
  }
  return {true, "1000 commands, 15 non-zeros each"};
}

Outcome coupling_ratios() {
  const HandGeometry g = loaded();
  const ServoVector hi = servo_safe_max(g);
  double worst = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const ServoVector u = hi * (k / 1000.0);
    const JointVector q = forward_ideal(g, u);
    for (Digit d : {Digit::Index, Digit::Middle, Digit::Ring, Digit::Pinky}) {
      const double mcp = q[joint_row(d, 2)];
      worst = std::max(worst, std::abs(q[joint_row(d, 1)] / mcp - 1.25) / 1.25);
      worst = std::max(worst, std::abs(q[joint_row(d, 0)] / mcp - 1.0));
    }
    worst = std::max(worst, std::abs(q[joint_row(Digit::Thumb, 0)] / q[joint_row(Digit::Thumb, 1)] - 0.8) / 0.8);
  }
  return {worst <= 1e-12, "max relative error " + fmt("%.3g", worst)};
}

Outcome inverse_identity() {
  const HandGeometry g = loaded();
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ServoVector u = test_support::random_command(g, rng);
    const JointVector q = forward_compensated(g, u);
    const ServoVector back = inverse_map(g, q);
    worst = std::max(worst, (forward_compensated(g, back) - q).cwiseAbs().maxCoeff());
    worst = std::max(worst, (back - u).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-9, "max error " + fmt("%.3g", worst) + " rad"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  std::uniform_real_distribution<double> comp(0.0, 5.0);
  std::uniform_real_distribution<double> angle(0.0, 1.6);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool thumb = trial % 5 == 0;
    Eigen::VectorXd radii = thumb ? Eigen::VectorXd(Eigen::Vector2d(5e-3, 4e-3))
                                  : Eigen::VectorXd(Eigen::Vector3d(5e-3, 4e-3, 5e-3));
    Eigen::VectorXd c = Eigen::VectorXd::Zero(radii.size());
    for (Eigen::Index i = 0; i < radii.size(); ++i) {
      radii[i] *= scale(rng);
      if (i > 0) c[i] = comp(rng);
    }
    const double s = angle(rng);
    const Eigen::VectorXd q = solve_compensated(make_coupling_system(radii, c), s);
    worst = std::max(worst, (q - oracle::fixed_point_compensation(radii, c, s)).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-10, "max deviation " + fmt("%.3g", worst) + " rad over 100 parameter sets"};
}

Outcome limit_consistency() {
  double worst = 0.0;
  for (const auto& [k_s, ea] : {std::pair{0.0, kDefaultTendonEA}, std::pair{kDefaultSpringStiffness, 1e12}}) {
    HandGeometry g = loaded();
    for (auto& dg : g.digits) dg.transmission = {k_s, ea};
    for (const SweepRecord& rec : run_sweeps(g, PlantConfig{}, {1, 2, 3, 4, 5, 6}, 100)) {
      for (const SweepSample& s : rec.samples) worst = std::max(worst, (s.compensated - s.ideal).cwiseAbs().maxCoeff());
    }
  }
  return {worst < 1e-9, "max |comp - ideal| " + fmt("%.3g", worst) + " rad"};
}

Outcome fit_reproduction() {
  HandGeometry g = loaded();
  for (auto& dg : g.digits) dg.transmission.spring_stiffness = 1.0;
  const FitResult fit = fit_default_params(g, 1.15);
  g = with_stiffness_ratio(g, fit.stiffness_ratio);

  const std::size_t index_servo = servo_of(Digit::Index) + 1;
  const SweepReport clean = compute_report(run_sweep(g, PlantConfig{}, index_servo, 100));
  const double dip_ideal = clean.find(joint_row(Digit::Index, 0))->mae_ideal_deg;
  double comp_clean = 0.0;
  for (const auto& j : clean.joints) comp_clean = std::max(comp_clean, j.mae_comp_deg);

  PlantConfig noisy;
  noisy.noise_sigma = deg_to_rad(0.1);
  noisy.seed = 2024;
  double comp_noisy = 0.0;
  for (const auto& j : compute_report(run_sweep(g, noisy, index_servo, 100)).joints)
    comp_noisy = std::max(comp_noisy, j.mae_comp_deg);

  const bool ok = dip_ideal >= 1.14 && dip_ideal <= 1.16 && comp_clean < 1e-6 && comp_noisy <= 0.25;
  return {ok, "k_s " + fmt("%.4f", fit.params.spring_stiffness) + " N/m, DIP ideal MAE " + fmt("%.4f", dip_ideal) +
                  " deg, comp MAE " + fmt("%.2g", comp_clean) + " deg, noisy comp MAE " + fmt("%.4f", comp_noisy) +
                  " deg"};
}

Outcome residual_shape() {
  const HandGeometry g = loaded();
  const std::size_t k = 100;
  std::size_t series = 0;
  for (std::size_t servo = 1; servo <= kNumDigits; ++servo) {
    for (const auto& j : compute_report(run_sweep(g, PlantConfig{}, servo, k)).joints) {
      for (std::size_t i = 1; i < j.residual_ideal.size(); ++i) {
        if (std::abs(j.residual_ideal[i]) < std::abs(j.residual_ideal[i - 1]))
          return {false, std::string(kJointTable[j.joint].name) + " ideal residual shrinks at sample " +
                             std::to_string(i)};
      }
      ++series;
    }
  }
  PlantConfig noisy;
  noisy.noise_sigma = deg_to_rad(0.1);
  noisy.seed = 7;
  const double bound = 3.0 * noisy.noise_sigma / std::sqrt(static_cast<double>(k));
  double worst = 0.0;
  for (std::size_t servo = 1; servo <= kNumDigits; ++servo) {
    for (const auto& j : compute_report(run_sweep(g, noisy, servo, k)).joints) {
      double mean = 0.0;
      for (double r : j.residual_comp) mean += r;
      worst = std::max(worst, std::abs(mean / static_cast<double>(k)));
    }
  }
  return {worst <= bound, std::to_string(series) + " monotone series; max |mean comp residual| " +
                              fmt("%.3g", worst) + " <= " + fmt("%.3g", bound) + " rad"};
}

Outcome workspace_safety() {
  const HandGeometry g = loaded();
  const Workspace table = reference_workspace();
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int trial = 0; trial < 100000; ++trial) {
    JointVector q;
    JointWeights w = JointWeights::Ones();
    for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = angle(rng);
    if (trial % 2) {
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = weight(rng);
    }
    const PosePlan plan = plan_to_pose(g, q, w);
    if ((plan.achieved.array() > table.q_max.array() + 1e-12).any() ||
        (plan.achieved.array() < table.q_min.array() - 1e-12).any())
      return {false, "target " + std::to_string(trial) + " leaves the workspace"};
  }
  return {true, "100000 targets inside bounds"};
}

Outcome cmc_identity() {
  const HandGeometry g = loaded();
  std::mt19937_64 rng(1009);
  for (int trial = 0; trial < 10000; ++trial) {
    const ServoVector u = test_support::random_command(g, rng);
    if (forward_compensated(g, u)[kCmcJoint] != u[kCmcServo] || forward_ideal(g, u)[kCmcJoint] != u[kCmcServo])
      return {false, "q15 != u6 at trial " + std::to_string(trial)};
    JointVector q = JointVector::Zero();
    q[kCmcJoint] = u[kCmcServo];
    if (inverse_map(g, q)[kCmcServo] != u[kCmcServo]) return {false, "inverse u6 != q15"};
  }
  if (compensation_bias(g, forward_ideal(g, ServoVector::Constant(0.7)))[kCmcJoint] != 0.0)
    return {false, "bias applied to q15"};
  return {true, "10000 commands, exact"};
}

Outcome determinism() {
  PlantConfig p;
  p.noise_sigma = deg_to_rad(0.1);
  p.servo_lag = 0.2;
  p.seed = 7;
  auto csv = [&] {
    std::ostringstream os;
    write_sweep_csv(os, run_sweeps(loaded(), p, {1, 2, 3, 4, 5, 6}, 100));
    return os.str();
  };
  const std::string a = csv();
  const std::string b = csv();
  return {a == b && !a.empty(), std::to_string(a.size()) + " bytes, identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "sparsity", 1.0, sparsity},
      {2, "coupling ratios", 1.0, coupling_ratios},
      {3, "inverse identity", 5.0, inverse_identity},
      {4, "compensation oracle equivalence", 5.0, oracle_equivalence},
      {5, "limit consistency", 0.0, limit_consistency},
      {6, "index DIP error fit", 10.0, fit_reproduction},
      {7, "residual shape", 0.0, residual_shape},
      {8, "workspace safety", 10.0, workspace_safety},
      {9, "CMC identity", 0.0, cmc_identity},
      {10, "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += " (over time limit " + fmt("%.0f", c.time_limit_s) + " s)";
    }
    failures += !o.pass;
    std::printf("%s [%2d] %-32s %7.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
