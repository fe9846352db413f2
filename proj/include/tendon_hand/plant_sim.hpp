#pragma once

#include "tendon_hand/control.hpp"

#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tendon_hand {

enum class PlantPhysics { Ideal, Compensated };

inline std::string_view physics_name(PlantPhysics p) { return p == PlantPhysics::Ideal ? "ideal" : "compensated"; }

struct PlantConfig {
  PlantPhysics physics = PlantPhysics::Compensated;
  double noise_sigma = 0.0;  // rad, per measured joint
  double servo_lag = 0.0;    // first-order filter coefficient per step, [0, 1)
  std::uint64_t seed = 0;

  void validate() const {
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw std::invalid_argument("noise_sigma must be >= 0");
    if (!(servo_lag >= 0.0 && servo_lag < 1.0)) throw std::invalid_argument("servo_lag must lie in [0, 1)");
  }
};

/// Stand-in for the physical hand: evaluates one of the two models, optionally behind a
/// first-order servo lag, and adds seeded Gaussian measurement noise to every joint.
class SyntheticPlant {
 public:
  SyntheticPlant(const HandGeometry& g, PlantConfig cfg, std::uint64_t stream = 0)
      : geometry_(&g), cfg_(cfg), noise_(0.0, cfg.noise_sigma > 0.0 ? cfg.noise_sigma : 1.0) {
    cfg_.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    rng_.seed(seq);
  }

  /// Noise-free plant response for the command actually reaching the joints.
  JointVector true_posture(const ServoVector& u) const {
    return cfg_.physics == PlantPhysics::Ideal ? forward_ideal(*geometry_, u) : forward_compensated(*geometry_, u);
  }

  JointVector measure(const ServoVector& command) {
    if (!has_state_ || cfg_.servo_lag == 0.0) {
      applied_ = command;
      has_state_ = true;
    } else {
      applied_ = cfg_.servo_lag * applied_ + (1.0 - cfg_.servo_lag) * command;
    }
    JointVector q = true_posture(applied_);
    if (cfg_.noise_sigma > 0.0) {
      for (Eigen::Index i = 0; i < q.size(); ++i) q[i] += noise_(rng_);
    }
    return q;
  }

 private:
  const HandGeometry* geometry_;
  PlantConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_;
  ServoVector applied_ = ServoVector::Zero();
  bool has_state_ = false;
};

/// One-shot measurement from a fresh plant; bit-identical for a fixed seed.
inline JointVector simulate_measurement(const HandGeometry& g, const PlantConfig& p, const ServoVector& u) {
  SyntheticPlant plant(g, p);
  return plant.measure(u);
}

struct SweepSample {
  double u = 0.0;
  JointVector measured = JointVector::Zero();
  JointVector ideal = JointVector::Zero();
  JointVector compensated = JointVector::Zero();
};

struct SweepRecord {
  std::size_t servo = 1;  // 1-based
  std::vector<SweepSample> samples;
};

/// Monotonic sweep of servo `servo` (1-based) over K evenly spaced points from 0 to its
/// safe maximum, all other servos held at 0.
inline SweepRecord run_sweep(const HandGeometry& g, const PlantConfig& p, std::size_t servo, std::size_t samples) {
  if (servo < 1 || servo > kNumServos) throw std::invalid_argument("servo index must be in 1..6");
  if (samples < 2) throw std::invalid_argument("a sweep needs at least 2 samples");
  const double u_max = servo_safe_max(g)[servo - 1];
  SyntheticPlant plant(g, p, servo);
  SweepRecord rec;
  rec.servo = servo;
  rec.samples.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    ServoVector u = ServoVector::Zero();
    u[servo - 1] = k + 1 == samples ? u_max : u_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    SweepSample s;
    s.u = u[servo - 1];
    s.measured = plant.measure(u);
    s.ideal = forward_ideal(g, u);
    s.compensated = forward_compensated(g, u);
    rec.samples.push_back(std::move(s));
  }
  return rec;
}

/// Independent sweeps run concurrently; each has its own noise stream, so the result does
/// not depend on scheduling.
inline std::vector<SweepRecord> run_sweeps(const HandGeometry& g, const PlantConfig& p,
                                           const std::vector<std::size_t>& servos, std::size_t samples) {
  std::vector<std::future<SweepRecord>> jobs;
  jobs.reserve(servos.size());
  for (std::size_t j : servos) {
    jobs.push_back(std::async(std::launch::async, [&g, &p, j, samples] { return run_sweep(g, p, j, samples); }));
  }
  std::vector<SweepRecord> out;
  out.reserve(jobs.size());
  for (auto& f : jobs) out.push_back(f.get());
  return out;
}

struct JointResidual {
  std::size_t joint = 0;  // 0-based row
  std::vector<double> u;
  std::vector<double> residual_ideal;  // rad, measured - model
  std::vector<double> residual_comp;   // rad
  double mae_ideal_deg = 0.0;
  double mae_comp_deg = 0.0;
  std::size_t n_samples = 0;
};

struct SweepReport {
  std::size_t servo = 1;
  std::vector<JointResidual> joints;

  const JointResidual* find(std::size_t row) const {
    for (const auto& j : joints)
      if (j.joint == row) return &j;
    return nullptr;
  }
};

/// Rows scored for a sweep: the interphalangeal joints moved by that servo.
inline std::vector<std::size_t> target_joints(std::size_t servo) {
  std::vector<std::size_t> rows;
  if (servo < 1 || servo > kNumDigits) return rows;
  const Digit d = kAllDigits[servo - 1];
  for (std::size_t slot = 0; slot + 1 < flexion_joint_count(d); ++slot) rows.push_back(joint_row(d, slot));
  return rows;
}

inline double mean_abs(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s / static_cast<double>(v.size());
}

inline SweepReport compute_report(const SweepRecord& rec) {
  SweepReport rep;
  rep.servo = rec.servo;
  for (std::size_t row : target_joints(rec.servo)) {
    JointResidual jr;
    jr.joint = row;
    for (const SweepSample& s : rec.samples) {
      jr.u.push_back(s.u);
      jr.residual_ideal.push_back(s.measured[row] - s.ideal[row]);
      jr.residual_comp.push_back(s.measured[row] - s.compensated[row]);
    }
    jr.n_samples = rec.samples.size();
    jr.mae_ideal_deg = rad_to_deg(mean_abs(jr.residual_ideal));
    jr.mae_comp_deg = rad_to_deg(mean_abs(jr.residual_comp));
    rep.joints.push_back(std::move(jr));
  }
  return rep;
}

class FitFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Same k_s / EA ratio on every digit, keeping each digit's EA.
inline HandGeometry with_stiffness_ratio(HandGeometry g, double ratio) {
  for (auto& dg : g.digits) dg.transmission.spring_stiffness = ratio * dg.transmission.tendon_axial_stiffness;
  return g;
}

/// Uncompensated index-DIP error of a zero-noise compensated-plant sweep of servo 2.
inline double index_dip_ideal_mae_deg(const HandGeometry& g, std::size_t samples = 100) {
  PlantConfig p;
  p.physics = PlantPhysics::Compensated;
  const SweepReport rep = compute_report(run_sweep(g, p, servo_of(Digit::Index) + 1, samples));
  return rep.find(joint_row(Digit::Index, 0))->mae_ideal_deg;
}

struct FitResult {
  TransmissionParams params;  // index finger; same k_s/EA ratio applies to every digit
  double stiffness_ratio = 0.0;  // k_s / EA, 1/m
  double achieved_mae_deg = 0.0;
  int iterations = 0;
};

/// Bisection on k_s / EA so that the uncompensated index-DIP MAE matches `target_mae_deg`.
inline FitResult fit_default_params(const HandGeometry& g, double target_mae_deg, std::size_t samples = 100,
                                    double max_ratio = 1.0) {
  if (!(target_mae_deg >= 0.0) || !std::isfinite(target_mae_deg))
    throw std::invalid_argument("target MAE must be a non-negative number");
  const double ea = g.digit(Digit::Index).transmission.tendon_axial_stiffness;
  FitResult r;
  r.params.tendon_axial_stiffness = ea;
  if (target_mae_deg == 0.0) return r;

  auto mae = [&](double ratio) { return index_dip_ideal_mae_deg(with_stiffness_ratio(g, ratio), samples); };
  double lo = 0.0;
  double hi = max_ratio;
  const double mae_hi = mae(hi);
  if (mae_hi < target_mae_deg) {
    throw FitFailure("target " + std::to_string(target_mae_deg) + " deg unreachable: k_s/EA <= " +
                     std::to_string(max_ratio) + " gives at most " + std::to_string(mae_hi) + " deg");
  }
  double mid = 0.5 * (lo + hi);
  double got = 0.0;
  for (r.iterations = 0; r.iterations < 200; ++r.iterations) {
    mid = 0.5 * (lo + hi);
    got = mae(mid);
    if (std::abs(got - target_mae_deg) <= 1e-10 * target_mae_deg) break;
    (got < target_mae_deg ? lo : hi) = mid;
    if (hi - lo <= 1e-16) break;
  }
  r.stiffness_ratio = mid;
  r.params.spring_stiffness = mid * ea;
  r.achieved_mae_deg = mae(mid);
  if (std::abs(r.achieved_mae_deg - target_mae_deg) > 0.01 * target_mae_deg) {
    throw FitFailure("fit did not converge: " + std::to_string(r.achieved_mae_deg) + " deg");
  }
  return r;
}

}  // namespace tendon_hand
