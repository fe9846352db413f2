#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_support.hpp"

#include <limits>
#include <random>

using namespace tendon_hand;

namespace {

JointVector random_target(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  JointVector q;
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = dist(rng);
  return q;
}

}  // namespace

TEST(Control, ClipToWorkspace) {
  const Workspace w = reference_workspace();
  JointVector q = JointVector::Constant(5.0);
  q[0] = -1.0;
  const JointVector c = clip_to_workspace(w, q);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c.tail<14>(), w.q_max.tail<14>());
}

TEST(Control, RejectsBadInput) {
  const Workspace w = reference_workspace();
  JointVector q = JointVector::Zero();
  q[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(make_target(w, q), std::invalid_argument);
  JointWeights wts = JointWeights::Ones();
  wts[2] = -0.1;
  EXPECT_THROW(make_target(w, JointVector::Zero(), wts), std::invalid_argument);
}

TEST(Control, InverseOfForwardIsIdentity) {
  const HandGeometry g = default_geometry();
  std::mt19937_64 rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ServoVector u = test_support::random_command(g, rng);
    const JointVector q = forward_compensated(g, u);
    worst = std::max(worst, (forward_compensated(g, inverse_map(g, q)) - q).cwiseAbs().maxCoeff());
    EXPECT_LT((inverse_map(g, q) - u).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Control, LeastSquaresMatchesGridSearch) {
  const HandGeometry g = default_geometry();
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const JointVector target = random_target(rng, 0.0, 1.2);
    JointWeights w = random_target(rng, 0.0, 1.0);
    for (Digit d : kAllDigits) {
      // Weighted residual of q_ideal(s) - b(s) against the target, computed through the
      // bias itself rather than the compensated gains.
      auto cost = [&](double s) {
        JointVector qi = JointVector::Zero();
        for (Digit e : kAllDigits) detail::write_digit(qi, e, couple_digit(g.digit(e), e == d ? s : 0.0));
        const JointVector model = qi - compensation_bias(g, qi);
        double c = 0.0;
        for (std::size_t slot = 0; slot < flexion_joint_count(d); ++slot) {
          const std::size_t row = joint_row(d, slot);
          c += w[row] * (target[row] - model[row]) * (target[row] - model[row]);
        }
        return c;
      };
      const double s = least_squares_driven_angle(g, d, target, w);
      const auto [grid_s, grid_cost] = oracle::grid_minimum(cost, 0.0, 2.0, 4001);
      EXPECT_NEAR(s, grid_s, 1e-3);
      EXPECT_LE(cost(s), grid_cost + 1e-15);
    }
  }
}

TEST(Control, ZeroWeightsGiveRest) {
  const HandGeometry g = default_geometry();
  const ServoVector u = inverse_map(g, JointVector::Constant(0.8), JointWeights::Zero());
  EXPECT_EQ(u.head<5>(), ServoVector::Zero().head<5>());
  EXPECT_EQ(u[kCmcServo], 0.8);
}

TEST(Control, CmcIsExactlyDirect) {
  HandGeometry g = default_geometry();
  std::mt19937_64 rng(47);
  for (double gain : {1.0, 0.5, 2.0}) {
    g.cmc_gain = gain;
    for (int k = 0; k < 100; ++k) {
      const double q15 = std::uniform_real_distribution<double>(0.0, 1.57)(rng);
      JointVector q = JointVector::Zero();
      q[kCmcJoint] = q15;
      EXPECT_EQ(inverse_map(g, q)[kCmcServo], q15 / gain);
    }
  }
}

TEST(Control, SafeMaxStaysInWorkspace) {
  const HandGeometry g = default_geometry();
  const ServoVector hi = servo_safe_max(g);
  const JointVector q = forward_compensated(g, hi);
  EXPECT_TRUE((q.array() <= g.workspace.q_max.array() + 1e-12).all());
  // Thumb IP is the binding joint of the thumb.
  EXPECT_NEAR(q[joint_row(Digit::Thumb, 0)], 0.99, 1e-12);
  EXPECT_EQ(hi[kCmcServo], 1.57);
}

TEST(Control, PlanStaysInWorkspaceProperty) {
  const HandGeometry g = default_geometry();
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5000; ++trial) {
    const JointVector target = random_target(rng, -3.0, 3.0);
    const JointWeights w = random_target(rng, 0.0, 2.0);
    const PosePlan plan = plan_to_pose(g, target, w);
    EXPECT_TRUE((plan.achieved.array() >= g.workspace.q_min.array() - 1e-12).all());
    EXPECT_TRUE((plan.achieved.array() <= g.workspace.q_max.array() + 1e-12).all());
    EXPECT_TRUE((plan.command.array() >= 0.0).all());
  }
}

TEST(Control, PlanFlagsClippedJoints) {
  const HandGeometry g = default_geometry();
  JointVector q = JointVector::Constant(0.3);
  q[5] = 9.0;
  q[0] = -0.2;
  const PosePlan plan = plan_to_pose(g, q);
  for (std::size_t i = 0; i < kNumJoints; ++i) EXPECT_EQ(plan.clipped[i], i == 5 || i == 0) << i;
  EXPECT_EQ(plan.target[5], g.workspace.q_max[5]);
  EXPECT_LT((plan.target - plan.achieved - plan.residual).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Control, TargetBiasMatchesManifold) {
  const HandGeometry g = default_geometry();
  ServoVector u;
  u << 0.5, 0.7, 0.3, 1.0, 0.2, 0.4;
  const JointVector qc = forward_compensated(g, u);
  // On the compensated manifold the LS driven angle is exact, so q_ideal = q_comp + b.
  EXPECT_LT((qc + target_bias(g, qc) - forward_ideal(g, u)).cwiseAbs().maxCoeff(), 1e-12);
}
