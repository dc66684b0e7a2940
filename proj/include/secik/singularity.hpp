#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "secik/kinematic_model.hpp"
#include "secik/types.hpp"

namespace secik {

/// Singular sets of the arm. `Kinematic*` entries are configurations where
/// the Jacobian loses rank; `Algorithmic*` entries are configurations where
/// the arm-angle parameterisation or the closed form breaks down.
enum class Condition {
  KinematicElbowStraight,        // q4 in {0, pi}
  KinematicShoulderAlignedQ3,    // q2 = +-pi/2 and q3 in {0, pi}
  KinematicShoulderAlignedQ6,    // q2 = +-pi/2 and q6 = +-acos(-a_wr/d_ew)
  KinematicWristQ5Q6,            // q5 in {0, pi} and q6 = +-acos(-a_wr/d_ew)
  AlgorithmicShoulderAligned,    // q2 = +-pi/2
  AlgorithmicElbowOnAxis7,       // q6 = +-acos(-a_wr/d_ew)
  AlgorithmicBranchMerge,        // (d_ew + a_wr c6) s4 - a_wr c4 s5 s6 = 0
  AlgorithmicScParallelZ7,       // SC parallel to z7: reference plane undefined
};

constexpr std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::KinematicElbowStraight: return "q4_in_0_pi";
    case Condition::KinematicShoulderAlignedQ3: return "q2_pm_half_pi_and_q3_in_0_pi";
    case Condition::KinematicShoulderAlignedQ6: return "q2_pm_half_pi_and_q6_crit";
    case Condition::KinematicWristQ5Q6: return "q5_in_0_pi_and_q6_crit";
    case Condition::AlgorithmicShoulderAligned: return "q2_pm_half_pi";
    case Condition::AlgorithmicElbowOnAxis7: return "q6_crit";
    case Condition::AlgorithmicBranchMerge: return "branch_merge_expression";
    case Condition::AlgorithmicScParallelZ7: return "sc_parallel_z7";
  }
  return "unknown";
}

constexpr bool is_kinematic(Condition c) {
  return c == Condition::KinematicElbowStraight || c == Condition::KinematicShoulderAlignedQ3 ||
         c == Condition::KinematicShoulderAlignedQ6 || c == Condition::KinematicWristQ5Q6;
}

/// Distance is in rad except for AlgorithmicBranchMerge, which is the
/// absolute value of the expression in m.
struct ConditionDistance {
  Condition condition;
  double distance;
};

struct SingularityReport {
  std::vector<ConditionDistance> kinematic_hits;
  std::vector<ConditionDistance> algorithmic_hits;
  std::optional<double> min_singular_value;

  bool any() const { return !kinematic_hits.empty() || !algorithmic_hits.empty(); }
  bool has(Condition c) const;
};

struct ClassifyOptions {
  double hit_tol = 1e-6;     // rad
  double hit_tol_m = 1e-9;   // m, for the compound expression
  bool compute_jacobian = false;
  double jacobian_step = 1e-6;
};

/// q6 angle at which t6 = a_wr + d_ew cos q6 vanishes: acos(-a_wr/d_ew).
double critical_q6(const RobotParams& params);

/// Distances to every condition, in enum order.
std::vector<ConditionDistance> condition_distances(const JointConfig& joints, const RobotParams& params);

/// True when the configuration lies within `margin` of any condition. The
/// compound expression is compared after dividing by d_ew.
bool near_singular(const JointConfig& joints, const RobotParams& params, double margin);

SingularityReport classify(const JointConfig& joints, const RobotParams& params, const ClassifyOptions& opts = {});

/// Central-difference Jacobian of frame 7: rows 0-2 linear velocity of C,
/// rows 3-5 angular velocity, both in the base frame.
Eigen::Matrix<double, 6, kNumJoints> numeric_jacobian(const JointConfig& joints, const RobotParams& params,
                                                      double h = 1e-6);

/// Smallest of the six singular values of a 6x7 Jacobian.
double min_singular_value(const Eigen::Matrix<double, 6, kNumJoints>& jacobian);

}  // namespace secik
