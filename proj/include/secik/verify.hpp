#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "secik/ik.hpp"
#include "secik/kinematic_model.hpp"
#include "secik/quartic.hpp"
#include "secik/types.hpp"

// Independent oracles. Nothing in here is on the solve path; these exist to
// cross-check the closed form in tests and in `secik check`.

namespace secik::verify {

/// Forward kinematics recomposed from elementary Eigen rotations and
/// translations, without going through mdh_transform.
Transform fk_oracle(const RobotParams& params, const JointConfig& joints);

/// Geometric Jacobian built from the joint axes and origins of the FK frames
/// (z_i x (p - o_i); z_i). Rows as in numeric_jacobian.
Eigen::Matrix<double, 6, kNumJoints> geometric_jacobian(const RobotParams& params, const JointConfig& joints);

/// Real roots from the eigenvalues of the companion matrix, merged under the
/// same tolerances as solve_quartic. DegreeZero when nothing is left after
/// dropping negligible leading coefficients.
Expected<RealRoots> quartic_oracle(const QuarticCoeffs& c);

struct NumericIkOptions {
  int max_iters = 200;
  double damping = 1e-6;
  double tolerance = 1e-10;  // stop when the task error norm drops below this
  /// When set, the arm angle is appended as a seventh task row, which pins
  /// the self-motion and makes the solution locally unique.
  std::optional<double> psi;
};

struct NumericIkResult {
  JointConfig joints;
  int iterations = 0;
  double error = 0.0;
};

/// Damped least squares on the pose error (and optionally the arm angle).
Expected<NumericIkResult> numeric_ik(const RobotParams& params, const Transform& pose, const JointConfig& seed,
                                     const NumericIkOptions& opts = {});

struct CheckRow {
  std::string label;
  int samples = 0;
  double max_error = 0.0;
  double limit = 0.0;
  int failures = 0;
};

struct CheckResult {
  bool passed = true;
  double max_error = 0.0;
  std::vector<CheckRow> detail;

  /// Folds one measurement into the row named `label` (created on first use).
  void add(const std::string& label, double error, double limit);
};

/// Uniform joint configuration in (-pi, pi]^7.
JointConfig random_joints(std::mt19937_64& rng);

/// Runs every oracle over `samples` random configurations: FK agreement,
/// quartic agreement on the IK quartics, IK round trip, and the numeric IK
/// fixed-point property of every returned branch.
CheckResult run_checks(const RobotParams& params, int samples, std::uint64_t seed);

}  // namespace secik::verify
