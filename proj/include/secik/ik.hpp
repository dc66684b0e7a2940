#pragma once

#include <array>
#include <vector>

#include "secik/arm_angle.hpp"
#include "secik/kinematic_model.hpp"
#include "secik/quartic.hpp"
#include "secik/types.hpp"

namespace secik {

struct ToleranceSet {
  double pose_tol = 1e-8;             // FK re-check: translation (m) and geodesic angle (rad)
  double angle_merge_tol = 1e-7;      // branches closer than this on all joints are duplicates
  double branch_residual_tol = 1e-7;  // unsquared constraint, relative to its term magnitudes
  double sin_domain_tol = 1e-9;       // acos/asin arguments this close outside [-1, 1] are clamped
  double psi_tol = 1e-8;              // arm angle re-check on every accepted branch
  double unit_circle_tol = 1e-8;      // |sin^2 q8 + cos^2 q8 - 1|

  bool valid() const;
};

/// Intermediate quantities of the t6 quartic for one (d_sc, q, psi).
struct QuarticSetup {
  double k = 0.0;  // (a_wr^2 + d_se^2 - d_sc^2 - d_ew^2) / 2
  double y = 0.0;  // 2 d_sc cos q
  double tm1 = 0.0;
  double tm2 = 0.0;
  double tm3 = 0.0;
  QuarticCoeffs g;

  /// tm1 + t6 tm2 + t6^2 tm3 + r6 y (k - a_wr t6); zero on genuine solutions.
  double unsquared(double a_wr, double t6, double r6) const;
  /// Magnitude of the terms of `unsquared`, used to make its residual relative.
  double unsquared_scale(double a_wr, double t6, double r6) const;
};

/// Identifies a branch: quartic root slot, sign of sin q6, and the two
/// sign choices for q4 and q2. A zero sign means "not yet chosen" (used in
/// rejections that cover every sub-branch).
struct BranchLabel {
  int root_index = -1;
  int q6_sign = 0;
  int q4_sign = 0;
  int q2_sign = 0;

  friend bool operator==(const BranchLabel&, const BranchLabel&) = default;
};

struct BranchResiduals {
  double translation = 0.0;    // m, FK re-check
  double rotation = 0.0;       // rad, FK re-check
  double arm_angle = 0.0;      // rad, |arm_angle(branch) - psi|
  double unsquared = 0.0;      // relative residual of the pre-squaring constraint
  double arm_equation = 0.0;   // rad, direction error of E in the aligned frame
  double pose_equation = 0.0;  // m^2, residual of the shoulder-distance constraint
};

struct IkBranch {
  JointConfig joints;
  BranchLabel label;
  double t6 = 0.0;  // a_wr + d_ew cos q6
  double r6 = 0.0;  // d_ew sin q6
  double q8 = 0.0;  // q7 - al
  BranchResiduals residuals;
};

struct Rejection {
  BranchLabel label;
  Error reason;
  double value = 0.0;  // the offending quantity (residual, argument, root, ...)
};

struct SolutionSet {
  std::vector<IkBranch> branches;
  std::vector<Rejection> rejected;
  ReducedPose reduced;
  QuarticSetup setup;
  RealRoots roots;
};

struct IkRequest {
  Transform pose;
  double psi = 0.0;
  RobotParams params;
  ToleranceSet tolerances;
};

/// One (q6, q8) candidate produced from a real quartic root.
struct Q6Q8Candidate {
  int root_index = -1;
  int q6_sign = 0;
  double t6 = 0.0;
  double r6 = 0.0;
  double q6 = 0.0;
  double sin_q8 = 0.0;
  double cos_q8 = 0.0;
  double q8 = 0.0;
  double unsquared = 0.0;
  double arm_equation = 0.0;
};

struct Q6Q8Result {
  RealRoots roots;
  std::vector<Q6Q8Candidate> candidates;
  std::vector<Rejection> rejected;
};

/// The two shoulder solutions (q1, q2, q3), for q2 = pi/2 + acos(r33) and pi/2 - acos(r33).
struct ShoulderSolutions {
  std::array<std::array<double, 3>, 2> angles{};
  std::array<int, 2> q2_sign{1, -1};
};

Expected<QuarticSetup> build_quartic(double d_sc, double q, double psi, const RobotParams& params);

/// Solves the quartic and recovers (q6, q8) for every real root that passes
/// the domain and unsquared-constraint checks. Every quartic root slot that
/// does not produce a candidate gets a rejection; an empty candidate list
/// means no valid root.
Q6Q8Result solve_q6_q8(const QuarticSetup& setup, double d_sc, double q, double psi, const RobotParams& params,
                       const ToleranceSet& tol = {});

double solve_q7(double q8, double al);

/// ^6S: the shoulder centre in frame 6.
Vec3 shoulder_in_frame6(double d_sc, double q, double q8, const RobotParams& params);

/// {+acos(c4), -acos(c4)}.
Expected<std::array<double, 2>> solve_q4(const Vec3& s6, const RobotParams& params, double sin_domain_tol = 1e-9);

/// q5 for the branch with the given q4. The atan2 arguments are multiplied by
/// sign(sin q4) so the negative-q4 branch gets its own q5.
Expected<double> solve_q5(const Vec3& s6, double q6, double q4);

Expected<ShoulderSolutions> solve_q123(const Mat3& r07, double q4, double q5, double q6, double q7,
                                       const RobotParams& params);

/// IK of the special pose built from `reduced` (alignment ignored).
Expected<SolutionSet> solve_special(const ReducedPose& reduced, double psi, const RobotParams& params,
                                    const ToleranceSet& tol = {});

/// Full IK for an arbitrary pose at arm angle psi. Whole-request failures
/// (ZeroSc, AxisParallel) come back as errors; per-branch failures are listed
/// in SolutionSet::rejected.
Expected<SolutionSet> solve(const IkRequest& request);
Expected<SolutionSet> solve(const RobotParams& params, const Transform& pose, double psi, const ToleranceSet& tol = {});

}  // namespace secik
