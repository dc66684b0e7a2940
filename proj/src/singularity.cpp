#include "secik/singularity.hpp"

#include "secik/arm_angle.hpp"

#include <algorithm>

namespace secik {

namespace {

double dist_to_set(double q, std::initializer_list<double> set) {
  double d = kPi;
  for (double v : set) d = std::min(d, angle_distance(q, v));
  return d;
}

// Rotation vector of r (log map), accurate near the identity.
Vec3 rotation_log(const Mat3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.axis() * aa.angle();
}

}  // namespace

bool SingularityReport::has(Condition c) const {
  auto match = [c](const ConditionDistance& h) { return h.condition == c; };
  return std::any_of(kinematic_hits.begin(), kinematic_hits.end(), match) ||
         std::any_of(algorithmic_hits.begin(), algorithmic_hits.end(), match);
}

double critical_q6(const RobotParams& params) { return std::acos(-params.a_wr() / params.d_ew()); }

std::vector<ConditionDistance> condition_distances(const JointConfig& joints, const RobotParams& params) {
  const double crit = critical_q6(params);
  const double d_q2 = dist_to_set(joints[1], {kPi / 2.0, -kPi / 2.0});
  const double d_q3 = dist_to_set(joints[2], {0.0, kPi});
  const double d_q4 = dist_to_set(joints[3], {0.0, kPi});
  const double d_q5 = dist_to_set(joints[4], {0.0, kPi});
  const double d_q6 = dist_to_set(joints[5], {crit, -crit});

  const double s4 = std::sin(joints[3]);
  const double c4 = std::cos(joints[3]);
  const double s5 = std::sin(joints[4]);
  const double s6 = std::sin(joints[5]);
  const double c6 = std::cos(joints[5]);
  const double merge = (params.d_ew() + params.a_wr() * c6) * s4 - params.a_wr() * c4 * s5 * s6;

  const FramePoints p = frame_points(params, joints);
  const Vec3 z7 = forward_kinematics(params, joints).linear().col(2);
  const Vec3 sc = p.center7 - p.shoulder;
  double d_axis = 0.0;
  if (sc.norm() >= kTolLength) {
    const Vec3 u = sc.normalized();
    d_axis = std::atan2(u.cross(z7).norm(), std::abs(u.dot(z7)));
  }

  return {
      {Condition::KinematicElbowStraight, d_q4},
      {Condition::KinematicShoulderAlignedQ3, std::max(d_q2, d_q3)},
      {Condition::KinematicShoulderAlignedQ6, std::max(d_q2, d_q6)},
      {Condition::KinematicWristQ5Q6, std::max(d_q5, d_q6)},
      {Condition::AlgorithmicShoulderAligned, d_q2},
      {Condition::AlgorithmicElbowOnAxis7, d_q6},
      {Condition::AlgorithmicBranchMerge, std::abs(merge)},
      {Condition::AlgorithmicScParallelZ7, d_axis},
  };
}

bool near_singular(const JointConfig& joints, const RobotParams& params, double margin) {
  for (const auto& cd : condition_distances(joints, params)) {
    const double d = cd.condition == Condition::AlgorithmicBranchMerge ? cd.distance / params.d_ew() : cd.distance;
    if (d < margin) return true;
  }
  return false;
}

SingularityReport classify(const JointConfig& joints, const RobotParams& params, const ClassifyOptions& opts) {
  SingularityReport report;
  for (const auto& cd : condition_distances(joints, params)) {
    const double tol = cd.condition == Condition::AlgorithmicBranchMerge ? opts.hit_tol_m : opts.hit_tol;
    if (cd.distance >= tol) continue;
    if (is_kinematic(cd.condition)) report.kinematic_hits.push_back(cd);
    else report.algorithmic_hits.push_back(cd);
  }
  if (opts.compute_jacobian) {
    report.min_singular_value = min_singular_value(numeric_jacobian(joints, params, opts.jacobian_step));
  }
  return report;
}

Eigen::Matrix<double, 6, kNumJoints> numeric_jacobian(const JointConfig& joints, const RobotParams& params,
                                                      double h) {
  Eigen::Matrix<double, 6, kNumJoints> jac;
  for (int i = 0; i < kNumJoints; ++i) {
    JointConfig plus = joints;
    JointConfig minus = joints;
    plus[i] += h;
    minus[i] -= h;
    const Transform tp = forward_kinematics(params, plus);
    const Transform tm = forward_kinematics(params, minus);
    jac.block<3, 1>(0, i) = (tp.translation() - tm.translation()) / (2.0 * h);
    jac.block<3, 1>(3, i) = rotation_log(tp.linear() * tm.linear().transpose()) / (2.0 * h);
  }
  return jac;
}

double min_singular_value(const Eigen::Matrix<double, 6, kNumJoints>& jacobian) {
  const Eigen::JacobiSVD<Eigen::Matrix<double, 6, kNumJoints>> svd(jacobian);
  return svd.singularValues()(5);
}

}  // namespace secik
