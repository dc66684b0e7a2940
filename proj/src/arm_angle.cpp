#include "secik/arm_angle.hpp"

#include <algorithm>

namespace secik {

Expected<double> arm_angle(const FramePoints& points, const Vec3& z7) {
  const Vec3 sc = points.center7 - points.shoulder;
  const double d_sc = sc.norm();
  if (d_sc < kTolLength) return Error::ZeroSc;
  const Vec3 u = sc / d_sc;

  if (u.cross(z7).norm() < kTolParallel) return Error::DegenerateReference;
  const Vec3 se = points.elbow - points.shoulder;
  const double se_norm = se.norm();
  if (se_norm < kTolLength || u.cross(se / se_norm).norm() < kTolParallel) return Error::DegenerateArm;

  const Vec3 ref = z7 - u * u.dot(z7);
  const Vec3 arm = se - u * u.dot(se);
  return normalize_angle(std::atan2(u.dot(ref.cross(arm)), ref.dot(arm)));
}

Expected<double> arm_angle(const RobotParams& params, const JointConfig& joints) {
  const auto frames = link_frames(params, joints);
  const FramePoints points{frames[1].translation(), frames[3].translation(), frames[5].translation(),
                           frames[6].translation()};
  return arm_angle(points, frames[6].linear().col(2));
}

Expected<ReducedPose> reduce_pose(const RobotParams& params, const Transform& pose) {
  const Vec3 sc = pose.translation() - params.shoulder();
  const double d_sc = sc.norm();
  if (d_sc < kTolLength) return Error::ZeroSc;

  const Vec3 zv = sc / d_sc;
  const Vec3 z7 = pose.linear().col(2);
  const Vec3 x7 = pose.linear().col(0);

  Vec3 yv = z7.cross(zv);
  const double yv_norm = yv.norm();
  if (yv_norm < kTolParallel) return Error::AxisParallel;
  yv /= yv_norm;

  const Vec3 x72 = yv.cross(z7);
  const Vec3 xv = yv.cross(zv);

  ReducedPose r;
  r.d_sc = d_sc;
  r.q = -std::acos(std::clamp(zv.dot(z7), -1.0, 1.0));
  r.al = std::atan2(x72.cross(x7).dot(z7), x72.dot(x7));
  r.align_rotation.row(0) = xv.transpose();
  r.align_rotation.row(1) = yv.transpose();
  r.align_rotation.row(2) = zv.transpose();
  return r;
}

Transform special_pose(const RobotParams& params, double d_sc, double q, double al) {
  Transform t = Transform::Identity();
  t.translate(Vec3(0.0, 0.0, params.d_bs() + d_sc));
  t.rotate(Eigen::AngleAxisd(q, Vec3::UnitY()));
  t.rotate(Eigen::AngleAxisd(al, Vec3::UnitZ()));
  return t;
}

Transform reconstruct_pose(const RobotParams& params, const ReducedPose& reduced) {
  const Transform special = special_pose(params, reduced.d_sc, reduced.q, reduced.al);
  const Mat3 back = reduced.align_rotation.transpose();
  Transform t = Transform::Identity();
  t.linear() = back * special.linear();
  t.translation() = back * (special.translation() - params.shoulder()) + params.shoulder();
  return t;
}

}  // namespace secik
