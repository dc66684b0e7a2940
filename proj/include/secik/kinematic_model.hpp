#pragma once

#include <array>

#include "secik/types.hpp"

namespace secik {

/// One modified-DH row. The single-joint transform is
///   ^{i-1}T_i = RotX(alpha) * TransX(a) * RotZ(theta_offset + q) * TransZ(d).
struct MdhRow {
  double alpha = 0.0;         // rad
  double a = 0.0;             // m
  double d = 0.0;             // m
  double theta_offset = 0.0;  // rad
};

using MdhTable = std::array<MdhRow, kNumJoints>;

/// Geometry of the 7-DOF arm: spherical shoulder at height d_bs above the
/// base, upper arm d_se, forearm d_ew, and an offset a_wr between the axes of
/// joints 6 and 7.
///
/// The closed-form solver relies on the specific frame layout produced by
/// `canonical_rows`, so a caller-supplied table is accepted only if it is
/// kinematically equivalent to it (checked frame by frame at construction).
class RobotParams {
 public:
  /// Builds the canonical table from the four lengths.
  RobotParams(double d_bs, double d_se, double d_ew, double a_wr);

  /// Uses an explicit table; throws std::invalid_argument if the lengths are
  /// invalid or the table does not match the canonical layout.
  RobotParams(double d_bs, double d_se, double d_ew, double a_wr, const MdhTable& rows);

  /// Placeholder Moz1-like arm. Only a_wr = 0.0905 m is a published value;
  /// d_bs, d_se and d_ew are stand-ins.
  static RobotParams moz1_placeholder();

  static MdhTable canonical_rows(double d_bs, double d_se, double d_ew, double a_wr);

  double d_bs() const { return d_bs_; }
  double d_se() const { return d_se_; }
  double d_ew() const { return d_ew_; }
  double a_wr() const { return a_wr_; }
  const MdhTable& rows() const { return rows_; }
  const MdhRow& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

  /// Shoulder centre in the base frame, (0, 0, d_bs).
  Vec3 shoulder() const { return Vec3(0.0, 0.0, d_bs_); }

 private:
  void validate() const;

  double d_bs_;
  double d_se_;
  double d_ew_;
  double a_wr_;
  MdhTable rows_;
};

/// S, E, W and C: origins of ^0T_2, ^0T_4, ^0T_6 and ^0T_7.
struct FramePoints {
  Vec3 shoulder;
  Vec3 elbow;
  Vec3 wrist;
  Vec3 center7;
};

Transform mdh_transform(const MdhRow& row, double q);

/// ^0T_1 ... ^0T_7.
std::array<Transform, kNumJoints> link_frames(const RobotParams& params, const JointConfig& joints);

/// ^0T_7.
Transform forward_kinematics(const RobotParams& params, const JointConfig& joints);

FramePoints frame_points(const RobotParams& params, const JointConfig& joints);

/// Rotation part of ^{i-1}T_i for joint index i in [0, 7).
Mat3 joint_rotation(const RobotParams& params, int i, double q);

}  // namespace secik
