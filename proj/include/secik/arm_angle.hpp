#pragma once

#include "secik/kinematic_model.hpp"
#include "secik/types.hpp"

namespace secik {

/// Norm of the cross product of two unit vectors below which they count as parallel.
constexpr double kTolParallel = 1e-8;
/// Length (m) below which |SC| counts as zero.
constexpr double kTolLength = 1e-9;

// The arm angle psi is the signed dihedral angle about the axis S->C, from the
// reference half-plane containing z7 to the arm half-plane containing E.
// Positive by the right-hand rule about SC/|SC|. Because S and C do not move
// during self-motion, psi parameterises the redundancy even with the wrist
// offset.

/// Arm angle from the four frame points and the joint-7 axis; (-pi, pi].
Expected<double> arm_angle(const FramePoints& points, const Vec3& z7);

/// Arm angle of a joint configuration.
Expected<double> arm_angle(const RobotParams& params, const JointConfig& joints);

/// Canonical 3-DOF description of an end pose.
///
/// `align_rotation` rotates the base frame about S so that C lies on the base
/// z-axis above S and z7 lies in the base xz-plane (x-component <= 0). In that
/// frame the pose equals `special_pose(params, d_sc, q, al)`.
struct ReducedPose {
  double d_sc = 0.0;  // |SC|, m
  double q = 0.0;     // angle from SC to z7 about the aligned y-axis, in [-pi, 0]
  double al = 0.0;    // angle from y0 x z7 to x7 about z7
  Mat3 align_rotation = Mat3::Identity();
};

Expected<ReducedPose> reduce_pose(const RobotParams& params, const Transform& pose);

/// Trans(0, 0, d_bs + d_sc) * RotY(q) * RotZ(al).
Transform special_pose(const RobotParams& params, double d_sc, double q, double al);

/// Undoes the alignment: returns the pose that `reduced` was computed from.
Transform reconstruct_pose(const RobotParams& params, const ReducedPose& reduced);

}  // namespace secik
