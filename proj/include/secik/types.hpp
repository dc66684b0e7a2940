#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <variant>

namespace secik {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rigid-body transform (rotation + translation). Poses are ^0T_7 unless noted.
using Transform = Eigen::Isometry3d;

constexpr int kNumJoints = 7;
constexpr double kPi = std::numbers::pi;

/// Wraps an angle to the half-open interval (-pi, pi].
inline double normalize_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

/// Smallest absolute difference between two angles, in [0, pi].
inline double angle_distance(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

/// Seven joint angles in radians, q1..q7 stored at index 0..6.
struct JointConfig {
  std::array<double, kNumJoints> q{};

  JointConfig() = default;
  explicit JointConfig(const std::array<double, kNumJoints>& values) : q(values) {}

  double& operator[](std::size_t i) { return q[i]; }
  double operator[](std::size_t i) const { return q[i]; }

  bool is_finite() const {
    for (double v : q) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  /// Representative with every angle in (-pi, pi].
  JointConfig normalized() const {
    JointConfig out;
    for (int i = 0; i < kNumJoints; ++i) out.q[i] = normalize_angle(q[i]);
    return out;
  }

  /// Largest per-joint angular distance (mod 2pi).
  double max_angle_distance(const JointConfig& other) const {
    double m = 0.0;
    for (int i = 0; i < kNumJoints; ++i) m = std::max(m, angle_distance(q[i], other.q[i]));
    return m;
  }

  Eigen::Matrix<double, kNumJoints, 1> vector() const {
    return Eigen::Map<const Eigen::Matrix<double, kNumJoints, 1>>(q.data());
  }
};

/// Machine-readable failure and rejection tags. The string form (see
/// `to_string`) is what the CLI and the JSON output emit.
enum class Error {
  // reduction of the pose / arm-angle geometry
  ZeroSc,
  AxisParallel,
  DegenerateReference,
  DegenerateArm,
  NearAxisParallel,
  // polynomial
  AllCoefficientsZero,
  DegreeZero,
  ComplexRoot,
  RepeatedRoot,
  // per-branch
  NoValidRoots,
  DomainViolation,
  UnsquaredResidual,
  Q8Indeterminate,
  PoseEquation,
  ArmEquation,
  Unreachable,
  ElbowDegenerate,
  WristLikeDegenerate,
  FkMismatch,
  ArmAngleMismatch,
  Duplicate,
  // oracles / io
  NoConvergence,
  InvalidRotation,
  InvalidInput,
};

constexpr std::string_view to_string(Error e) {
  switch (e) {
    case Error::ZeroSc: return "zero_sc";
    case Error::AxisParallel: return "axis_parallel";
    case Error::DegenerateReference: return "degenerate_reference";
    case Error::DegenerateArm: return "degenerate_arm";
    case Error::NearAxisParallel: return "near_axis_parallel";
    case Error::AllCoefficientsZero: return "all_coefficients_zero";
    case Error::DegreeZero: return "degree_zero";
    case Error::ComplexRoot: return "complex_root";
    case Error::RepeatedRoot: return "repeated_root";
    case Error::NoValidRoots: return "no_valid_roots";
    case Error::DomainViolation: return "domain_violation";
    case Error::UnsquaredResidual: return "unsquared_residual";
    case Error::Q8Indeterminate: return "q8_indeterminate";
    case Error::PoseEquation: return "pose_equation";
    case Error::ArmEquation: return "arm_equation";
    case Error::Unreachable: return "unreachable";
    case Error::ElbowDegenerate: return "elbow_degenerate";
    case Error::WristLikeDegenerate: return "wrist_like_degenerate";
    case Error::FkMismatch: return "fk_mismatch";
    case Error::ArmAngleMismatch: return "arm_angle_mismatch";
    case Error::Duplicate: return "duplicate";
    case Error::NoConvergence: return "no_convergence";
    case Error::InvalidRotation: return "invalid_rotation";
    case Error::InvalidInput: return "invalid_input";
  }
  return "unknown";
}

/// Value-or-error return used on the solve path, where exceptions are avoided.
template <class T>
class Expected {
 public:
  Expected(T value) : v_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Expected(Error e) : v_(e) {}                 // NOLINT(google-explicit-constructor)

  bool has_value() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return has_value(); }

  const T& value() const& {
    if (!has_value()) throw std::logic_error(std::string("Expected holds error: ") + std::string(to_string(error())));
    return std::get<T>(v_);
  }
  T&& value() && {
    if (!has_value()) throw std::logic_error(std::string("Expected holds error: ") + std::string(to_string(error())));
    return std::get<T>(std::move(v_));
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  Error error() const { return std::get<Error>(v_); }

 private:
  std::variant<T, Error> v_;
};

/// Translation distance and geodesic rotation angle between two poses.
struct PoseError {
  double translation = 0.0;  // m
  double rotation = 0.0;     // rad
};

inline PoseError pose_error(const Transform& a, const Transform& b) {
  PoseError e;
  e.translation = (a.translation() - b.translation()).norm();
  const Mat3 d = a.linear().transpose() * b.linear();
  // atan2 form keeps resolution near zero where acos((tr-1)/2) does not.
  const Vec3 v(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  e.rotation = std::atan2(0.5 * v.norm(), 0.5 * (d.trace() - 1.0));
  return e;
}

/// True when `r` is orthonormal with determinant +1 within `tol`.
inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  if (!r.allFinite()) return false;
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace secik
