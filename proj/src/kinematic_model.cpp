#include "secik/kinematic_model.hpp"

#include <sstream>
#include <stdexcept>

namespace secik {

namespace {

constexpr double kHalfPi = kPi / 2.0;

// Probe configurations for the table-equivalence check. Chosen to exercise
// every joint away from zero and with mixed signs.
constexpr std::array<std::array<double, kNumJoints>, 4> kProbeConfigs{{
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.3, -0.7, 1.1, -0.4, 0.9, -1.3, 0.5},
    {-2.1, 1.4, -0.6, 2.2, -1.7, 0.8, -2.9},
    {1.0, 2.5, 3.0, -2.6, 0.2, 2.7, 1.6},
}};

}  // namespace

RobotParams::RobotParams(double d_bs, double d_se, double d_ew, double a_wr)
    : RobotParams(d_bs, d_se, d_ew, a_wr, canonical_rows(d_bs, d_se, d_ew, a_wr)) {}

RobotParams::RobotParams(double d_bs, double d_se, double d_ew, double a_wr, const MdhTable& rows)
    : d_bs_(d_bs), d_se_(d_se), d_ew_(d_ew), a_wr_(a_wr), rows_(rows) {
  validate();
}

RobotParams RobotParams::moz1_placeholder() { return RobotParams(0.25, 0.35, 0.30, 0.0905); }

MdhTable RobotParams::canonical_rows(double d_bs, double d_se, double d_ew, double a_wr) {
  // Frames 3/4 sit at the elbow with z3 pointing elbow -> shoulder, frames 5/6
  // at the wrist with z5 pointing wrist -> elbow, frame 7 at C.
  return {{
      {0.0, 0.0, d_bs, 0.0},
      {-kHalfPi, 0.0, 0.0, -kHalfPi},
      {kHalfPi, 0.0, -d_se, kHalfPi},
      {kHalfPi, 0.0, 0.0, 0.0},
      {-kHalfPi, 0.0, -d_ew, -kHalfPi},
      {-kHalfPi, 0.0, 0.0, kHalfPi},
      {kHalfPi, a_wr, 0.0, 0.0},
  }};
}

void RobotParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("RobotParams: " + msg); };
  if (!std::isfinite(d_bs_) || !std::isfinite(d_se_) || !std::isfinite(d_ew_) || !std::isfinite(a_wr_))
    fail("lengths must be finite");
  if (d_bs_ <= 0.0 || d_se_ <= 0.0 || d_ew_ <= 0.0) fail("d_bs, d_se, d_ew must be strictly positive");
  if (a_wr_ < 0.0) fail("a_wr must be non-negative");
  if (a_wr_ >= d_ew_) fail("a_wr must be smaller than d_ew");
  for (const auto& r : rows_) {
    if (!std::isfinite(r.alpha) || !std::isfinite(r.a) || !std::isfinite(r.d) || !std::isfinite(r.theta_offset))
      fail("MDH rows must be finite");
  }

  const MdhTable ref = canonical_rows(d_bs_, d_se_, d_ew_, a_wr_);
  for (const auto& probe : kProbeConfigs) {
    Transform a = Transform::Identity();
    Transform b = Transform::Identity();
    for (int i = 0; i < kNumJoints; ++i) {
      a = a * mdh_transform(rows_[i], probe[i]);
      b = b * mdh_transform(ref[i], probe[i]);
      if ((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() > 1e-9) {
        std::ostringstream os;
        os << "MDH row " << (i + 1) << " is not consistent with the shoulder/elbow/wrist layout implied by"
           << " d_bs=" << d_bs_ << " d_se=" << d_se_ << " d_ew=" << d_ew_ << " a_wr=" << a_wr_;
        fail(os.str());
      }
    }
  }

  const FramePoints p = frame_points(*this, JointConfig{});
  if (std::abs((p.elbow - p.shoulder).norm() - d_se_) > 1e-9 || std::abs((p.wrist - p.elbow).norm() - d_ew_) > 1e-9 ||
      std::abs((p.center7 - p.wrist).norm() - a_wr_) > 1e-9)
    fail("frame points at zero joints violate the link lengths");
}

Transform mdh_transform(const MdhRow& row, double q) {
  const double ca = std::cos(row.alpha);
  const double sa = std::sin(row.alpha);
  const double th = row.theta_offset + q;
  const double ct = std::cos(th);
  const double st = std::sin(th);

  Transform t = Transform::Identity();
  auto& m = t.matrix();
  m(0, 0) = ct;
  m(0, 1) = -st;
  m(0, 2) = 0.0;
  m(1, 0) = ca * st;
  m(1, 1) = ca * ct;
  m(1, 2) = -sa;
  m(2, 0) = sa * st;
  m(2, 1) = sa * ct;
  m(2, 2) = ca;
  m(0, 3) = row.a;
  m(1, 3) = -sa * row.d;
  m(2, 3) = ca * row.d;
  return t;
}

Mat3 joint_rotation(const RobotParams& params, int i, double q) {
  return mdh_transform(params.row(i), q).linear();
}

std::array<Transform, kNumJoints> link_frames(const RobotParams& params, const JointConfig& joints) {
  std::array<Transform, kNumJoints> frames;
  Transform t = Transform::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    t = t * mdh_transform(params.row(i), joints[i]);
    frames[i] = t;
  }
  return frames;
}

Transform forward_kinematics(const RobotParams& params, const JointConfig& joints) {
  return link_frames(params, joints)[kNumJoints - 1];
}

FramePoints frame_points(const RobotParams& params, const JointConfig& joints) {
  const auto f = link_frames(params, joints);
  return FramePoints{f[1].translation(), f[3].translation(), f[5].translation(), f[6].translation()};
}

}  // namespace secik
