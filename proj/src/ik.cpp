#include "secik/ik.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace secik {

namespace {

constexpr double kHalfPi = kPi / 2.0;
// |sin q6| below this: both signs of q6 describe the same configuration.
constexpr double kSinQ6Zero = 1e-8;
// |t6| / d_ew below this: E sits on the joint-7 axis and q8 is free. Roots
// near t6 = 0 are double roots, accurate only to ~1e-8 m.
constexpr double kT6Zero = 3e-7;
// Both q5 atan2 arguments (m) below this: the elbow is straight.
constexpr double kElbowArgZero = 1e-10;
// |r33| at or beyond 1 - this: cos q2 = 0 and q1, q3 are coupled.
constexpr double kWristLikeMargin = 1e-10;

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

// Direction error (rad) of the horizontal E component against the arm-angle
// ray (-cos psi, -sin psi).
double arm_direction_error(double ex, double ey, double psi) {
  const double cx = -std::cos(psi);
  const double cy = -std::sin(psi);
  return std::abs(std::atan2(ex * cy - ey * cx, ex * cx + ey * cy));
}

}  // namespace

bool ToleranceSet::valid() const {
  for (double v : {pose_tol, angle_merge_tol, branch_residual_tol, sin_domain_tol, psi_tol, unit_circle_tol}) {
    if (!(v > 0.0) || !std::isfinite(v)) return false;
  }
  return true;
}

double QuarticSetup::unsquared(double a_wr, double t6, double r6) const {
  return tm1 + t6 * tm2 + t6 * t6 * tm3 + r6 * y * (k - a_wr * t6);
}

double QuarticSetup::unsquared_scale(double a_wr, double t6, double r6) const {
  return std::max({std::abs(tm1), std::abs(t6 * tm2), std::abs(t6 * t6 * tm3), std::abs(r6 * y * (k - a_wr * t6)),
                   std::numeric_limits<double>::min()});
}

Expected<QuarticSetup> build_quartic(double d_sc, double q, double psi, const RobotParams& params) {
  if (!(d_sc > 0.0)) return Error::ZeroSc;
  if (std::abs(std::sin(q)) < kTolParallel) return Error::NearAxisParallel;

  const double awr = params.a_wr();
  const double dse = params.d_se();
  const double dew = params.d_ew();
  const double awr2 = awr * awr;
  const double dew2 = dew * dew;
  const double dsc2 = d_sc * d_sc;
  const double cq = std::cos(q);
  const double cq2 = cq * cq;
  const double c2q = std::cos(2.0 * q);
  const double cpsi2 = std::cos(psi) * std::cos(psi);
  const double spsi2 = std::sin(psi) * std::sin(psi);

  QuarticSetup s;
  s.k = (awr2 + dse * dse - dsc2 - dew2) / 2.0;
  s.y = 2.0 * d_sc * cq;
  const double k = s.k;
  const double k2 = k * k;

  s.tm1 = cpsi2 * (k2 - (awr2 - dew2) * dsc2 * cq2) +
          0.5 * (-2.0 * awr2 * dsc2 + 2.0 * dew2 * dsc2 + k2 + k2 * c2q) * spsi2;
  s.tm2 = -2.0 * awr * cpsi2 * (k - dsc2 * cq2) + awr * (2.0 * dsc2 - k - k * c2q) * spsi2;
  s.tm3 = (6.0 * awr2 - 8.0 * dsc2 + 2.0 * awr2 * std::cos(2.0 * psi) - awr2 * std::cos(2.0 * (psi - q)) +
           2.0 * awr2 * c2q - awr2 * std::cos(2.0 * (psi + q))) /
          8.0;

  const double y2 = s.y * s.y;
  s.g.g4 = s.tm3 * s.tm3 + awr2 * y2;
  s.g.g3 = 2.0 * s.tm2 * s.tm3 - 2.0 * awr * (awr2 + k) * y2;
  s.g.g2 = s.tm2 * s.tm2 + 2.0 * s.tm1 * s.tm3 + (awr2 * awr2 - awr2 * (dew2 - 4.0 * k) + k2) * y2;
  s.g.g1 = 2.0 * s.tm1 * s.tm2 - 2.0 * awr * k * (awr2 - dew2 + k) * y2;
  s.g.g0 = s.tm1 * s.tm1 + (awr2 - dew2) * k2 * y2;
  return s;
}

namespace {

// Newton steps on the unsquared constraint as a function of q6. Near
// sin q6 = 0 the acos of the quartic root loses half the digits; the
// constraint itself is well conditioned in q6 there.
double polish_q6(const QuarticSetup& setup, double awr, double dew, double q6) {
  for (int it = 0; it < 3; ++it) {
    const double s6 = std::sin(q6);
    const double c6 = std::cos(q6);
    const double t6 = awr + dew * c6;
    const double r6 = dew * s6;
    const double f = setup.unsquared(awr, t6, r6);
    const double df = (setup.tm2 + 2.0 * t6 * setup.tm3 - r6 * setup.y * awr) * (-dew * s6) +
                      setup.y * (setup.k - awr * t6) * dew * c6;
    const double step = f / df;
    if (!std::isfinite(step) || std::abs(step) > 1e-4) break;
    const double next = q6 - step;
    const double tn = awr + dew * std::cos(next);
    if (std::abs(setup.unsquared(awr, tn, dew * std::sin(next))) > std::abs(f)) break;
    q6 = next;
    if (std::abs(step) < 1e-16) break;
  }
  return q6;
}

struct PairEquations {
  double d_sc, sq, cq, spsi, cpsi, k, awr, dew;

  // Pose equation (m^2) and arm equation (m) at (q6, q8), with derivatives.
  void eval(double q6, double q8, Eigen::Vector2d& f, Eigen::Matrix2d& jac) const {
    const double s6 = std::sin(q6), c6 = std::cos(q6);
    const double s8 = std::sin(q8), c8 = std::cos(q8);
    const double t6 = awr + dew * c6, r6 = dew * s6;
    const double dt6 = -dew * s6, dr6 = dew * c6;
    f(0) = awr * t6 - d_sc * (r6 * cq - t6 * c8 * sq) - k;
    f(1) = t6 * s8 * cpsi + (r6 * sq + t6 * cq * c8) * spsi;
    jac(0, 0) = awr * dt6 - d_sc * (dr6 * cq - dt6 * c8 * sq);
    jac(0, 1) = -d_sc * t6 * s8 * sq;
    jac(1, 0) = dt6 * s8 * cpsi + (dr6 * sq + dt6 * cq * c8) * spsi;
    jac(1, 1) = t6 * c8 * cpsi - t6 * cq * s8 * spsi;
  }
};

// Newton steps on the two constraints that define (q6, q8) before any
// elimination. Dividing by d_sc t6 sin q to get cos q8 magnifies errors in q6
// when q or t6 is small; the joint system does not.
void polish_q6_q8(const PairEquations& eq, double& q6, double& q8) {
  Eigen::Vector2d f;
  Eigen::Matrix2d jac;
  auto size = [&](const Eigen::Vector2d& v) { return std::abs(v(0)) / eq.d_sc + std::abs(v(1)); };
  eq.eval(q6, q8, f, jac);
  for (int it = 0; it < 2; ++it) {
    const Eigen::Vector2d step = jac.partialPivLu().solve(f);
    if (!step.allFinite() || step.cwiseAbs().maxCoeff() > 1e-4) return;
    Eigen::Vector2d fn;
    Eigen::Matrix2d jn;
    eq.eval(q6 - step(0), q8 - step(1), fn, jn);
    if (!(size(fn) < size(f))) return;
    q6 -= step(0);
    q8 -= step(1);
    f = fn;
    jac = jn;
  }
}

}  // namespace

Q6Q8Result solve_q6_q8(const QuarticSetup& setup, double d_sc, double q, double psi, const RobotParams& params,
                       const ToleranceSet& tol) {
  Q6Q8Result out;
  out.candidates.reserve(8);

  const auto roots = solve_quartic(setup.g);
  if (!roots) {
    out.rejected.push_back({BranchLabel{}, roots.error(), 0.0});
    return out;
  }
  out.roots = *roots;
  const RealRoots& rr = out.roots;

  // Slots: distinct real roots first, then repeated copies, then complex
  // roots, then roots lost to a degree drop. Every slot is accounted for.
  int slot = rr.count;
  for (int i = 0; i < rr.count; ++i) {
    for (int m = 1; m < rr.multiplicity[i]; ++m) out.rejected.push_back({{slot++, 0, 0, 0}, Error::RepeatedRoot, rr.values[i]});
  }
  for (int i = 0; i < rr.complex_count; ++i) out.rejected.push_back({{slot++, 0, 0, 0}, Error::ComplexRoot, 0.0});
  while (slot < 4) out.rejected.push_back({{slot++, 0, 0, 0}, Error::DomainViolation, std::numeric_limits<double>::infinity()});

  const double awr = params.a_wr();
  const double dew = params.d_ew();
  const double sq = std::sin(q);
  const double cq = std::cos(q);
  const double spsi = std::sin(psi);
  const double cpsi = std::cos(psi);

  for (int i = 0; i < rr.count; ++i) {
    const double root = rr.values[i];
    double c6 = (root - awr) / dew;
    if (std::abs(c6) > 1.0 + tol.sin_domain_tol) {
      out.rejected.push_back({{i, 0, 0, 0}, Error::DomainViolation, c6});
      continue;
    }
    c6 = std::clamp(c6, -1.0, 1.0);
    const double s6_abs = std::sqrt(std::max(0.0, 1.0 - c6 * c6));

    // Sign of sin q6 from the constraint before squaring, each sign polished
    // first. A merged near-double root can hold one solution of each sign,
    // neither of which sits exactly at the merged value.
    std::array<int, 2> signs{};
    std::array<double, 2> q6s{};
    int n_signs = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int sign : {1, -1}) {
      const double q6 = polish_q6(setup, awr, dew, std::atan2(sign * s6_abs, c6));
      const double t6 = awr + dew * std::cos(q6);
      const double r6 = dew * std::sin(q6);
      const double res = std::abs(setup.unsquared(awr, t6, r6)) / setup.unsquared_scale(awr, t6, r6);
      best = std::min(best, res);
      if (res <= tol.branch_residual_tol) {
        signs[n_signs] = sign;
        q6s[n_signs] = q6;
        ++n_signs;
      }
    }
    if (n_signs == 0) {
      out.rejected.push_back({{i, 0, 0, 0}, Error::UnsquaredResidual, best});
      continue;
    }
    if (s6_abs < kSinQ6Zero) n_signs = 1;

    for (int j = 0; j < n_signs; ++j) {
      const BranchLabel label{i, signs[j], 0, 0};
      const double q6 = q6s[j];
      const double t6 = awr + dew * std::cos(q6);
      const double r6 = dew * std::sin(q6);

      if (std::abs(t6) < kT6Zero * dew) {
        out.rejected.push_back({label, Error::Q8Indeterminate, t6});
        continue;
      }
      // Pose equation, linear in cos q8.
      double c8 = (setup.k + d_sc * r6 * cq - awr * t6) / (d_sc * t6 * sq);
      if (std::abs(c8) > 1.0 + tol.sin_domain_tol) {
        out.rejected.push_back({label, Error::PoseEquation, c8});
        continue;
      }
      c8 = std::clamp(c8, -1.0, 1.0);

      // Arm equation: (Ex, Ey) must point along (-cos psi, -sin psi). Where
      // cos psi dominates, sin q8 follows linearly from Ey = Ex tan psi;
      // elsewhere the magnitude comes from the unit circle and the sign from
      // the ray direction.
      const double ex = -r6 * sq - t6 * cq * c8;
      double s8 = 0.0;
      if (std::abs(cpsi) >= std::abs(spsi)) {
        s8 = ex * spsi / (cpsi * t6);
      } else {
        s8 = -sign_of(spsi) * sign_of(t6) * std::sqrt(std::max(0.0, 1.0 - c8 * c8));
      }
      const double circle = std::abs(s8 * s8 + c8 * c8 - 1.0);
      if (circle > tol.unit_circle_tol) {
        out.rejected.push_back({label, Error::ArmEquation, circle});
        continue;
      }
      const double ey = t6 * s8;
      if (std::hypot(ex, ey) < kTolLength) {
        out.rejected.push_back({label, Error::DegenerateArm, std::hypot(ex, ey)});
        continue;
      }

      double q6p = q6;
      double q8p = std::atan2(s8, c8);
      polish_q6_q8(PairEquations{d_sc, sq, cq, spsi, cpsi, setup.k, awr, dew}, q6p, q8p);
      const double t6p = awr + dew * std::cos(q6p);
      const double dir_err = arm_direction_error(-dew * std::sin(q6p) * sq - t6p * cq * std::cos(q8p), t6p * std::sin(q8p), psi);
      if (dir_err > 100.0 * tol.psi_tol) {
        out.rejected.push_back({label, Error::ArmEquation, dir_err});
        continue;
      }

      Q6Q8Candidate c;
      c.root_index = i;
      c.q6_sign = signs[j];
      c.q6 = q6p;
      c.t6 = awr + dew * std::cos(q6p);
      c.r6 = dew * std::sin(q6p);
      c.q8 = normalize_angle(q8p);
      c.sin_q8 = std::sin(c.q8);
      c.cos_q8 = std::cos(c.q8);
      c.unsquared = std::abs(setup.unsquared(awr, c.t6, c.r6)) / setup.unsquared_scale(awr, c.t6, c.r6);
      c.arm_equation = dir_err;
      out.candidates.push_back(c);
    }
  }
  if (out.candidates.empty()) out.rejected.push_back({BranchLabel{}, Error::NoValidRoots, static_cast<double>(rr.count)});
  return out;
}

double solve_q7(double q8, double al) { return normalize_angle(q8 + al); }

Vec3 shoulder_in_frame6(double d_sc, double q, double q8, const RobotParams& params) {
  const double sq = std::sin(q);
  return Vec3(params.a_wr() + d_sc * sq * std::cos(q8), d_sc * std::cos(q), d_sc * sq * std::sin(q8));
}

Expected<std::array<double, 2>> solve_q4(const Vec3& s6, const RobotParams& params, double sin_domain_tol) {
  const double dse = params.d_se();
  const double dew = params.d_ew();
  const double c4 = (s6.squaredNorm() - dew * dew - dse * dse) / (2.0 * dse * dew);
  if (!(std::abs(c4) <= 1.0 + sin_domain_tol)) return Error::Unreachable;
  const double a = std::acos(std::clamp(c4, -1.0, 1.0));
  return std::array<double, 2>{a, -a};
}

Expected<double> solve_q5(const Vec3& s6, double q6, double q4) {
  const double num = -s6.x() * std::sin(q6) - s6.y() * std::cos(q6);
  const double den = s6.z();
  if (std::abs(num) < kElbowArgZero && std::abs(den) < kElbowArgZero) return Error::ElbowDegenerate;
  const double s = sign_of(std::sin(q4));
  return std::atan2(s * num, s * den);
}

Expected<ShoulderSolutions> solve_q123(const Mat3& r07, double q4, double q5, double q6, double q7,
                                       const RobotParams& params) {
  const Mat3 r37 = joint_rotation(params, 3, q4) * joint_rotation(params, 4, q5) * joint_rotation(params, 5, q6) *
                   joint_rotation(params, 6, q7);
  const Mat3 r = r07 * r37.transpose();
  const double r33 = r(2, 2);
  if (!(std::abs(r33) < 1.0 - kWristLikeMargin)) return Error::WristLikeDegenerate;

  ShoulderSolutions out;
  const double a = std::acos(r33);
  for (int b = 0; b < 2; ++b) {
    const double q2 = kHalfPi + out.q2_sign[b] * a;
    const double sgn2 = sign_of(std::cos(q2));
    const double q1 = std::atan2(-r(1, 2) * sgn2, -r(0, 2) * sgn2);
    const double q3 = std::atan2(-r(2, 0) * sgn2, -r(2, 1) * sgn2);
    out.angles[b] = {q1, normalize_angle(q2), q3};
  }
  return out;
}

namespace {

// Shared pipeline: q4..q7 from the reduced description, q1..q3 from
// `target`'s rotation, every branch checked against `target`.
Expected<SolutionSet> solve_reduced(const ReducedPose& reduced, double psi, const Transform& target,
                                    const RobotParams& params, const ToleranceSet& tol) {
  if (!tol.valid()) return Error::InvalidInput;
  if (!std::isfinite(psi)) return Error::InvalidInput;
  psi = normalize_angle(psi);

  const auto setup = build_quartic(reduced.d_sc, reduced.q, psi, params);
  if (!setup) return setup.error();

  SolutionSet set;
  set.reduced = reduced;
  set.setup = *setup;
  set.branches.reserve(16);

  auto q68 = solve_q6_q8(set.setup, reduced.d_sc, reduced.q, psi, params, tol);
  set.roots = q68.roots;
  set.rejected = std::move(q68.rejected);

  const Mat3 r07 = target.linear();
  const double sq = std::sin(reduced.q);
  const double cq = std::cos(reduced.q);

  std::vector<IkBranch> raw;
  raw.reserve(32);
  for (const auto& c : q68.candidates) {
    BranchLabel label{c.root_index, c.q6_sign, 0, 0};
    const double q7 = solve_q7(c.q8, reduced.al);
    const Vec3 s6 = shoulder_in_frame6(reduced.d_sc, reduced.q, c.q8, params);
    const double pose_eq =
        params.a_wr() * c.t6 - reduced.d_sc * (c.r6 * cq - c.t6 * std::cos(c.q8) * sq) - set.setup.k;

    const auto q4s = solve_q4(s6, params, tol.sin_domain_tol);
    if (!q4s) {
      set.rejected.push_back({label, q4s.error(), s6.norm()});
      continue;
    }
    for (int a = 0; a < 2; ++a) {
      label.q4_sign = a == 0 ? 1 : -1;
      label.q2_sign = 0;
      const double q4 = (*q4s)[a];
      const auto q5 = solve_q5(s6, c.q6, q4);
      if (!q5) {
        set.rejected.push_back({label, q5.error(), q4});
        continue;
      }
      const auto shoulder = solve_q123(r07, q4, *q5, c.q6, q7, params);
      if (!shoulder) {
        set.rejected.push_back({label, shoulder.error(), 0.0});
        continue;
      }
      for (int b = 0; b < 2; ++b) {
        label.q2_sign = shoulder->q2_sign[b];
        const auto& s = shoulder->angles[b];
        IkBranch br;
        br.joints = JointConfig({s[0], s[1], s[2], q4, *q5, c.q6, q7}).normalized();
        br.label = label;
        br.t6 = c.t6;
        br.r6 = c.r6;
        br.q8 = c.q8;
        br.residuals.unsquared = c.unsquared;
        br.residuals.arm_equation = c.arm_equation;
        br.residuals.pose_equation = std::abs(pose_eq);

        const auto frames = link_frames(params, br.joints);
        const PoseError pe = pose_error(frames[6], target);
        br.residuals.translation = pe.translation;
        br.residuals.rotation = pe.rotation;
        if (!(pe.translation <= tol.pose_tol && pe.rotation <= tol.pose_tol)) {
          set.rejected.push_back({label, Error::FkMismatch, std::max(pe.translation, pe.rotation)});
          continue;
        }
        const FramePoints pts{frames[1].translation(), frames[3].translation(), frames[5].translation(),
                              frames[6].translation()};
        const auto psi_b = arm_angle(pts, frames[6].linear().col(2));
        if (!psi_b) {
          set.rejected.push_back({label, psi_b.error(), 0.0});
          continue;
        }
        br.residuals.arm_angle = angle_distance(*psi_b, psi);
        if (!(br.residuals.arm_angle <= tol.psi_tol)) {
          set.rejected.push_back({label, Error::ArmAngleMismatch, br.residuals.arm_angle});
          continue;
        }
        raw.push_back(br);
      }
    }
  }

  auto key = [](const IkBranch& b) {
    return std::make_tuple(b.label.root_index, -b.label.q6_sign, -b.label.q4_sign, -b.label.q2_sign);
  };
  std::sort(raw.begin(), raw.end(), [&](const IkBranch& x, const IkBranch& y) { return key(x) < key(y); });
  for (const auto& b : raw) {
    const bool dup = std::any_of(set.branches.begin(), set.branches.end(), [&](const IkBranch& o) {
      return o.joints.max_angle_distance(b.joints) < tol.angle_merge_tol;
    });
    if (dup) set.rejected.push_back({b.label, Error::Duplicate, 0.0});
    else set.branches.push_back(b);
  }
  return set;
}

}  // namespace

Expected<SolutionSet> solve_special(const ReducedPose& reduced, double psi, const RobotParams& params,
                                    const ToleranceSet& tol) {
  const Transform target = special_pose(params, reduced.d_sc, reduced.q, reduced.al);
  return solve_reduced(reduced, psi, target, params, tol);
}

Expected<SolutionSet> solve(const IkRequest& request) {
  if (!request.pose.translation().allFinite()) return Error::InvalidInput;
  if (!is_rotation(request.pose.linear())) return Error::InvalidRotation;
  const auto reduced = reduce_pose(request.params, request.pose);
  if (!reduced) return reduced.error();
  return solve_reduced(*reduced, request.psi, request.pose, request.params, request.tolerances);
}

Expected<SolutionSet> solve(const RobotParams& params, const Transform& pose, double psi, const ToleranceSet& tol) {
  return solve(IkRequest{pose, psi, params, tol});
}

}  // namespace secik
