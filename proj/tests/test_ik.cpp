#include <gtest/gtest.h>

#include <random>
#include <set>

#include "secik/ik.hpp"
#include "secik/verify.hpp"
#include "support.hpp"

using namespace secik;

namespace {

double wrap_diff(double a, double b) { return std::abs(normalize_angle(a - b)); }

// ^0R_3 of the shoulder written out in q1, q2, q3.
Mat3 reference_r03(double q1, double q2, double q3) {
  const double s1 = std::sin(q1), c1 = std::cos(q1);
  const double s2 = std::sin(q2), c2 = std::cos(q2);
  const double s3 = std::sin(q3), c3 = std::cos(q3);
  Mat3 r;
  r << -c1 * s2 * s3 - c3 * s1, s1 * s3 - c1 * c3 * s2, -c1 * c2,
       c1 * c3 - s1 * s2 * s3, -c3 * s1 * s2 - c1 * s3, -c2 * s1,
       -c2 * s3, -c2 * c3, s2;
  return r;
}

// Left side of the quartic before expansion, with r6^2 from the circle
// (t - a_wr)^2 + r6^2 = d_ew^2.
double squared_constraint(const QuarticSetup& s, const RobotParams& p, double t) {
  const double lhs = s.tm1 + t * s.tm2 + t * t * s.tm3;
  const double r6sq = p.d_ew() * p.d_ew() - (t - p.a_wr()) * (t - p.a_wr());
  const double rhs = s.y * (s.k - p.a_wr() * t);
  return lhs * lhs - r6sq * rhs * rhs;
}

struct Generated {
  JointConfig joints;
  Transform pose;
  double psi;
  ReducedPose reduced;
};

Generated generate(const RobotParams& p, std::mt19937_64& rng) {
  Generated g;
  g.joints = secik::testing::generic_joints(p, rng);
  g.pose = forward_kinematics(p, g.joints);
  g.psi = *arm_angle(p, g.joints);
  g.reduced = *reduce_pose(p, g.pose);
  return g;
}

}  // namespace

TEST(BuildQuartic, PsiZeroCollapse) {
  const RobotParams p = RobotParams::moz1_placeholder();
  const double d_sc = 0.42, q = -1.1;
  const auto s = build_quartic(d_sc, q, 0.0, p);
  ASSERT_TRUE(s);
  const double a = p.a_wr(), dew = p.d_ew(), cq = std::cos(q);
  EXPECT_NEAR(s->k, (a * a + p.d_se() * p.d_se() - d_sc * d_sc - dew * dew) / 2.0, 1e-15);
  EXPECT_NEAR(s->y, 2.0 * d_sc * cq, 1e-15);
  EXPECT_NEAR(s->tm1, s->k * s->k - (a * a - dew * dew) * d_sc * d_sc * cq * cq, 1e-15);
  EXPECT_NEAR(s->tm2, -2.0 * a * (s->k - d_sc * d_sc * cq * cq), 1e-15);
}

TEST(BuildQuartic, ZeroOffsetDropsOddTerms) {
  const RobotParams p(0.25, 0.35, 0.30, 0.0);
  const auto s = build_quartic(0.5, -0.9, 0.7, p);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->tm2, 0.0);
  EXPECT_EQ(s->g.g3, 0.0);
  EXPECT_EQ(s->g.g1, 0.0);
}

TEST(BuildQuartic, Errors) {
  const RobotParams p = RobotParams::moz1_placeholder();
  EXPECT_EQ(build_quartic(0.0, -1.0, 0.2, p).error(), Error::ZeroSc);
  EXPECT_EQ(build_quartic(0.4, 0.0, 0.2, p).error(), Error::NearAxisParallel);
  EXPECT_EQ(build_quartic(0.4, -kPi, 0.2, p).error(), Error::NearAxisParallel);
}

class QuarticIdentity : public ::testing::TestWithParam<secik::testing::NamedParams> {};

TEST_P(QuarticIdentity, ExpansionMatchesPointwise) {
  const RobotParams& p = GetParam().params;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(0.05, p.d_se() + p.d_ew() + p.a_wr());
  std::uniform_real_distribution<double> q(-kPi + 0.01, -0.01);
  std::uniform_real_distribution<double> psi(-kPi, kPi);
  std::uniform_real_distribution<double> t(p.a_wr() - p.d_ew(), p.a_wr() + p.d_ew());
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto s = build_quartic(d(rng), q(rng), psi(rng), p);
    ASSERT_TRUE(s);
    for (int k = 0; k < 5; ++k) {
      const double tv = t(rng);
      const double expected = squared_constraint(*s, p, tv);
      const double scale = std::abs(s->g.g4 * std::pow(tv, 4)) + std::abs(s->g.g3 * std::pow(tv, 3)) +
                           std::abs(s->g.g2 * tv * tv) + std::abs(s->g.g1 * tv) + std::abs(s->g.g0);
      worst = std::max(worst, std::abs(s->g.evaluate(tv) - expected) / scale);
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST_P(QuarticIdentity, UnsquaredConstraintVanishesOnTrueJoints) {
  const RobotParams& p = GetParam().params;
  std::mt19937_64 rng(22);
  for (int i = 0; i < 2000; ++i) {
    const Generated g = generate(p, rng);
    const auto s = build_quartic(g.reduced.d_sc, g.reduced.q, g.psi, p);
    ASSERT_TRUE(s);
    const double t6 = p.a_wr() + p.d_ew() * std::cos(g.joints[5]);
    const double r6 = p.d_ew() * std::sin(g.joints[5]);
    EXPECT_LT(std::abs(s->unsquared(p.a_wr(), t6, r6)) / s->unsquared_scale(p.a_wr(), t6, r6), 1e-10);
    EXPECT_LT(std::abs(s->g.evaluate(t6)) / std::max(1e-300, s->g.max_abs()), 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Arms, QuarticIdentity, ::testing::ValuesIn(secik::testing::param_sets()),
                         secik::testing::param_name);

TEST(SolveQ6Q8, RecoversKnownPair) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const Generated g = generate(p, rng);
    const auto s = build_quartic(g.reduced.d_sc, g.reduced.q, g.psi, p);
    ASSERT_TRUE(s);
    const auto r = solve_q6_q8(*s, g.reduced.d_sc, g.reduced.q, g.psi, p);
    const double q8 = normalize_angle(g.joints[6] - g.reduced.al);
    bool found = false;
    for (const auto& c : r.candidates) {
      EXPECT_LT(std::abs(c.sin_q8 * c.sin_q8 + c.cos_q8 * c.cos_q8 - 1.0), 1e-8);
      found |= wrap_diff(c.q6, g.joints[5]) < 1e-8 && wrap_diff(c.q8, q8) < 1e-8;

      // Pose equation with the recovered pair.
      const Vec3 s6 = shoulder_in_frame6(g.reduced.d_sc, g.reduced.q, c.q8, p);
      const double pose_eq = p.a_wr() * c.t6 -
                             g.reduced.d_sc * (c.r6 * std::cos(g.reduced.q) - c.t6 * c.cos_q8 * std::sin(g.reduced.q)) -
                             s->k;
      EXPECT_LT(std::abs(pose_eq), 1e-8);
      EXPECT_TRUE(s6.allFinite());
    }
    ASSERT_TRUE(found) << "sample " << i;
  }
}

TEST(SolveQ6Q8, EveryRootSlotAccounted) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(32);
  for (int i = 0; i < 500; ++i) {
    const Generated g = generate(p, rng);
    const auto s = build_quartic(g.reduced.d_sc, g.reduced.q, g.psi, p);
    const auto r = solve_q6_q8(*s, g.reduced.d_sc, g.reduced.q, g.psi, p);
    std::set<int> covered;
    for (const auto& c : r.candidates) covered.insert(c.root_index);
    for (const auto& x : r.rejected) covered.insert(x.label.root_index);
    for (int slot = 0; slot < 4; ++slot) EXPECT_TRUE(covered.count(slot)) << "slot " << slot;
  }
}

TEST(SolveQ6Q8, DomainViolation) {
  const RobotParams p = RobotParams::moz1_placeholder();
  // Single root at t6 with cos q6 = 1.2.
  QuarticSetup s;
  const double t_bad = p.a_wr() + 1.2 * p.d_ew();
  s.g = QuarticCoeffs{0, 0, 0, 1, -t_bad};
  const auto r = solve_q6_q8(s, 0.4, -1.0, 0.3, p);
  EXPECT_TRUE(r.candidates.empty());
  bool domain = false, none = false;
  for (const auto& x : r.rejected) {
    if (x.label.root_index == 0 && x.reason == Error::DomainViolation) {
      domain = true;
      EXPECT_NEAR(x.value, 1.2, 1e-12);
    }
    none |= x.reason == Error::NoValidRoots;
  }
  EXPECT_TRUE(domain);
  EXPECT_TRUE(none);
}

TEST(SolveQ7, Wraps) {
  EXPECT_EQ(solve_q7(0.0, 0.0), 0.0);
  EXPECT_NEAR(solve_q7(kPi, kPi), 0.0, 1e-15);
  EXPECT_NEAR(solve_q7(2.0, 2.0), 4.0 - 2.0 * kPi, 1e-15);
}

TEST(ShoulderInFrame6, AxisAligned) {
  const RobotParams p = RobotParams::moz1_placeholder();
  const Vec3 s = shoulder_in_frame6(0.5, -kPi / 2.0, 0.0, p);
  EXPECT_NEAR(s.x(), p.a_wr() - 0.5, 1e-15);
  EXPECT_NEAR(s.y(), 0.0, 1e-15);
  EXPECT_NEAR(s.z(), 0.0, 1e-15);
}

TEST(ShoulderInFrame6, MatchesMatrixProduct) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::uniform_real_distribution<double> d(0.05, 0.8);
  for (int i = 0; i < 1000; ++i) {
    const double d_sc = d(rng), q = -std::abs(u(rng)), al = u(rng), q8 = u(rng);
    const Transform t07 = special_pose(p, d_sc, q, al);
    const Transform t67 = mdh_transform(p.row(6), q8 + al);
    const Vec3 expected = t67 * (t07.inverse() * p.shoulder());
    EXPECT_LT((shoulder_in_frame6(d_sc, q, q8, p) - expected).norm(), 1e-12);
  }
}

TEST(SolveQ4, Cases) {
  const RobotParams p = RobotParams::moz1_placeholder();
  const double dse = p.d_se(), dew = p.d_ew();
  auto r = solve_q4(Vec3(0.0, 0.0, std::hypot(dse, dew)), p);
  ASSERT_TRUE(r);
  EXPECT_NEAR((*r)[0], kPi / 2.0, 1e-12);
  EXPECT_NEAR((*r)[1], -kPi / 2.0, 1e-12);

  r = solve_q4(Vec3(0.0, dse + dew, 0.0), p);
  ASSERT_TRUE(r);
  EXPECT_NEAR((*r)[0], 0.0, 1e-7);
  EXPECT_NEAR((*r)[1], 0.0, 1e-7);

  EXPECT_EQ(solve_q4(Vec3(0.0, 0.0, dse + dew + 0.01), p).error(), Error::Unreachable);
  EXPECT_EQ(solve_q4(Vec3(0.0, 0.0, std::abs(dse - dew) - 0.01), p).error(), Error::Unreachable);
}

TEST(SolveQ5, ElbowDegenerate) {
  const RobotParams p = RobotParams::moz1_placeholder();
  const Vec3 s6(0.0, 0.0, p.d_ew() + p.d_se() * std::cos(0.0));
  EXPECT_EQ(solve_q5(Vec3(0.0, 0.0, 0.0), 0.4, 0.0).error(), Error::ElbowDegenerate);
  EXPECT_EQ(solve_q5(Vec3(1e-12, -1e-12, 1e-12), 0.4, 0.3).error(), Error::ElbowDegenerate);
  EXPECT_TRUE(solve_q5(s6, 0.4, 0.3));
}

TEST(JointRecovery, RoundTripPieces) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(34);
  for (int i = 0; i < 1000; ++i) {
    const Generated g = generate(p, rng);
    const JointConfig& j = g.joints;
    const double q8 = normalize_angle(j[6] - g.reduced.al);
    EXPECT_LT(wrap_diff(solve_q7(q8, g.reduced.al), j[6]), 1e-12);

    const Vec3 s6 = shoulder_in_frame6(g.reduced.d_sc, g.reduced.q, q8, p);
    const auto q4 = solve_q4(s6, p);
    ASSERT_TRUE(q4);
    const int pick = wrap_diff((*q4)[0], j[3]) < wrap_diff((*q4)[1], j[3]) ? 0 : 1;
    EXPECT_LT(wrap_diff((*q4)[pick], j[3]), 1e-8);

    const auto q5 = solve_q5(s6, j[5], j[3]);
    ASSERT_TRUE(q5);
    EXPECT_LT(wrap_diff(*q5, j[4]), 1e-8);
    const double s4 = std::sin(j[3]);
    EXPECT_NEAR(p.d_se() * s4 * std::sin(*q5), -s6.y() * std::cos(j[5]) - s6.x() * std::sin(j[5]), 1e-8);
    EXPECT_NEAR(p.d_se() * std::cos(*q5) * s4, s6.z(), 1e-8);

    const auto sh = solve_q123(g.pose.linear(), j[3], j[4], j[5], j[6], p);
    ASSERT_TRUE(sh);
    bool match = false;
    const Mat3 r03 = reference_r03(j[0], j[1], j[2]);
    for (int b = 0; b < 2; ++b) {
      const auto& a = sh->angles[b];
      match |= wrap_diff(a[0], j[0]) < 1e-8 && wrap_diff(a[1], j[1]) < 1e-8 && wrap_diff(a[2], j[2]) < 1e-8;
      EXPECT_LT((reference_r03(a[0], a[1], a[2]) - r03).cwiseAbs().maxCoeff(), 1e-9);
    }
    EXPECT_TRUE(match);
  }
}

TEST(SolveQ123, ReferenceShoulderMatrixMatchesModel) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(35);
  for (int i = 0; i < 100; ++i) {
    const JointConfig j = verify::random_joints(rng);
    const Mat3 r = link_frames(p, j)[2].linear();
    EXPECT_LT((reference_r03(j[0], j[1], j[2]) - r).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(SolveQ123, WristLikeDegenerate) {
  const RobotParams p = RobotParams::moz1_placeholder();
  JointConfig j{{0.3, kPi / 2.0, 0.2, 0.9, 0.4, 0.6, -0.5}};
  const Transform t = forward_kinematics(p, j);
  EXPECT_EQ(solve_q123(t.linear(), j[3], j[4], j[5], j[6], p).error(), Error::WristLikeDegenerate);
}

TEST(SolveSpecial, RoundTrip) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(36);
  for (int i = 0; i < 200; ++i) {
    const Generated g = generate(p, rng);
    // Rotate the configuration into the special frame by moving q1 and
    // reading the reduced pose back.
    const auto set = solve_special(g.reduced, g.psi, p);
    ASSERT_TRUE(set);
    const Transform target = special_pose(p, g.reduced.d_sc, g.reduced.q, g.reduced.al);
    ASSERT_FALSE(set->branches.empty());
    for (const auto& b : set->branches) {
      const PoseError e = pose_error(forward_kinematics(p, b.joints), target);
      EXPECT_LE(e.translation, 1e-8);
      EXPECT_LE(e.rotation, 1e-8);
      // q4..q7 do not depend on the alignment.
    }
    bool found = false;
    for (const auto& b : set->branches) {
      bool same = true;
      for (int k = 3; k < 7; ++k) same &= wrap_diff(b.joints[k], g.joints[k]) < 1e-6;
      found |= same;
    }
    EXPECT_TRUE(found);
  }
}

TEST(SolveSpecial, UnreachableIsEmptyWithReasons) {
  const RobotParams p = RobotParams::moz1_placeholder();
  ReducedPose r;
  r.d_sc = p.d_se() + p.d_ew() + p.a_wr() + 0.2;
  r.q = -1.0;
  r.al = 0.4;
  const auto set = solve_special(r, 0.3, p);
  ASSERT_TRUE(set);
  EXPECT_TRUE(set->branches.empty());
  std::set<int> slots;
  for (const auto& x : set->rejected) {
    slots.insert(x.label.root_index);
    EXPECT_NE(to_string(x.reason), "unknown");
  }
  for (int s = 0; s < 4; ++s) EXPECT_TRUE(slots.count(s)) << s;
}

TEST(Solve, IdentityRotationPose) {
  const RobotParams p = RobotParams::moz1_placeholder();
  Transform t = Transform::Identity();
  t.translation() = Vec3(0.45, 0.15, 0.1);
  const auto set = solve(p, t, 0.5);
  ASSERT_TRUE(set);
  EXPECT_LE(set->branches.size(), 16u);
  EXPECT_FALSE(set->branches.empty());
  for (const auto& b : set->branches) {
    const PoseError e = pose_error(forward_kinematics(p, b.joints), t);
    EXPECT_LE(e.translation, 1e-9);
    EXPECT_LE(e.rotation, 1e-9);
  }
}

TEST(Solve, RequestErrors) {
  const RobotParams p = RobotParams::moz1_placeholder();
  Transform t = Transform::Identity();
  t.translation() = Vec3(0.0, 0.0, 0.6);  // C straight above S with z7 = zv
  EXPECT_EQ(solve(p, t, 0.1).error(), Error::AxisParallel);

  t.translation() = p.shoulder();
  EXPECT_EQ(solve(p, t, 0.1).error(), Error::ZeroSc);

  t.translation() = Vec3(0.4, 0.1, 0.2);
  t.linear()(0, 0) = 1.001;
  EXPECT_EQ(solve(p, t, 0.1).error(), Error::InvalidRotation);

  t.linear() = Mat3::Identity();
  EXPECT_EQ(solve(p, t, std::nan("")).error(), Error::InvalidInput);
  t.translation().x() = INFINITY;
  EXPECT_EQ(solve(p, t, 0.1).error(), Error::InvalidInput);

  t.translation().x() = 0.4;
  ToleranceSet bad;
  bad.pose_tol = 0.0;
  EXPECT_EQ(solve(p, t, 0.1, bad).error(), Error::InvalidInput);
}

TEST(Solve, PsiOutsideRangeIsWrapped) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(37);
  const Generated g = generate(p, rng);
  const auto a = solve(p, g.pose, g.psi);
  const auto b = solve(p, g.pose, g.psi + 2.0 * kPi);
  ASSERT_TRUE(a && b);
  ASSERT_EQ(a->branches.size(), b->branches.size());
  for (std::size_t i = 0; i < a->branches.size(); ++i) {
    EXPECT_LT(a->branches[i].joints.max_angle_distance(b->branches[i].joints), 1e-9);
  }
}

class SolveProperties : public ::testing::TestWithParam<secik::testing::NamedParams> {};

TEST_P(SolveProperties, RoundTripAndBranchInvariants) {
  const RobotParams& p = GetParam().params;
  std::mt19937_64 rng(40);
  const ToleranceSet tol;
  const int samples = 10000;
  int recovered = 0;
  for (int i = 0; i < samples; ++i) {
    const Generated g = generate(p, rng);
    const auto set = solve(p, g.pose, g.psi);
    ASSERT_TRUE(set) << to_string(set.error());
    ASSERT_LE(set->branches.size(), 16u);

    bool found = false;
    for (std::size_t a = 0; a < set->branches.size(); ++a) {
      const IkBranch& b = set->branches[a];
      found |= b.joints.max_angle_distance(g.joints) < 1e-6;

      const PoseError e = pose_error(forward_kinematics(p, b.joints), g.pose);
      ASSERT_LE(e.translation, tol.pose_tol);
      ASSERT_LE(e.rotation, tol.pose_tol);
      ASSERT_LE(wrap_diff(*arm_angle(p, b.joints), g.psi), tol.psi_tol);
      ASSERT_LE(b.residuals.unsquared, tol.branch_residual_tol);
      ASSERT_LE(std::abs(b.t6 - p.a_wr()), p.d_ew() + tol.sin_domain_tol);
      for (double q : b.joints.q) {
        ASSERT_GT(q, -kPi);
        ASSERT_LE(q, kPi);
      }

      for (std::size_t c = 0; c < a; ++c) {
        const IkBranch& o = set->branches[c];
        ASSERT_FALSE(o.label == b.label);
        ASSERT_GE(o.joints.max_angle_distance(b.joints), tol.angle_merge_tol);
        const auto ko = std::make_tuple(o.label.root_index, -o.label.q6_sign, -o.label.q4_sign, -o.label.q2_sign);
        const auto kb = std::make_tuple(b.label.root_index, -b.label.q6_sign, -b.label.q4_sign, -b.label.q2_sign);
        ASSERT_LT(ko, kb);
      }
    }
    recovered += found;
  }
  EXPECT_GE(recovered, static_cast<int>(0.99 * samples)) << recovered << " / " << samples;
}

INSTANTIATE_TEST_SUITE_P(Arms, SolveProperties, ::testing::ValuesIn(secik::testing::param_sets()),
                         secik::testing::param_name);

TEST(Solve, ZeroOffsetArm) {
  const RobotParams p(0.25, 0.35, 0.30, 0.0);
  std::mt19937_64 rng(41);
  int recovered = 0;
  const int samples = 2000;
  for (int i = 0; i < samples; ++i) {
    const Generated g = generate(p, rng);
    const auto set = solve(p, g.pose, g.psi);
    ASSERT_TRUE(set);
    bool found = false;
    for (const auto& b : set->branches) found |= b.joints.max_angle_distance(g.joints) < 1e-6;
    recovered += found;
  }
  EXPECT_GE(recovered, static_cast<int>(0.99 * samples));
}

TEST(Solve, Deterministic) {
  const RobotParams p = RobotParams::moz1_placeholder();
  std::mt19937_64 rng(42);
  const Generated g = generate(p, rng);
  const auto a = solve(p, g.pose, g.psi);
  const auto b = solve(p, g.pose, g.psi);
  ASSERT_TRUE(a && b);
  ASSERT_EQ(a->branches.size(), b->branches.size());
  for (std::size_t i = 0; i < a->branches.size(); ++i) EXPECT_EQ(a->branches[i].joints.q, b->branches[i].joints.q);
}

TEST(Solve, NearDoubleRootSamples) {
  const RobotParams p = RobotParams::moz1_placeholder();
  const std::vector<JointConfig> cases = {
      // cos q ~ 0: the quartic is close to a square, its roots pair up by sign of sin q6
      JointConfig{{1.1272041426826096, -0.49916041804528133, -0.21516148946021474, -2.3281406452589106,
                   0.11766357712618092, 2.6768138951969807, -2.7671163334206406}},
      // psi within 1e-4 of pi/2
      JointConfig{{-2.5540101009423823, 1.2186833474922087, -0.38123680022555151, -0.07689278465735816,
                   -0.66880605863685094, 3.031340502812939, 0.26394637590431325}},
      JointConfig{{1.6880383572174056, -2.0197330885177096, -1.1861785271597531, 0.26631789645416015,
                   1.3586360339449159, 1.8148943402905617, -2.3052764579964182}},
  };
  for (const auto& j : cases) {
    const auto set = solve(p, forward_kinematics(p, j), *arm_angle(p, j));
    ASSERT_TRUE(set);
    double best = kPi;
    for (const auto& b : set->branches) best = std::min(best, b.joints.max_angle_distance(j));
    EXPECT_LT(best, 1e-6);
  }
}
