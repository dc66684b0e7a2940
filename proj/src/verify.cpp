#include "secik/verify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

#include "secik/arm_angle.hpp"
#include "secik/singularity.hpp"

namespace secik::verify {

Transform fk_oracle(const RobotParams& params, const JointConfig& joints) {
  Transform t = Transform::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    const MdhRow& r = params.row(i);
    t = t * Eigen::AngleAxisd(r.alpha, Vec3::UnitX()) * Eigen::Translation3d(r.a, 0.0, 0.0) *
        Eigen::AngleAxisd(r.theta_offset + joints[i], Vec3::UnitZ()) * Eigen::Translation3d(0.0, 0.0, r.d);
  }
  return t;
}

Eigen::Matrix<double, 6, kNumJoints> geometric_jacobian(const RobotParams& params, const JointConfig& joints) {
  const auto frames = link_frames(params, joints);
  const Vec3 p = frames[kNumJoints - 1].translation();
  Eigen::Matrix<double, 6, kNumJoints> jac;
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 z = frames[i].linear().col(2);
    jac.block<3, 1>(0, i) = z.cross(p - frames[i].translation());
    jac.block<3, 1>(3, i) = z;
  }
  return jac;
}

Expected<RealRoots> quartic_oracle(const QuarticCoeffs& c) {
  const std::array<double, 5> g{c.g4, c.g3, c.g2, c.g1, c.g0};  // highest power first
  double scale = 0.0;
  for (double v : g) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0)) return Error::DegreeZero;

  int lead = 0;
  while (lead < 4 && std::abs(g[lead]) < kDegreeTol * scale) ++lead;
  const int n = 4 - lead;

  RealRoots out;
  out.degree = n;
  if (n == 0) return Error::DegreeZero;

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -g[lead + 1 + j] / g[lead];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  const Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const Eigen::VectorXcd ev = es.eigenvalues();

  // Same real/complex and merge policy as solve_quartic, so root sets compare
  // one to one.
  auto flat = [&](double t) {
    double value = 0.0;
    double size = 0.0;
    for (int i = lead; i <= 4; ++i) {
      value = value * t + g[i];
      size = size * std::abs(t) + std::abs(g[i]);
    }
    return std::abs(value) <= kMergeNoiseTol * size;
  };
  std::vector<double> real;
  for (int i = 0; i < n; ++i) {
    const double re = ev(i).real();
    if (std::abs(ev(i).imag()) < kComplexPairTol * std::max(1.0, std::abs(re)) || flat(re)) real.push_back(re);
    else ++out.complex_count;
  }
  std::sort(real.begin(), real.end());
  auto same_root = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    return b - a < kRootMergeTol || b - a <= 2.0 * kComplexPairTol * std::max(1.0, std::abs(mid)) || flat(mid);
  };
  std::vector<std::vector<double>> groups;
  for (double r : real) {
    if (!groups.empty() && same_root(groups.back().back(), r)) groups.back().push_back(r);
    else groups.push_back({r});
  }
  for (const auto& grp : groups) {
    double sum = 0.0;
    for (double r : grp) sum += r;
    out.values[out.count] = sum / static_cast<double>(grp.size());
    out.multiplicity[out.count] = static_cast<int>(grp.size());
    ++out.count;
  }
  return out;
}

namespace {

// Pose error as a 6-vector: translation difference, then rotation vector of
// target * current^T (both in the base frame).
Eigen::Matrix<double, 6, 1> task_error(const Transform& target, const Transform& current) {
  Eigen::Matrix<double, 6, 1> e;
  e.head<3>() = target.translation() - current.translation();
  const Eigen::AngleAxisd aa(Mat3(target.linear() * current.linear().transpose()));
  e.tail<3>() = aa.axis() * aa.angle();
  return e;
}

}  // namespace

Expected<NumericIkResult> numeric_ik(const RobotParams& params, const Transform& pose, const JointConfig& seed,
                                     const NumericIkOptions& opts) {
  if (!seed.is_finite()) return Error::InvalidInput;
  const int rows = opts.psi ? 7 : 6;
  const double lambda2 = opts.damping * opts.damping;

  JointConfig q = seed;
  for (int it = 0;; ++it) {
    Eigen::VectorXd e(rows);
    Eigen::MatrixXd jac(rows, kNumJoints);
    e.head<6>() = task_error(pose, forward_kinematics(params, q));
    jac.topRows<6>() = geometric_jacobian(params, q);
    if (opts.psi) {
      const auto psi = arm_angle(params, q);
      if (!psi) return Error::NoConvergence;
      e(6) = normalize_angle(*opts.psi - *psi);
      constexpr double h = 1e-7;
      for (int i = 0; i < kNumJoints; ++i) {
        JointConfig a = q;
        JointConfig b = q;
        a[i] += h;
        b[i] -= h;
        const auto pa = arm_angle(params, a);
        const auto pb = arm_angle(params, b);
        if (!pa || !pb) return Error::NoConvergence;
        jac(6, i) = normalize_angle(*pa - *pb) / (2.0 * h);
      }
    }

    const double err = e.norm();
    if (err < opts.tolerance) return NumericIkResult{q.normalized(), it, err};
    if (it >= opts.max_iters || !std::isfinite(err)) break;

    const Eigen::MatrixXd jjt = jac * jac.transpose() + lambda2 * Eigen::MatrixXd::Identity(rows, rows);
    const Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(e);
    for (int i = 0; i < kNumJoints; ++i) q[i] += dq(i);
  }
  return Error::NoConvergence;
}

void CheckResult::add(const std::string& label, double error, double limit) {
  auto it = std::find_if(detail.begin(), detail.end(), [&](const CheckRow& r) { return r.label == label; });
  if (it == detail.end()) {
    detail.push_back(CheckRow{label, 0, 0.0, limit, 0});
    it = detail.end() - 1;
  }
  ++it->samples;
  it->max_error = std::max(it->max_error, error);
  max_error = std::max(max_error, error);
  if (!(error <= limit)) {
    ++it->failures;
    passed = false;
  }
}

JointConfig random_joints(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-kPi, kPi);
  JointConfig j;
  for (auto& v : j.q) v = dist(rng);
  return j.normalized();
}

CheckResult run_checks(const RobotParams& params, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CheckResult result;
  for (int s = 0; s < samples; ++s) {
    const JointConfig j = random_joints(rng);
    const Transform pose = forward_kinematics(params, j);
    result.add("fk_oracle", (fk_oracle(params, j).matrix() - pose.matrix()).cwiseAbs().maxCoeff(), 1e-12);

    if (near_singular(j, params, 0.01)) continue;
    const auto psi = arm_angle(params, j);
    if (!psi) continue;
    const auto set = solve(params, pose, *psi);
    if (!set) {
      result.add("round_trip", kPi, 1e-6);
      continue;
    }

    const auto oracle = quartic_oracle(set->setup.g);
    if (oracle && oracle->count == set->roots.count) {
      double dev = 0.0;
      for (int i = 0; i < oracle->count; ++i) dev = std::max(dev, std::abs(oracle->values[i] - set->roots.values[i]));
      result.add("quartic_oracle", dev, 1e-9);
    } else {
      result.add("quartic_oracle", std::numeric_limits<double>::infinity(), 1e-9);
    }

    double best = kPi;
    for (const auto& b : set->branches) {
      best = std::min(best, b.joints.max_angle_distance(j));
      const PoseError pe = pose_error(forward_kinematics(params, b.joints), pose);
      result.add("branch_fk", std::max(pe.translation, pe.rotation), 1e-8);

      NumericIkOptions opts;
      opts.psi = *psi;
      opts.max_iters = 3;
      const auto refined = numeric_ik(params, pose, b.joints, opts);
      result.add("numeric_ik_fixed_point", refined ? refined->joints.max_angle_distance(b.joints) : kPi, 1e-10);
    }
    result.add("round_trip", best, 1e-6);
  }
  return result;
}

}  // namespace secik::verify
