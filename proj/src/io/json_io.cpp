#include "secik/io/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace secik::io {

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(Error::InvalidInput, std::string("expected a number for ") + what);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(Error::InvalidInput, std::string("non-finite value for ") + what);
  return v;
}

double field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(Error::InvalidInput, std::string("missing field '") + key + "'");
  return number(j.at(key), key);
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(Error::InvalidInput, std::string("expected an array for ") + what);
  std::vector<double> out;
  for (const auto& e : j) {
    if (e.is_array()) {
      for (const auto& x : e) out.push_back(number(x, what));
    } else {
      out.push_back(number(e, what));
    }
  }
  return out;
}

Json label_to_json(const BranchLabel& l) {
  return Json{{"root_index", l.root_index}, {"q6_sign", l.q6_sign}, {"q4_sign", l.q4_sign}, {"q2_sign", l.q2_sign}};
}

Json hits_to_json(const std::vector<ConditionDistance>& hits) {
  Json arr = Json::array();
  for (const auto& h : hits) arr.push_back(Json{{"condition", std::string(to_string(h.condition))}, {"distance", h.distance}});
  return arr;
}

void write(const Json& j, std::string& out, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out.push_back('\n');
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        write(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out.push_back('}');
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (vectors, matrix rows) stay on one line.
      const bool flat = j.size() <= 9 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
      out.push_back('[');
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += (flat && pretty) ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(e, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out.push_back(']');
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

RobotParams params_from_json(const Json& j) {
  const double d_bs = field(j, "d_bs");
  const double d_se = field(j, "d_se");
  const double d_ew = field(j, "d_ew");
  const double a_wr = field(j, "a_wr");
  try {
    if (!j.contains("mdh")) return RobotParams(d_bs, d_se, d_ew, a_wr);
    const Json& m = j.at("mdh");
    if (!m.is_array() || m.size() != kNumJoints) throw InputError(Error::InvalidInput, "'mdh' must hold 7 rows");
    MdhTable rows;
    for (int i = 0; i < kNumJoints; ++i) {
      const Json& r = m.at(i);
      if (!r.is_array() || r.size() != 4) throw InputError(Error::InvalidInput, "each 'mdh' row is [alpha, a, d, theta_offset]");
      rows[i] = MdhRow{number(r[0], "mdh"), number(r[1], "mdh"), number(r[2], "mdh"), number(r[3], "mdh")};
    }
    return RobotParams(d_bs, d_se, d_ew, a_wr, rows);
  } catch (const std::invalid_argument& e) {
    throw InputError(Error::InvalidInput, e.what());
  }
}

Json params_to_json(const RobotParams& params) {
  Json rows = Json::array();
  for (const auto& r : params.rows()) rows.push_back(Json::array({r.alpha, r.a, r.d, r.theta_offset}));
  return Json{{"d_bs", params.d_bs()}, {"d_se", params.d_se()}, {"d_ew", params.d_ew()}, {"a_wr", params.a_wr()}, {"mdh", rows}};
}

RobotParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(Error::InvalidInput, "cannot open parameter file " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InputError(Error::InvalidInput, "parameter file " + path.string() + ": " + e.what());
  }
  return params_from_json(j);
}

Transform pose_from_json(const Json& j) {
  if (!j.is_object()) throw InputError(Error::InvalidInput, "pose must be an object");
  if (!j.contains("position")) throw InputError(Error::InvalidInput, "pose is missing 'position'");
  const auto p = numbers(j.at("position"), "position");
  if (p.size() != 3) throw InputError(Error::InvalidInput, "'position' must have 3 entries");

  Transform t = Transform::Identity();
  t.translation() = Vec3(p[0], p[1], p[2]);
  if (j.contains("rotation")) {
    const auto r = numbers(j.at("rotation"), "rotation");
    if (r.size() != 9) throw InputError(Error::InvalidInput, "'rotation' must be 3x3");
    Mat3 m;
    m << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
    if (!is_rotation(m, 1e-9)) throw InputError(Error::InvalidRotation, "invalid rotation: not orthonormal with det +1");
    t.linear() = m;
  } else if (j.contains("quaternion")) {
    const auto q = numbers(j.at("quaternion"), "quaternion");
    if (q.size() != 4) throw InputError(Error::InvalidInput, "'quaternion' must be [w, x, y, z]");
    const Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
    if (std::abs(quat.norm() - 1.0) > 1e-9) throw InputError(Error::InvalidRotation, "invalid rotation: quaternion is not unit");
    t.linear() = quat.toRotationMatrix();
  } else {
    throw InputError(Error::InvalidInput, "pose needs 'rotation' or 'quaternion'");
  }
  return t;
}

Json pose_to_json(const Transform& pose) {
  const Mat3 r = pose.linear();
  Json rot = Json::array();
  for (int i = 0; i < 3; ++i) rot.push_back(Json::array({r(i, 0), r(i, 1), r(i, 2)}));
  return Json{{"position", vec_to_json(pose.translation())}, {"rotation", rot}};
}

JointConfig joints_from_json(const Json& j) {
  const auto v = numbers(j, "joints");
  if (v.size() != kNumJoints) throw InputError(Error::InvalidInput, "'joints' must have 7 entries");
  JointConfig out;
  std::copy(v.begin(), v.end(), out.q.begin());
  return out;
}

Json joints_to_json(const JointConfig& joints) {
  Json arr = Json::array();
  for (double v : joints.q) arr.push_back(v);
  return arr;
}

Json vec_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json frame_points_to_json(const FramePoints& p) {
  return Json{{"S", vec_to_json(p.shoulder)}, {"E", vec_to_json(p.elbow)}, {"W", vec_to_json(p.wrist)}, {"C", vec_to_json(p.center7)}};
}

Json solution_set_to_json(const SolutionSet& set) {
  Json branches = Json::array();
  for (const auto& b : set.branches) {
    branches.push_back(Json{
        {"joints", joints_to_json(b.joints)},
        {"label", label_to_json(b.label)},
        {"t6", b.t6},
        {"r6", b.r6},
        {"q8", b.q8},
        {"residuals",
         Json{{"translation", b.residuals.translation},
              {"rotation", b.residuals.rotation},
              {"arm_angle", b.residuals.arm_angle},
              {"unsquared", b.residuals.unsquared},
              {"arm_equation", b.residuals.arm_equation},
              {"pose_equation", b.residuals.pose_equation}}},
    });
  }
  Json rejected = Json::array();
  for (const auto& r : set.rejected) {
    rejected.push_back(Json{{"label", label_to_json(r.label)}, {"reason", std::string(to_string(r.reason))}, {"value", r.value}});
  }
  Json roots = Json::array();
  for (int i = 0; i < set.roots.count; ++i) {
    roots.push_back(Json{{"t6", set.roots.values[i]}, {"multiplicity", set.roots.multiplicity[i]}});
  }
  return Json{
      {"branches", branches},
      {"rejected", rejected},
      {"reduced", Json{{"d_sc", set.reduced.d_sc}, {"q", set.reduced.q}, {"al", set.reduced.al}}},
      {"quartic",
       Json{{"k", set.setup.k},
            {"y", set.setup.y},
            {"tm", Json::array({set.setup.tm1, set.setup.tm2, set.setup.tm3})},
            {"g", Json::array({set.setup.g.g4, set.setup.g.g3, set.setup.g.g2, set.setup.g.g1, set.setup.g.g0})},
            {"real_roots", roots},
            {"complex_roots", set.roots.complex_count}}},
  };
}

Json report_to_json(const SingularityReport& report) {
  Json j{{"kinematic_hits", hits_to_json(report.kinematic_hits)}, {"algorithmic_hits", hits_to_json(report.algorithmic_hits)}};
  j["min_singular_value"] = report.min_singular_value ? Json(*report.min_singular_value) : Json(nullptr);
  return j;
}

Json check_result_to_json(const verify::CheckResult& result) {
  Json rows = Json::array();
  for (const auto& r : result.detail) {
    rows.push_back(Json{{"check", r.label}, {"samples", r.samples}, {"max_error", r.max_error}, {"limit", r.limit}, {"failures", r.failures}});
  }
  return Json{{"passed", result.passed}, {"max_error", result.max_error}, {"detail", rows}};
}

Json error_to_json(Error tag, const std::string& message) {
  return Json{{"error", Json{{"tag", std::string(to_string(tag))}, {"message", message}}}};
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(j, out, indent, 0);
  return out;
}

}  // namespace secik::io
