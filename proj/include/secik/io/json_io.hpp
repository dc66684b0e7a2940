#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "secik/ik.hpp"
#include "secik/kinematic_model.hpp"
#include "secik/singularity.hpp"
#include "secik/types.hpp"
#include "secik/verify.hpp"

namespace secik::io {

using Json = nlohmann::json;

/// Malformed or invalid input. `tag` is one of the Error codes.
class InputError : public std::runtime_error {
 public:
  InputError(Error tag, const std::string& what) : std::runtime_error(what), tag_(tag) {}
  Error tag() const { return tag_; }

 private:
  Error tag_;
};

// Robot parameter file:
//   {"d_bs": m, "d_se": m, "d_ew": m, "a_wr": m, "mdh": [[alpha, a, d, theta_offset] x 7]}
// "mdh" may be omitted, in which case the canonical table is used.
RobotParams params_from_json(const Json& j);
Json params_to_json(const RobotParams& params);
RobotParams load_params(const std::filesystem::path& path);

/// {"position": [x, y, z], "rotation": 3x3 row-major (nested or flat)} or
/// {"position": [...], "quaternion": [w, x, y, z]}. Rotations must be
/// orthonormal (resp. unit) within 1e-9.
Transform pose_from_json(const Json& j);
Json pose_to_json(const Transform& pose);

JointConfig joints_from_json(const Json& j);
Json joints_to_json(const JointConfig& joints);

Json vec_to_json(const Vec3& v);
Json frame_points_to_json(const FramePoints& p);
Json solution_set_to_json(const SolutionSet& set);
Json report_to_json(const SingularityReport& report);
Json check_result_to_json(const verify::CheckResult& result);
Json error_to_json(Error tag, const std::string& message);

/// Serialises with every floating-point number printed as %.17g, so equal
/// inputs give byte-identical output. Non-finite numbers become null.
std::string dump(const Json& j, int indent = 2);

}  // namespace secik::io
