#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "secik/arm_angle.hpp"
#include "secik/ik.hpp"
#include "secik/io/json_io.hpp"
#include "secik/singularity.hpp"
#include "secik/verify.hpp"

namespace secik::cli {

namespace {

using io::InputError;
using io::Json;

struct Options {
  std::string command;
  std::string params_file;
  std::string input_file;
  std::string inline_json;
  std::string output_file;
  int count = 0;
  std::uint64_t seed = 1;
  bool compact = false;
};

/// A solver-side failure for the whole request: reported with exit 2.
struct SolverFailure {
  Error tag;
  std::string message;
};

struct Outcome {
  Json body;
  int code = kOk;
};

Json read_input(const Options& opt, std::istream& in) {
  std::string text;
  if (!opt.inline_json.empty()) {
    text = opt.inline_json;
  } else if (!opt.input_file.empty() && opt.input_file != "-") {
    std::ifstream f(opt.input_file);
    if (!f) throw InputError(Error::InvalidInput, "cannot open input file " + opt.input_file);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  } else {
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(Error::InvalidInput, std::string("malformed JSON input: ") + e.what());
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(Error::InvalidInput, std::string("input is missing '") + key + "'");
  return j.at(key);
}

double require_number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw InputError(Error::InvalidInput, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

ToleranceSet tolerances_from(const Json& j) {
  ToleranceSet tol;
  if (!j.is_object() || !j.contains("tolerances")) return tol;
  const Json& t = j.at("tolerances");
  auto read = [&](const char* key, double& dst) {
    if (t.contains(key)) dst = t.at(key).get<double>();
  };
  read("pose_tol", tol.pose_tol);
  read("angle_merge_tol", tol.angle_merge_tol);
  read("branch_residual_tol", tol.branch_residual_tol);
  read("sin_domain_tol", tol.sin_domain_tol);
  read("psi_tol", tol.psi_tol);
  read("unit_circle_tol", tol.unit_circle_tol);
  if (!tol.valid()) throw InputError(Error::InvalidInput, "tolerances must be positive");
  return tol;
}

Json solve_one(const RobotParams& params, const Json& request, const ToleranceSet& tol, bool& degenerate) {
  const Transform pose = io::pose_from_json(require(request, "pose"));
  const double psi = require_number(request, "psi");
  const auto set = solve(params, pose, psi, tol);
  if (!set) {
    degenerate = true;
    return io::error_to_json(set.error(), "request is degenerate for the closed form");
  }
  return io::solution_set_to_json(*set);
}

Outcome cmd_ik(const RobotParams& params, const Json& input) {
  const ToleranceSet tol = tolerances_from(input);
  bool degenerate = false;
  if (input.is_object() && input.contains("requests")) {
    const Json& reqs = input.at("requests");
    if (!reqs.is_array()) throw InputError(Error::InvalidInput, "'requests' must be an array");
    Json results = Json::array();
    for (const auto& r : reqs) results.push_back(solve_one(params, r, tol, degenerate));
    return {Json{{"results", results}}, degenerate ? kSolverError : kOk};
  }
  Json body = solve_one(params, input, tol, degenerate);
  return {body, degenerate ? kSolverError : kOk};
}

Outcome cmd_fk(const RobotParams& params, const Json& input) {
  const JointConfig joints = io::joints_from_json(require(input, "joints"));
  const Transform pose = forward_kinematics(params, joints);
  Json body{{"pose", io::pose_to_json(pose)}, {"frame_points", io::frame_points_to_json(frame_points(params, joints))}};
  const auto psi = arm_angle(params, joints);
  if (psi) {
    body["psi"] = *psi;
  } else {
    body["psi"] = nullptr;
    body["psi_error"] = std::string(to_string(psi.error()));
  }
  return {body, kOk};
}

Outcome cmd_arm_angle(const RobotParams& params, const Json& input) {
  const JointConfig joints = io::joints_from_json(require(input, "joints"));
  const auto psi = arm_angle(params, joints);
  if (!psi) return {io::error_to_json(psi.error(), "arm angle is undefined for this configuration"), kSolverError};
  return {Json{{"psi", *psi}}, kOk};
}

Outcome cmd_classify(const RobotParams& params, const Json& input) {
  const JointConfig joints = io::joints_from_json(require(input, "joints"));
  ClassifyOptions opts;
  opts.compute_jacobian = true;
  if (input.contains("hit_tol")) opts.hit_tol = require_number(input, "hit_tol");
  if (input.contains("hit_tol_m")) opts.hit_tol_m = require_number(input, "hit_tol_m");
  return {io::report_to_json(classify(joints, params, opts)), kOk};
}

Outcome cmd_sweep(const RobotParams& params, const Json& input) {
  const Transform pose = io::pose_from_json(require(input, "pose"));
  const ToleranceSet tol = tolerances_from(input);
  const Json& grid = require(input, "psi_grid");
  const double start = require_number(grid, "start");
  const double stop = require_number(grid, "stop");
  const double count_d = require_number(grid, "count");
  if (count_d < 1 || count_d != std::floor(count_d)) throw InputError(Error::InvalidInput, "'count' must be a positive integer");
  const int count = static_cast<int>(count_d);

  Json results = Json::array();
  bool degenerate = false;
  for (int i = 0; i < count; ++i) {
    const double psi = count == 1 ? start : start + (stop - start) * i / (count - 1);
    Json row{{"psi", psi}};
    const auto set = solve(params, pose, psi, tol);
    if (set) {
      row["solutions"] = io::solution_set_to_json(*set);
    } else {
      degenerate = true;
      row.update(io::error_to_json(set.error(), "request is degenerate for the closed form"));
    }
    results.push_back(row);
  }
  return {Json{{"results", results}}, degenerate ? kSolverError : kOk};
}

Outcome cmd_bench(const RobotParams& params, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  struct Req {
    Transform pose;
    double psi;
  };
  std::vector<Req> reqs;
  reqs.reserve(count);
  while (static_cast<int>(reqs.size()) < count) {
    const JointConfig j = verify::random_joints(rng);
    if (near_singular(j, params, 0.01)) continue;
    const auto psi = arm_angle(params, j);
    if (!psi) continue;
    reqs.push_back({forward_kinematics(params, j), *psi});
  }

  std::vector<double> ns;
  ns.reserve(count);
  std::size_t branches = 0;
  for (const auto& r : reqs) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto set = solve(params, r.pose, r.psi);
    const auto t1 = std::chrono::steady_clock::now();
    ns.push_back(static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    if (set) branches += set->branches.size();
  }
  std::vector<double> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  auto pct = [&](double p) {
    const auto idx = static_cast<std::size_t>(std::ceil(p / 100.0 * sorted.size())) - 1;
    return sorted[std::min(idx, sorted.size() - 1)];
  };
  double mean = 0.0;
  for (double v : ns) mean += v;
  mean /= static_cast<double>(ns.size());
  const double p50 = pct(50);
  const double p99 = pct(99);
  return {Json{{"count", count},
               {"seed", seed},
               {"p50_ns", p50},
               {"p90_ns", pct(90)},
               {"p99_ns", p99},
               {"max_ns", sorted.back()},
               {"mean_ns", mean},
               {"p99_over_p50", p99 / p50},
               {"mean_branches", static_cast<double>(branches) / count}},
          kOk};
}

Outcome cmd_check(const RobotParams& params, int count, std::uint64_t seed) {
  const auto result = verify::run_checks(params, count, seed);
  return {io::check_result_to_json(result), result.passed ? kOk : kSolverError};
}

Outcome dispatch(const Options& opt, std::istream& in) {
  const RobotParams params = opt.params_file.empty() ? RobotParams::moz1_placeholder() : io::load_params(opt.params_file);
  if (opt.command == "bench") return cmd_bench(params, opt.count > 0 ? opt.count : 10000, opt.seed);
  if (opt.command == "check") return cmd_check(params, opt.count > 0 ? opt.count : 1000, opt.seed);

  const Json input = read_input(opt, in);
  if (opt.command == "ik") return cmd_ik(params, input);
  if (opt.command == "fk") return cmd_fk(params, input);
  if (opt.command == "arm-angle") return cmd_arm_angle(params, input);
  if (opt.command == "classify") return cmd_classify(params, input);
  return cmd_sweep(params, input);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form inverse kinematics for a 7-DOF arm with a wrist offset"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool takes_input) {
    sub->add_option("-p,--params", opt.params_file, "robot parameter JSON file (default: built-in placeholder lengths)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", opt.output_file, "write the result here instead of stdout");
    sub->add_flag("--compact", opt.compact, "single-line JSON output");
    if (takes_input) {
      auto* file = sub->add_option("-i,--input", opt.input_file, "input JSON file, '-' for stdin (default)");
      sub->add_option("-j,--json", opt.inline_json, "inline input JSON")->excludes(file);
    }
  };
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"ik", "solve IK for a pose and arm angle (or a batch under \"requests\")"},
      {"fk", "forward kinematics, frame points and arm angle of a joint vector"},
      {"arm-angle", "arm angle of a joint vector"},
      {"classify", "singularity classification of a joint vector"},
      {"sweep", "solve one pose over a grid of arm angles"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, true);
    sub->callback([&opt, n = std::string(name)] { opt.command = n; });
  }
  auto* bench = app.add_subcommand("bench", "time full solves of random FK-generated requests");
  add_common(bench, false);
  bench->add_option("-n,--count", opt.count, "number of requests (default 10000)")->check(CLI::PositiveNumber);
  bench->add_option("-s,--seed", opt.seed, "random seed");
  bench->callback([&opt] { opt.command = "bench"; });
  auto* check = app.add_subcommand("check", "run the verification oracles over random samples");
  add_common(check, false);
  check->add_option("-n,--count", opt.count, "number of samples (default 1000)")->check(CLI::PositiveNumber);
  check->add_option("-s,--seed", opt.seed, "random seed");
  check->callback([&opt] { opt.command = "check"; });

  std::vector<std::string> argv_store{"secik"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    out << io::dump(io::error_to_json(Error::InvalidInput, e.what()), opt.compact ? -1 : 2) << "\n";
    return kInputError;
  }

  const int indent = opt.compact ? -1 : 2;
  Outcome outcome;
  try {
    outcome = dispatch(opt, in);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    outcome = {io::error_to_json(e.tag(), e.what()), kInputError};
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    outcome = {io::error_to_json(Error::InvalidInput, e.what()), kInputError};
  }
  if (outcome.code == kSolverError) err << "solver reported a degenerate request\n";

  const std::string text = io::dump(outcome.body, indent) + "\n";
  if (opt.output_file.empty()) {
    out << text;
  } else {
    std::ofstream f(opt.output_file, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << opt.output_file << "\n";
      return kInputError;
    }
    f << text;
  }
  return outcome.code;
}

}  // namespace secik::cli
