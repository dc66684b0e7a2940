#pragma once

#include <gtest/gtest.h>

#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "secik/kinematic_model.hpp"
#include "secik/singularity.hpp"
#include "secik/verify.hpp"

namespace secik::testing {

struct NamedParams {
  std::string name;
  RobotParams params;
};

// The placeholder arm plus arms with different proportions, including the
// zero-offset limit and a long offset.
inline std::vector<NamedParams> param_sets() {
  return {
      {"moz1_placeholder", RobotParams::moz1_placeholder()},
      {"long_forearm", RobotParams(0.34, 0.30, 0.42, 0.0905)},
      {"large_offset", RobotParams(0.20, 0.40, 0.35, 0.15)},
      {"small_offset", RobotParams(0.30, 0.28, 0.26, 0.01)},
  };
}

inline std::string param_name(const ::testing::TestParamInfo<NamedParams>& info) { return info.param.name; }

inline void PrintTo(const NamedParams& p, std::ostream* os) { *os << p.name; }

/// Random configuration at least `margin` away from every singular set.
inline JointConfig generic_joints(const RobotParams& params, std::mt19937_64& rng, double margin = 0.01) {
  for (;;) {
    const JointConfig j = verify::random_joints(rng);
    if (!near_singular(j, params, margin)) return j;
  }
}

}  // namespace secik::testing
