#pragma once

#include <array>
#include <span>

#include "secik/types.hpp"

namespace secik {

/// g4 t^4 + g3 t^3 + g2 t^2 + g1 t + g0.
struct QuarticCoeffs {
  double g4 = 0.0;
  double g3 = 0.0;
  double g2 = 0.0;
  double g1 = 0.0;
  double g0 = 0.0;

  double max_abs() const;
  double evaluate(double t) const;
  double derivative(double t) const;
};

/// Leading coefficients smaller than this (relative to the largest) are dropped.
constexpr double kDegreeTol = 1e-12;
/// Real roots closer than this are merged into one root with multiplicity.
/// Pairs split by up to 2 * kComplexPairTol * max(1, |t|) are merged as well,
/// mirroring the treatment of near-real conjugate pairs.
constexpr double kRootMergeTol = 1e-8;
/// Adjacent real roots are also merged, and a conjugate pair taken as a real
/// double root, when |g| at the midpoint (resp. real part) is below this
/// fraction of sum |g_i| |t|^i: the pair cannot be told apart from a double root.
constexpr double kMergeNoiseTol = 1e-12;
/// Residual bound on returned roots, relative to the coefficient magnitude.
constexpr double kRootResidualTol = 1e-9;
/// A conjugate pair with |imag| < kComplexPairTol * max(1, |real|) is taken as a real double root.
constexpr double kComplexPairTol = 1e-7;

/// Distinct real roots in ascending order. Fixed capacity, no allocation.
struct RealRoots {
  std::array<double, 4> values{};
  std::array<int, 4> multiplicity{};
  int count = 0;          // distinct real roots
  int degree = 0;         // effective degree after dropping negligible leading terms
  int complex_count = 0;  // roots rejected as non-real

  std::span<const double> roots() const { return {values.data(), static_cast<std::size_t>(count)}; }
  /// Real roots counted with multiplicity.
  int real_count() const;
};

/// All real roots of the quartic by the resolvent-cubic closed form, each
/// refined by at most three Newton steps. Degenerates to the cubic, quadratic
/// or linear case when leading coefficients are negligible.
Expected<RealRoots> solve_quartic(const QuarticCoeffs& c);

}  // namespace secik
