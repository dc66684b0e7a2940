#include "secik/quartic.hpp"

#include <algorithm>
#include <limits>
#include <complex>

namespace secik {

namespace {

using Complex = std::complex<double>;

constexpr int kPolishSteps = 3;

// Roots of x^2 + b x + c, cancellation-free.
std::array<Complex, 2> quadratic_roots(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) return {Complex(0.0), Complex(0.0)};
    return {Complex(q), Complex(c / q)};
  }
  const double re = -0.5 * b;
  const double im = 0.5 * std::sqrt(-disc);
  return {Complex(re, im), Complex(re, -im)};
}

double eval_monic_cubic(double a, double b, double c, double x) { return ((x + a) * x + b) * x + c; }

// Roots of x^3 + a x^2 + b x + c. The first entry is real and, when all three
// roots are real, the largest.
std::array<Complex, 3> cubic_roots(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double delta = q * q / 4.0 + p * p * p / 27.0;

  double t = 0.0;
  if (delta > 0.0) {
    const double u = std::cbrt(-0.5 * q - std::copysign(std::sqrt(delta), q));
    t = (u != 0.0) ? u - p / (3.0 * u) : 0.0;
  } else if (p < 0.0) {
    const double r = std::sqrt(-p / 3.0);
    const double arg = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
    t = 2.0 * r * std::cos(std::acos(arg) / 3.0);
  }
  double x = t - a / 3.0;

  // Two guarded Newton steps on the undepressed cubic.
  for (int i = 0; i < 2; ++i) {
    const double f = eval_monic_cubic(a, b, c, x);
    const double df = (3.0 * x + 2.0 * a) * x + b;
    if (df == 0.0) break;
    const double xn = x - f / df;
    if (std::abs(eval_monic_cubic(a, b, c, xn)) < std::abs(f)) x = xn;
    else break;
  }

  const double b1 = a + x;
  const auto rest = quadratic_roots(b1, b + b1 * x);
  return {Complex(x), rest[0], rest[1]};
}

// Roots of x^4 + a x^3 + b x^2 + c x + d via the resolvent cubic.
std::array<Complex, 4> quartic_roots(double a, double b, double c, double d) {
  const double a2 = a * a;
  const double p = b - 3.0 * a2 / 8.0;
  const double q = c - a * b / 2.0 + a2 * a / 8.0;
  const double r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;
  const double shift = -a / 4.0;

  // m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0
  const auto res = cubic_roots(p, p * p / 4.0 - r, -q * q / 8.0);
  double m = res[0].real();
  for (const auto& z : res) {
    if (std::abs(z.imag()) <= kComplexPairTol * std::max(1.0, std::abs(z.real()))) m = std::max(m, z.real());
  }

  std::array<Complex, 4> y;
  const double scale = std::max({1.0, std::abs(p), std::sqrt(std::abs(r))});
  if (m > 1e-12 * scale) {
    const double s = std::sqrt(2.0 * m);
    const double h = q / (2.0 * s);
    const auto r1 = quadratic_roots(-s, 0.5 * p + m + h);
    const auto r2 = quadratic_roots(s, 0.5 * p + m - h);
    y = {r1[0], r1[1], r2[0], r2[1]};
  } else {
    // q vanishes: biquadratic z^2 + p z + r with y = +-sqrt(z).
    const auto z = quadratic_roots(p, r);
    const Complex s0 = std::sqrt(z[0]);
    const Complex s1 = std::sqrt(z[1]);
    y = {s0, -s0, s1, -s1};
  }
  for (auto& v : y) v += shift;
  return y;
}

}  // namespace

double QuarticCoeffs::max_abs() const {
  return std::max({std::abs(g4), std::abs(g3), std::abs(g2), std::abs(g1), std::abs(g0)});
}

double QuarticCoeffs::evaluate(double t) const { return (((g4 * t + g3) * t + g2) * t + g1) * t + g0; }

double QuarticCoeffs::derivative(double t) const { return ((4.0 * g4 * t + 3.0 * g3) * t + 2.0 * g2) * t + g1; }

int RealRoots::real_count() const {
  int n = 0;
  for (int i = 0; i < count; ++i) n += multiplicity[i];
  return n;
}

Expected<RealRoots> solve_quartic(const QuarticCoeffs& c) {
  const std::array<double, 5> g{c.g0, c.g1, c.g2, c.g3, c.g4};
  for (double v : g) {
    if (!std::isfinite(v)) return Error::InvalidInput;
  }
  const double scale = c.max_abs();
  if (scale == 0.0) return Error::AllCoefficientsZero;

  int degree = 4;
  while (degree > 0 && std::abs(g[degree]) < kDegreeTol * scale) --degree;

  std::array<Complex, 4> z{};
  const double lead = g[degree];
  switch (degree) {
    case 4: {
      const auto r = quartic_roots(g[3] / lead, g[2] / lead, g[1] / lead, g[0] / lead);
      std::copy(r.begin(), r.end(), z.begin());
      break;
    }
    case 3: {
      const auto r = cubic_roots(g[2] / lead, g[1] / lead, g[0] / lead);
      std::copy(r.begin(), r.end(), z.begin());
      break;
    }
    case 2: {
      const auto r = quadratic_roots(g[1] / lead, g[0] / lead);
      std::copy(r.begin(), r.end(), z.begin());
      break;
    }
    case 1:
      z[0] = Complex(-g[0] / lead);
      break;
    default:
      break;
  }

  // Polynomial restricted to the effective degree.
  auto eval = [&](double t) {
    double v = 0.0;
    for (int i = degree; i >= 0; --i) v = v * t + g[i];
    return v;
  };
  auto deriv = [&](double t) {
    double v = 0.0;
    for (int i = degree; i >= 1; --i) v = v * t + i * g[i];
    return v;
  };

  // Sum |g_i| |t|^i: the size of the rounding noise in eval(t).
  auto magnitude = [&](double t) {
    double v = 0.0;
    for (int i = degree; i >= 0; --i) v = v * std::abs(t) + std::abs(g[i]);
    return v;
  };
  auto flat = [&](double t) { return std::abs(eval(t)) <= kMergeNoiseTol * magnitude(t); };

  RealRoots out;
  out.degree = degree;
  std::array<double, 4> real{};
  int n_real = 0;
  for (int i = 0; i < degree; ++i) {
    if (std::abs(z[i].imag()) < kComplexPairTol * std::max(1.0, std::abs(z[i].real())) || flat(z[i].real())) {
      double x = z[i].real();
      for (int k = 0; k < kPolishSteps; ++k) {
        const double f = eval(x);
        const double df = deriv(x);
        if (f == 0.0 || df == 0.0) break;
        const double xn = x - f / df;
        if (std::abs(eval(xn)) < std::abs(f)) x = xn;
        else break;
      }
      real[n_real++] = x;
    } else {
      ++out.complex_count;
    }
  }

  // A perturbed double root splits either into a conjugate pair or into two
  // close reals. Pairs of reals split by less than the conjugate-pair
  // threshold are one double root, same as the complex case. So are pairs
  // whose midpoint value is lost in the coefficient noise.
  auto same_root = [&](double a, double b) {
    const double gap = b - a;
    const double mid = 0.5 * (a + b);
    return gap < kRootMergeTol || gap <= 2.0 * kComplexPairTol * std::max(1.0, std::abs(mid)) || flat(mid);
  };

  std::sort(real.begin(), real.begin() + n_real);
  for (int i = 0; i < n_real; ++i) {
    if (out.count > 0 && same_root(out.values[out.count - 1], real[i])) {
      const int k = out.count - 1;
      const int m = out.multiplicity[k];
      out.values[k] = (out.values[k] * m + real[i]) / (m + 1);
      out.multiplicity[k] = m + 1;
    } else {
      out.values[out.count] = real[i];
      out.multiplicity[out.count] = 1;
      ++out.count;
    }
  }
  return out;
}

}  // namespace secik
