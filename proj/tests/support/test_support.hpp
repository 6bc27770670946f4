#pragma once

// Shared generators and brute-force oracles for the test suite. Uses the
// standard library RNG on purpose, so test inputs do not depend on the
// library's own counter-based streams.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sl2lab/mat2.hpp"

namespace sl2test {

using sl2lab::Mat2;
using sl2lab::SL2;

inline constexpr double kPi = std::numbers::pi;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// R_phi H_c R_psi, built entrywise so it does not route through the
// library constructors under test.
inline SL2 random_sl2(std::mt19937_64& rng, double max_norm) {
  const double c = uniform(rng, 1.0, max_norm);
  const double phi = uniform(rng, 0.0, 2 * kPi);
  const double psi = uniform(rng, 0.0, 2 * kPi);
  const Mat2 r1{std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
  const Mat2 h{c, 0.0, 0.0, 1.0 / c};
  const Mat2 r2{std::cos(psi), -std::sin(psi), std::sin(psi), std::cos(psi)};
  return SL2(r1 * h * r2, 1e-9);
}

inline std::vector<SL2> random_list(std::mt19937_64& rng, int max_len, double max_norm) {
  const int n = std::uniform_int_distribution<int>(1, max_len)(rng);
  std::vector<SL2> out;
  for (int i = 0; i < n; ++i) out.push_back(random_sl2(rng, max_norm));
  return out;
}

// Largest |A u| over many unit vectors: a crude but independent norm.
inline double brute_force_norm(const Mat2& a, int samples = 20000) {
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = kPi * k / samples;
    const double x = a.a11 * std::cos(t) + a.a12 * std::sin(t);
    const double y = a.a21 * std::cos(t) + a.a22 * std::sin(t);
    best = std::max(best, std::hypot(x, y));
  }
  return best;
}

// Largest singular value from the eigenvalues of A^T A.
inline double gram_norm(const Mat2& a) {
  const double p = a.a11 * a.a11 + a.a21 * a.a21;
  const double q = a.a11 * a.a12 + a.a21 * a.a22;
  const double r = a.a12 * a.a12 + a.a22 * a.a22;
  const double mid = 0.5 * (p + r);
  const double disc = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
  return std::sqrt(mid + disc);
}

// Composite Simpson rule on [lo, hi] with an even number of panels.
template <class F>
double simpson(F&& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

inline Mat2 rot(double t) { return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)}; }

}  // namespace sl2test
