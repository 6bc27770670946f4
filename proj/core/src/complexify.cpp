#include "sl2lab/complexify.hpp"

#include <algorithm>
#include <cmath>

#include "sl2lab/counter_rng.hpp"
#include "sl2lab/error.hpp"

namespace sl2lab {
namespace {

constexpr cplx kI{0.0, 1.0};

double arg_0_2pi(cplx z) noexcept { return wrap_angle(std::arg(z)); }

CMat2 times_real(const Mat2& a, const CMat2& x) noexcept {
  return CMat2::from_real(a) * x;
}

}  // namespace

bool CMat2::is_finite() const noexcept {
  auto fin = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  return fin(a11) && fin(a12) && fin(a21) && fin(a22);
}

double max_abs_diff(const CMat2& x, const CMat2& y) noexcept {
  return std::max({std::abs(x.a11 - y.a11), std::abs(x.a12 - y.a12),
                   std::abs(x.a21 - y.a21), std::abs(x.a22 - y.a22)});
}

CMat2 s_matrix(cplx z) {
  if (z == cplx(0.0)) throw InvalidInput("s_matrix: z must be nonzero");
  const cplx zi = 1.0 / z;
  const cplx d = 0.5 * (z + zi);
  const cplx o = (z - zi) / (2.0 * kI);
  return {d, -o, o, d};
}

CMat2 t_matrix(cplx z) noexcept {
  const cplx z2 = z * z;
  const cplx d = 0.5 * (z2 + 1.0);
  const cplx o = (z2 - 1.0) / (2.0 * kI);
  return {d, -o, o, d};
}

CMat2 c_matrix(std::span<const SL2> as, cplx z) {
  if (as.empty()) throw InvalidInput("c_matrix: empty list");
  const CMat2 t = t_matrix(z);
  CMat2 acc = CMat2::identity();
  for (const SL2& a : as) acc = times_real(a.mat(), t * acc);
  return acc;
}

EigenPair eigen2(const CMat2& c) noexcept {
  const cplx tr = c.trace();
  const cplx det = c.det();
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  // Pick the sign that avoids cancellation, then recover the other root
  // from the product.
  const cplx big = (std::real(std::conj(tr) * disc) >= 0.0) ? 0.5 * (tr + disc)
                                                             : 0.5 * (tr - disc);
  const cplx small = (big == cplx(0.0)) ? cplx(0.0) : det / big;

  EigenPair out{big, small};
  const double m1 = std::abs(out.lambda1);
  const double m2 = std::abs(out.lambda2);
  const double tie = 1e-12 * std::max(m1, m2);
  if (m2 > m1 + tie ||
      (std::abs(m1 - m2) <= tie && arg_0_2pi(out.lambda2) < arg_0_2pi(out.lambda1))) {
    std::swap(out.lambda1, out.lambda2);
  }
  return out;
}

bool equal_modulus(const CMat2& c) {
  const cplx det = c.det();
  if (std::abs(det) <= 1e-14) {
    throw SingularMatrix("equal_modulus: determinant is numerically zero");
  }
  const cplx tr = c.trace();
  const cplx u = tr * tr / (4.0 * det);
  constexpr double kTol = 1e-10;
  if (std::abs(u.imag()) > kTol * (1.0 + std::abs(u))) return false;
  return u.real() >= -kTol && u.real() <= 1.0 + kTol;
}

std::pair<double, double> centro_check(std::span<const SL2> as) {
  if (as.empty()) throw InvalidInput("centro_check: empty list");
  double expected = 1.0;
  for (const SL2& a : as) {
    const double c = operator_norm(a);
    expected *= 0.5 * (c + 1.0 / c);
  }
  const EigenPair ev = eigen2(c_matrix(as, cplx(0.0)));
  return {std::abs(ev.lambda2), std::abs(ev.lambda1) - expected};
}

SeparationSample separation_sample(std::span<const SL2> as, cplx z) {
  const EigenPair ev = eigen2(c_matrix(as, z));
  const double m1 = std::abs(ev.lambda1);
  const double m2 = std::abs(ev.lambda2);
  return {z, m1, m2, (m1 - m2) > 1e-10 * m1};
}

SeparationReport autoval_sample(std::uint64_t seed, std::size_t samples,
                                double max_radius, int max_factors, double max_norm) {
  if (!(max_radius > 0.0 && max_radius < 1.0)) {
    throw InvalidInput("autoval_sample: radius must lie in (0, 1)");
  }
  if (max_factors < 1 || !(max_norm >= 1.0)) {
    throw InvalidInput("autoval_sample: need at least one factor and max_norm >= 1");
  }
  SeparationReport rep;
  rep.min_relative_gap = 1.0;
  std::vector<SL2> as;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterStream rng(seed, /*stream=*/0xa07a, i);
    const double r = max_radius * std::sqrt(rng.uniform());
    const cplx z = std::polar(r, kTwoPi * rng.uniform());
    const int n = 1 + static_cast<int>(rng.uniform() * max_factors) % max_factors;
    as.clear();
    for (int j = 0; j < n; ++j) {
      const double c = 1.0 + (max_norm - 1.0) * rng.uniform();
      as.push_back(rotation(kTwoPi * rng.uniform()) * diag_hyperbolic(c) *
                   rotation(kTwoPi * rng.uniform()));
    }
    const SeparationSample s = separation_sample(as, z);
    ++rep.samples;
    if (s.separated) ++rep.separated;
    const double gap = s.modulus1 > 0.0 ? (s.modulus1 - s.modulus2) / s.modulus1 : 0.0;
    if (gap < rep.min_relative_gap) {
      rep.min_relative_gap = gap;
      rep.worst_z = z;
    }
  }
  return rep;
}

}  // namespace sl2lab
