#include "sl2lab/mat2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sl2lab/error.hpp"

namespace sl2lab {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Half-sum/half-difference coordinates of a 2x2 matrix. With
// p = hypot(e, h) and q = hypot(f, g) the singular values are p + q and
// |p - q|, and a = R_{s} (p I) + q * reflection(d) with s = atan2(h, e) and
// d = atan2(g, f).
struct HalfCoords {
  double e, f, g, h;
};

HalfCoords half_coords(const Mat2& m) noexcept {
  return {0.5 * (m.a11 + m.a22), 0.5 * (m.a11 - m.a22),
          0.5 * (m.a21 + m.a12), 0.5 * (m.a21 - m.a12)};
}

}  // namespace

double wrap_angle(double theta) noexcept {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

bool Mat2::is_finite() const noexcept {
  return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
         std::isfinite(a22);
}

double max_abs_diff(const Mat2& x, const Mat2& y) noexcept {
  return std::max({std::abs(x.a11 - y.a11), std::abs(x.a12 - y.a12),
                   std::abs(x.a21 - y.a21), std::abs(x.a22 - y.a22)});
}

SingularValues singular_values(const Mat2& m) noexcept {
  const auto hc = half_coords(m);
  const double p = std::hypot(hc.e, hc.h);
  const double q = std::hypot(hc.f, hc.g);
  return {p + q, std::abs(p - q)};
}

SL2::SL2(const Mat2& m, double det_tolerance) : m_(m) {
  if (!m.is_finite()) throw InvalidInput("SL2: matrix has non-finite entries");
  const double d = m.det();
  if (!(std::abs(d - 1.0) <= det_tolerance)) {
    throw InvalidInput("SL2: determinant " + std::to_string(d) +
                       " is not within tolerance of 1");
  }
}

SL2 rotation(double theta) {
  if (!std::isfinite(theta)) throw InvalidInput("rotation: angle is not finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return SL2::trusted({c, -s, s, c});
}

SL2 diag_hyperbolic(double c) {
  if (!std::isfinite(c) || c < 1.0) {
    throw InvalidInput("diag_hyperbolic: c must be finite and >= 1");
  }
  return SL2::trusted({c, 0.0, 0.0, 1.0 / c});
}

// On SL2 the singular values are c and 1/c, so c + 1/c = 2 * hypot(e, h)
// (equivalently sqrt(|A|_F^2 + 2)). Reading it from e and h avoids the
// cancellation in |A|_F^2 - 2 when A is close to a rotation.
double operator_norm(const SL2& a) noexcept { return singular_values(a.mat()).max; }

double n_value(const SL2& a) noexcept {
  const auto hc = half_coords(a.mat());
  return std::max(0.0, std::log(std::hypot(hc.e, hc.h)));
}

double spectral_radius(const SL2& a) noexcept {
  const double t = std::abs(a.trace());
  if (!(t > 2.0)) return 1.0;
  return 0.5 * (t + std::sqrt((t - 2.0) * (t + 2.0)));
}

double log_larger_root(double log_x) noexcept {
  if (!(log_x > kLn2)) return 0.0;
  if (log_x < 300.0) {
    const double x = std::exp(log_x);
    if (x <= 2.0) return 0.0;
    return std::log(0.5 * (x + std::sqrt((x - 2.0) * (x + 2.0))));
  }
  // 4 / x^2 underflows relative to 1 here.
  return log_x;
}

PolarForm polar_decompose(const SL2& a) noexcept {
  const Mat2& m = a.mat();
  const auto hc = half_coords(m);
  const double p = std::hypot(hc.e, hc.h);
  const double q = std::hypot(hc.f, hc.g);
  const double c = p + q;

  if (c - 1.0 <= 1e-12) {
    return {wrap_angle(std::atan2(m.a21, m.a11)), 1.0, 0.0};
  }

  const double sum = std::atan2(hc.h, hc.e);   // beta + alpha
  const double diff = std::atan2(hc.g, hc.f);  // beta - alpha
  double alpha = 0.5 * (sum - diff);
  double beta = 0.5 * (sum + diff);

  // Canonical representative: the top right-singular vector
  // (cos alpha, -sin alpha) has its first nonzero coordinate positive.
  const double ca = std::cos(alpha);
  if (ca < 0.0 || (ca == 0.0 && std::sin(alpha) > 0.0)) {
    alpha += std::numbers::pi;
    beta += std::numbers::pi;
  }

  PolarForm out{wrap_angle(beta), c, wrap_angle(alpha)};
  const Mat2 r = recompose(out).mat();
  if (max_abs_diff(r, -m) < max_abs_diff(r, m)) {
    out.beta = wrap_angle(out.beta + std::numbers::pi);
  }
  return out;
}

SL2 recompose(const PolarForm& p) {
  return rotation(p.beta) * diag_hyperbolic(p.c) * rotation(p.alpha);
}

SL2 product_chain(std::span<const SL2> ms) {
  if (ms.empty()) throw InvalidInput("product_chain: empty list");
  Mat2 acc = Mat2::identity();
  auto renormalize = [&acc] {
    const double d = acc.det();
    if (!acc.is_finite() || !(d > 0.0) || !std::isfinite(d)) {
      throw RangeError("product_chain: running product left the representable range");
    }
    acc = (1.0 / std::sqrt(d)) * acc;
  };
  for (std::size_t i = 0; i < ms.size(); ++i) {
    acc = ms[i].mat() * acc;
    if ((i + 1) % kRenormInterval == 0) renormalize();
  }
  renormalize();
  return SL2::trusted(acc);
}

void ScaledMat2::renormalize() noexcept {
  const double big = std::max({std::abs(m_.a11), std::abs(m_.a12),
                               std::abs(m_.a21), std::abs(m_.a22)});
  if (!(big > 0.0) || !std::isfinite(big)) return;
  int e = 0;
  std::frexp(big, &e);
  if (e == 0) return;
  m_ = {std::ldexp(m_.a11, -e), std::ldexp(m_.a12, -e), std::ldexp(m_.a21, -e),
        std::ldexp(m_.a22, -e)};
  exponent_ += e;
  ++renorm_count_;
}

double ScaledMat2::log_norm() const noexcept {
  return static_cast<double>(exponent_) * kLn2 + std::log(singular_values(m_).max);
}

double ScaledMat2::log_abs_trace() const noexcept {
  return static_cast<double>(exponent_) * kLn2 + std::log(std::abs(m_.trace()));
}

double ScaledMat2::log_spectral_radius() const noexcept {
  if (m_.trace() == 0.0) return 0.0;
  return log_larger_root(log_abs_trace());
}

double ScaledMat2::n_value() const noexcept {
  const auto hc = half_coords(m_);
  const double v =
      static_cast<double>(exponent_) * kLn2 + std::log(std::hypot(hc.e, hc.h));
  return std::max(0.0, v);
}

SL2 ScaledMat2::to_sl2() const {
  if (exponent_ > std::numeric_limits<double>::max_exponent ||
      exponent_ < std::numeric_limits<double>::min_exponent) {
    throw RangeError("ScaledMat2: value is not representable as a double matrix");
  }
  const int e = static_cast<int>(exponent_);
  const Mat2 out{std::ldexp(m_.a11, e), std::ldexp(m_.a12, e),
                 std::ldexp(m_.a21, e), std::ldexp(m_.a22, e)};
  if (!out.is_finite()) {
    throw RangeError("ScaledMat2: value is not representable as a double matrix");
  }
  return SL2::trusted(out);
}

ScaledMat2 operator*(const ScaledMat2& x, const ScaledMat2& y) noexcept {
  ScaledMat2 out(x.m_ * y.m_);
  out.exponent_ = x.exponent_ + y.exponent_;
  out.renormalize();
  return out;
}

double relative_distance(const ScaledMat2& x, const ScaledMat2& y) noexcept {
  const std::int64_t top = std::max(x.exponent_, y.exponent_);
  auto shifted = [top](const ScaledMat2& s) {
    const std::int64_t shift = std::max<std::int64_t>(s.exponent_ - top, -2000);
    const int k = static_cast<int>(shift);
    return Mat2{std::ldexp(s.m_.a11, k), std::ldexp(s.m_.a12, k),
                std::ldexp(s.m_.a21, k), std::ldexp(s.m_.a22, k)};
  };
  const Mat2 xs = shifted(x);
  const Mat2 ys = shifted(y);
  const double scale = std::max(std::sqrt(xs.frobenius_sq()), std::sqrt(ys.frobenius_sq()));
  if (scale == 0.0) return 0.0;
  return max_abs_diff(xs, ys) / scale;
}

}  // namespace sl2lab
