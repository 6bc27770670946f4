#pragma once

// Real 2x2 linear algebra specialised to SL(2,R).

#include <cstdint>
#include <numbers>
#include <span>

namespace sl2lab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2pi).
double wrap_angle(double theta) noexcept;

/// Row-major real 2x2 matrix.
struct Mat2 {
  double a11 = 1.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 1.0;

  static constexpr Mat2 identity() noexcept { return {1.0, 0.0, 0.0, 1.0}; }

  constexpr double det() const noexcept { return a11 * a22 - a12 * a21; }
  constexpr double trace() const noexcept { return a11 + a22; }
  constexpr double frobenius_sq() const noexcept {
    return a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
  }
  bool is_finite() const noexcept;

  friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) noexcept {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& x) noexcept {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
  }
  friend constexpr Mat2 operator-(const Mat2& x) noexcept {
    return {-x.a11, -x.a12, -x.a21, -x.a22};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Largest entrywise absolute difference.
double max_abs_diff(const Mat2& x, const Mat2& y) noexcept;

/// Singular values of an arbitrary real 2x2 matrix, largest first.
struct SingularValues {
  double max;
  double min;
};
SingularValues singular_values(const Mat2& m) noexcept;

/// Element of SL(2,R): a Mat2 whose determinant is 1 up to `kDetTolerance`.
class SL2 {
 public:
  static constexpr double kDetTolerance = 1e-9;

  constexpr SL2() noexcept = default;

  /// Throws InvalidInput when `m` has non-finite entries or |det m - 1| > tol.
  explicit SL2(const Mat2& m, double det_tolerance = kDetTolerance);

  /// Skips validation; for products of values already known to be in SL2.
  static constexpr SL2 trusted(const Mat2& m) noexcept {
    SL2 s;
    s.m_ = m;
    return s;
  }

  static constexpr SL2 identity() noexcept { return {}; }

  constexpr const Mat2& mat() const noexcept { return m_; }
  constexpr double trace() const noexcept { return m_.trace(); }
  constexpr double det() const noexcept { return m_.det(); }

  friend constexpr SL2 operator*(const SL2& x, const SL2& y) noexcept {
    return trusted(x.m_ * y.m_);
  }
  friend constexpr SL2 operator-(const SL2& x) noexcept { return trusted(-x.m_); }
  friend constexpr bool operator==(const SL2&, const SL2&) = default;

  SL2 inverse() const noexcept {
    return trusted({m_.a22, -m_.a12, -m_.a21, m_.a11});
  }

 private:
  Mat2 m_ = Mat2::identity();
};

/// A = R_beta * H_c * R_alpha.
struct PolarForm {
  double beta = 0.0;
  double c = 1.0;
  double alpha = 0.0;
};

SL2 rotation(double theta);
SL2 diag_hyperbolic(double c);

/// Euclidean operator norm (largest singular value).
double operator_norm(const SL2& a) noexcept;

/// log((|A| + |A|^-1) / 2): the average rate of expansion of A.
double n_value(const SL2& a) noexcept;

/// Largest eigenvalue modulus, read off the trace.
double spectral_radius(const SL2& a) noexcept;

/// log of the larger root of lambda + 1/lambda = x, given log x.
/// Returns 0 for x <= 2. Stays finite when x itself would overflow.
double log_larger_root(double log_x) noexcept;

PolarForm polar_decompose(const SL2& a) noexcept;
SL2 recompose(const PolarForm& p);

/// ms[k-1] * ... * ms[0], with periodic determinant renormalisation.
/// Throws InvalidInput on an empty list, RangeError on overflow.
SL2 product_chain(std::span<const SL2> ms);

/// Factor count between determinant (or scale) renormalisations.
inline constexpr int kRenormInterval = 64;

/// Product kept as 2^exponent * m so that long cocycle orbits never
/// overflow. Rescaling is by powers of two and therefore exact.
class ScaledMat2 {
 public:
  ScaledMat2() noexcept = default;
  explicit ScaledMat2(const Mat2& m) noexcept : m_(m) {}

  const Mat2& mantissa() const noexcept { return m_; }
  std::int64_t exponent() const noexcept { return exponent_; }
  std::int64_t renorm_count() const noexcept { return renorm_count_; }

  /// this <- left * this
  void left_multiply(const Mat2& left) noexcept { m_ = left * m_; }
  void right_multiply(const Mat2& right) noexcept { m_ = m_ * right; }

  /// Moves the magnitude of the largest entry into the exponent.
  void renormalize() noexcept;

  /// log of the operator norm; valid for any real matrix.
  double log_norm() const noexcept;
  /// log |trace|; -inf for a zero trace.
  double log_abs_trace() const noexcept;
  /// log of the spectral radius, assuming the represented matrix is in SL2.
  double log_spectral_radius() const noexcept;
  /// N of the represented matrix, assuming it is in SL2.
  double n_value() const noexcept;

  /// Materialises the value; throws RangeError if it is not representable.
  SL2 to_sl2() const;

  /// Product of two scaled values; the result is renormalised.
  friend ScaledMat2 operator*(const ScaledMat2& x, const ScaledMat2& y) noexcept;

  /// max |x - y| / max(|x|_F, |y|_F), computed without materialising.
  friend double relative_distance(const ScaledMat2& x, const ScaledMat2& y) noexcept;

 private:
  Mat2 m_ = Mat2::identity();
  std::int64_t exponent_ = 0;
  std::int64_t renorm_count_ = 0;
};

}  // namespace sl2lab
