#pragma once

// Complex 2x2 matrices S_z, T_z and the products C_z = A_n T_z ... A_1 T_z
// whose eigenvalue moduli interpolate between log rho on the unit circle
// and the centre value at z = 0.

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sl2lab/mat2.hpp"

namespace sl2lab {

using cplx = std::complex<double>;

/// Row-major complex 2x2 matrix.
struct CMat2 {
  cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

  static CMat2 identity() noexcept { return {}; }
  static CMat2 from_real(const Mat2& m) noexcept {
    return {cplx(m.a11), cplx(m.a12), cplx(m.a21), cplx(m.a22)};
  }

  cplx det() const noexcept { return a11 * a22 - a12 * a21; }
  cplx trace() const noexcept { return a11 + a22; }
  bool is_finite() const noexcept;

  friend CMat2 operator*(const CMat2& x, const CMat2& y) noexcept {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend CMat2 operator*(cplx s, const CMat2& x) noexcept {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
  }
};

double max_abs_diff(const CMat2& x, const CMat2& y) noexcept;

/// Eigenvalues ordered by modulus (descending), ties by argument in [0, 2pi).
struct EigenPair {
  cplx lambda1;
  cplx lambda2;
};

CMat2 s_matrix(cplx z);
CMat2 t_matrix(cplx z) noexcept;
CMat2 c_matrix(std::span<const SL2> as, cplx z);

EigenPair eigen2(const CMat2& c) noexcept;

/// True iff (tr C)^2 / (4 det C) lies in [0, 1], i.e. both eigenvalues have
/// the same modulus. Throws SingularMatrix when |det C| <= 1e-14.
bool equal_modulus(const CMat2& c);

/// Residuals at the centre of the disk: |small eigenvalue of C_0| and
/// |large eigenvalue of C_0| - prod (c_j + 1/c_j) / 2.
std::pair<double, double> centro_check(std::span<const SL2> as);

/// One sampled instance of the separation check on the open disk.
struct SeparationSample {
  cplx z;
  double modulus1;
  double modulus2;
  bool separated;  // |lambda1| - |lambda2| > 1e-10 |lambda1|
};

/// Summary of a batch of separation samples.
struct SeparationReport {
  std::size_t samples = 0;
  std::size_t separated = 0;
  double min_relative_gap = 0.0;  // min over samples of (|l1| - |l2|) / |l1|
  cplx worst_z{0.0};
};

SeparationSample separation_sample(std::span<const SL2> as, cplx z);

/// Draws `samples` instances deterministically from `seed`: z uniform on the
/// disk of radius `max_radius`, 1..max_factors factors R H_c R with
/// c in [1, max_norm].
SeparationReport autoval_sample(std::uint64_t seed, std::size_t samples,
                                double max_radius = 0.9, int max_factors = 4,
                                double max_norm = 10.0);

}  // namespace sl2lab
