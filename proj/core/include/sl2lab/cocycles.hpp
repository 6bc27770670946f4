#pragma once

// Linear cocycles A: X -> SL(2,R) over an irrational circle rotation or the
// two-sided (1/2, 1/2) Bernoulli shift: orbit products
// A^n(x) = A(T^{n-1} x) ... A(x), Lyapunov exponents, the rotation-averaged
// exponent against the Birkhoff average of N, and spectral-radius growth.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sl2lab/formulas.hpp"
#include "sl2lab/mat2.hpp"
#include "sl2lab/quadrature.hpp"

namespace sl2lab {

/// (sqrt(5) - 1) / 2 of a full turn.
inline constexpr double kGoldenFraction = 0.61803398874989484820;

struct CircleRotation {
  double alpha = kGoldenFraction;  // fraction of a full turn, in (0, 1)
};
struct BernoulliShift {
  std::uint64_t seed = 0;
};
using Base = std::variant<CircleRotation, BernoulliShift>;

/// A(e^{2 pi i x}) = H_c R_{2 pi x}; circle bases only.
struct HermanMap {
  double c = 2.0;
};
/// H_2 / identity / quarter turn chosen from (x_{-1}, x_0, x_1); Bernoulli only.
struct BernoulliHIR {};
struct ConstantMap {
  SL2 a;
};
/// Circle: k equal arcs, arc j maps to table[j]. Bernoulli: table[x_0], k = 2.
struct TableMap {
  std::vector<SL2> table;
};
using CocycleMap = std::variant<HermanMap, BernoulliHIR, ConstantMap, TableMap>;

struct CocycleSpec {
  Base base;
  CocycleMap map;

  /// Throws ConfigError on an invalid base/map pairing or parameters.
  void validate() const;
};

/// A point of the base: `phase` in [0, 1) on the circle, `offset` into the
/// seeded symbol sequence for the shift (T^m x has offset + m).
struct BasePoint {
  double phase = 0.0;
  std::int64_t offset = 0;
};

/// T^m x.
BasePoint advance(const CocycleSpec& spec, const BasePoint& x, std::int64_t m);

/// Symbol x_i of the sequence drawn from `seed`, for any integer i.
int bernoulli_symbol(std::uint64_t seed, std::int64_t i) noexcept;

/// A(x) for the cocycle spec.
SL2 cocycle_value(const CocycleSpec& spec, const BasePoint& x);

/// The three-symbol rule H / I / R of the Bernoulli example.
SL2 bernoulli_cocycle_value(int x_prev, int x0, int x_next);

/// Product A(T^{k-1} x) ... A(x) of the H/I/R cocycle for a window
/// (x_{-1}, x_0, ..., x_k) of k + 2 symbols.
SL2 bernoulli_word_product(std::span<const int> window);

/// A^n(x) in scaled form. `twist` multiplies every factor on the right by
/// R_twist, i.e. the cocycle (A R_theta)(x) = A(x) R_theta.
ScaledMat2 cocycle_product_scaled(const CocycleSpec& spec, const BasePoint& x0,
                                  std::int64_t n, double twist = 0.0);

/// A^n(x) as a plain matrix; throws RangeError once it overflows.
SL2 cocycle_product(const CocycleSpec& spec, const BasePoint& x0, std::int64_t n);

struct LyapunovReport {
  std::int64_t n = 0;
  double exponent = 0.0;
  BasePoint x0;
  std::int64_t renorm_count = 0;
};

LyapunovReport lyapunov_estimate(const CocycleSpec& spec, const BasePoint& x0,
                                 std::int64_t n, double twist = 0.0);

/// lhs: circle average over theta of the horizon-n exponent of A R_theta.
/// rhs: Birkhoff average (1/n) sum_j N(A(T^j x0)).
FormulaReport herman_equality_check(const CocycleSpec& spec, std::int64_t n,
                                    const QuadratureSpec& quad,
                                    const BasePoint& x0 = {});

struct SpectralGrowthPoint {
  std::int64_t n = 0;
  double inv_n_log_rho = 0.0;
  double inv_n_log_norm = 0.0;
  bool rho_is_one = false;
};

struct SpectralGrowthReport {
  std::vector<SpectralGrowthPoint> series;
  /// First n of the window over which running_max is taken.
  std::int64_t tail_start = 1;
  /// max of inv_n_log_rho over n >= tail_start.
  double running_max = 0.0;
  /// Number of n with rho(A^n(x)) <= 1 + 1e-9.
  std::int64_t rho_one_count = 0;
};

SpectralGrowthReport spectral_growth(const CocycleSpec& spec, const BasePoint& x0,
                                     std::int64_t n_max);

/// Largest horizon accepted by star_identity_probe (2^{n+2} windows).
inline constexpr int kStarProbeMaxN = 22;

/// ((1/n) E[log rho(A^n)], log 2 / 2) for the Bernoulli H/I/R cocycle, the
/// expectation computed exactly over all 2^{n+2} windows x_{-1..n}.
std::pair<double, double> star_identity_probe(int n);

/// Same enumeration for the norm: (1/n) E[log |A^n|].
double star_norm_average(int n);

void write_spectral_growth_csv(std::ostream& os, const SpectralGrowthReport& r);

}  // namespace sl2lab
