#pragma once

// Executable forms of the average-expansion identities: the circle average
// of N (resp. log rho) of A_n R_theta ... A_1 R_theta equals sum_j N(A_j),
// the single-matrix average of log |A u_theta|, the closed form of
// F(b) = integral_0^pi log(b^2 cos^2 + sin^2), the Knill-type measure bound
// and the double-average (Fubini) route from one identity to the other.

#include <span>
#include <string>
#include <vector>

#include "sl2lab/mat2.hpp"
#include "sl2lab/quadrature.hpp"

namespace sl2lab {

/// Default verdict tolerances: the N-integrand is analytic, the
/// log rho-integrand has square-root kinks where |tr| = 2.
inline constexpr double kTheorem1Tolerance = 1e-8;
inline constexpr double kTheorem2Tolerance = 1e-6;

struct FormulaReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  IntegralEstimate quadrature;
  std::vector<std::string> warnings;
};

struct MeasureBoundReport {
  double a = 0.0;
  double nu_estimate = 0.0;
  double lower_bound = 0.0;
  std::size_t grid = 0;

  /// nu_estimate >= lower_bound - 2 / grid.
  bool holds() const noexcept;
};

/// A_n R_theta ... A_1 R_theta as a scaled product (safe for long lists).
ScaledMat2 rotated_product(std::span<const SL2> as, double theta);

/// sum_j N(A_j).
double sum_n_values(std::span<const SL2> as) noexcept;

/// Parameters theta in [0, 2pi), sorted, where |tr(A_n R_theta ... A_1 R_theta)|
/// may equal 2. The trace is a trigonometric polynomial of degree n, so these
/// are unit-circle roots of two polynomials of degree 2n. The list may contain
/// extra near-tangency points; it never misses a simple crossing.
std::vector<double> parabolic_angles(std::span<const SL2> as);

/// Circle average of log rho(A_n R_theta ... A_1 R_theta), integrated arc by
/// arc between parabolic angles with tanh-sinh quadrature, which absorbs the
/// square-root behaviour of log rho at each end of a hyperbolic arc. Elliptic
/// arcs contribute zero. `grid_used` reports the number of integrand
/// evaluations; `converged` means the summed error estimate is <= spec.tol.
IntegralEstimate kink_resolved_log_rho_average(std::span<const SL2> as,
                                               const QuadratureSpec& spec);

PeriodicFunction theorem1_integrand(std::vector<SL2> as);
PeriodicFunction theorem2_integrand(std::vector<SL2> as);
PeriodicFunction expansion_integrand(const SL2& a);
/// log(b^2 cos^2 theta + sin^2 theta).
PeriodicFunction f_integrand(double b);

FormulaReport theorem1_check(std::span<const SL2> as, const QuadratureSpec& spec);
/// Uses kink_resolved_log_rho_average for the left-hand side.
FormulaReport theorem2_check(std::span<const SL2> as, const QuadratureSpec& spec);
/// Same identity on the plain uniform grid (periodic_average).
FormulaReport theorem2_check_uniform(std::span<const SL2> as, const QuadratureSpec& spec);
FormulaReport avg_expansion_check(const SL2& a, const QuadratureSpec& spec);
FormulaReport f_integral_check(double b, const QuadratureSpec& spec);

/// Fraction of the `grid` nodes lying in
/// E = {theta : (1/n) log|B_theta| > -a + (1/n) sum log|A_j|}.
MeasureBoundReport measure_bound_check(std::span<const SL2> as, double a,
                                       std::size_t grid, unsigned threads = 1);

/// Inner average over theta' of log rho(B_theta R_theta') at fixed theta,
/// kink-resolved.
IntegralEstimate fubini_inner(std::span<const SL2> as, double theta,
                              const QuadratureSpec& spec);

/// Double average of log rho(B_theta R_theta'): uniform grid over theta
/// (the inner value N(B_theta) is smooth in theta), kink-resolved inner
/// average over theta'. `spec` drives both levels.
FormulaReport fubini_check(std::span<const SL2> as, const QuadratureSpec& spec);

}  // namespace sl2lab
