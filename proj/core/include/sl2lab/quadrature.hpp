#pragma once

// Averages (1/2pi) * integral_0^{2pi} f over the circle with the equal-weight
// rule on a uniform grid, refined by doubling until two successive estimates
// agree to within the tolerance.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace sl2lab {

struct QuadratureSpec {
  std::size_t initial_grid = 16;
  std::size_t max_grid = std::size_t{1} << 18;
  double tol = 1e-10;
  /// Worker cap for grid evaluation. Results are identical for any value.
  unsigned threads = 1;

  /// Throws InvalidInput unless both grids are powers of two with
  /// 16 <= initial_grid <= max_grid <= 2^24 and tol >= 1e-14.
  void validate() const;
};

struct IntegralEstimate {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t grid_used = 0;
  bool converged = false;
};

using PeriodicFunction = std::function<double(double)>;

inline constexpr std::size_t kMaxGrid = std::size_t{1} << 24;

bool is_power_of_two(std::size_t m) noexcept;

/// Angle of grid node k on a grid of m nodes: 2 pi k / m.
double grid_angle(std::size_t k, std::size_t m) noexcept;

/// Sum with a fixed pairwise tree, independent of how values were produced.
double pairwise_sum(std::span<const double> values) noexcept;

/// [f(2 pi k / m)] for k = 0..m-1. Throws IntegrandError on the first
/// non-finite value (in index order).
std::vector<double> grid_values(const PeriodicFunction& f, std::size_t m,
                                unsigned threads = 1);

/// Equal-weight average on the m-point grid.
double grid_average(const PeriodicFunction& f, std::size_t m, unsigned threads = 1);

IntegralEstimate periodic_average(const PeriodicFunction& f, const QuadratureSpec& spec);

/// CSV with header "theta,value", 17 significant digits.
void write_grid_csv(std::ostream& os, std::span<const double> values);

}  // namespace sl2lab
