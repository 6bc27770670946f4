#include "sl2lab/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "sl2lab/detail/parallel.hpp"
#include "sl2lab/error.hpp"
#include "sl2lab/mat2.hpp"

namespace sl2lab {
namespace {

// Evaluates f at nodes first, first + stride, ... of the m-point grid.
std::vector<double> evaluate_nodes(const PeriodicFunction& f, std::size_t m,
                                   std::size_t first, std::size_t stride,
                                   std::size_t count, unsigned threads) {
  std::vector<double> out(count);
  detail::parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = f(grid_angle(first + i * stride, m));
    }
  });
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(out[i])) {
      throw IntegrandError(grid_angle(first + i * stride, m), out[i]);
    }
  }
  return out;
}

double pairwise_sum_impl(const double* v, std::size_t n) noexcept {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!is_power_of_two(initial_grid) || initial_grid < 16) {
    throw InvalidInput("QuadratureSpec: initial_grid must be a power of two >= 16");
  }
  if (!is_power_of_two(max_grid) || max_grid > kMaxGrid) {
    throw InvalidInput("QuadratureSpec: max_grid must be a power of two <= 2^24");
  }
  if (initial_grid > max_grid) {
    throw InvalidInput("QuadratureSpec: initial_grid exceeds max_grid");
  }
  if (!(tol >= 1e-14) || !std::isfinite(tol)) {
    throw InvalidInput("QuadratureSpec: tol must be finite and >= 1e-14");
  }
}

bool is_power_of_two(std::size_t m) noexcept { return m != 0 && (m & (m - 1)) == 0; }

double grid_angle(std::size_t k, std::size_t m) noexcept {
  // Doubling both k and m scales numerator and denominator by exactly 2, so
  // a node keeps its bitwise angle across refinements.
  return kTwoPi * static_cast<double>(k) / static_cast<double>(m);
}

double pairwise_sum(std::span<const double> values) noexcept {
  return pairwise_sum_impl(values.data(), values.size());
}

std::vector<double> grid_values(const PeriodicFunction& f, std::size_t m,
                                unsigned threads) {
  if (m < 1) throw InvalidInput("grid_values: m must be >= 1");
  return evaluate_nodes(f, m, 0, 1, m, threads);
}

double grid_average(const PeriodicFunction& f, std::size_t m, unsigned threads) {
  const auto v = grid_values(f, m, threads);
  return pairwise_sum(v) / static_cast<double>(m);
}

IntegralEstimate periodic_average(const PeriodicFunction& f, const QuadratureSpec& spec) {
  spec.validate();
  std::size_t m = spec.initial_grid;
  const auto first = evaluate_nodes(f, m, 0, 1, m, spec.threads);
  double sum = pairwise_sum(first);
  double estimate = sum / static_cast<double>(m);

  if (m == spec.max_grid) {
    // No room to refine: compare against the embedded half grid instead.
    std::vector<double> even;
    even.reserve(m / 2);
    for (std::size_t k = 0; k < m; k += 2) even.push_back(first[k]);
    const double coarse = pairwise_sum(even) / static_cast<double>(m / 2);
    const double err = std::abs(estimate - coarse);
    return {estimate, err, m, err <= spec.tol};
  }

  double err = std::numeric_limits<double>::infinity();
  bool converged = false;
  while (m < spec.max_grid) {
    const std::size_t fine = 2 * m;
    const auto odd = evaluate_nodes(f, fine, 1, 2, m, spec.threads);
    sum += pairwise_sum(odd);
    const double next = sum / static_cast<double>(fine);
    err = std::abs(next - estimate);
    estimate = next;
    m = fine;
    if (err <= spec.tol) {
      converged = true;
      break;
    }
  }
  return {estimate, err, m, converged};
}

void write_grid_csv(std::ostream& os, std::span<const double> values) {
  os << "theta,value\n";
  char buf[64];
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid_angle(k, values.size()), values[k]);
    os << buf;
  }
}

}  // namespace sl2lab
