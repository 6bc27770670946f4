#include "sl2lab/formulas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sl2lab/error.hpp"

namespace sl2lab {
namespace {

void require_nonempty(std::span<const SL2> as, const char* who) {
  if (as.empty()) throw InvalidInput(std::string(who) + ": empty matrix list");
}

FormulaReport make_report(const IntegralEstimate& q, double lhs, double rhs) {
  FormulaReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_error = std::abs(lhs - rhs);
  r.quadrature = q;
  return r;
}

// Fubini cost grows with the square of the grid.
constexpr std::size_t kFubiniCostWarnGrid = std::size_t{1} << 12;

// Above this many factors the companion matrices get large; the
// kink-resolved average falls back to the uniform grid.
constexpr std::size_t kMaxKinkFactors = 64;

double rotated_trace(std::span<const SL2> as, double theta) {
  const ScaledMat2 p = rotated_product(as, theta);
  return std::ldexp(p.mantissa().trace(), static_cast<int>(p.exponent()));
}

// tr(theta) = sum_{k=-n..n} c_k e^{ik theta}; returned as c_{-n..n}.
std::vector<std::complex<double>> trace_fourier(std::span<const SL2> as) {
  const auto n = static_cast<int>(as.size());
  const int m = 4 * n + 4;
  std::vector<double> samples(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) samples[j] = rotated_trace(as, kTwoPi * j / m);
  std::vector<std::complex<double>> c(static_cast<std::size_t>(2 * n + 1));
  for (int k = -n; k <= n; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < m; ++j) acc += samples[j] * std::polar(1.0, -kTwoPi * k * j / m);
    c[static_cast<std::size_t>(k + n)] = acc / static_cast<double>(m);
  }
  return c;
}

// Roots of sum_j p_j z^j (p_d != 0) as companion-matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(
    const std::vector<std::complex<double>>& p) {
  const auto d = static_cast<Eigen::Index>(p.size()) - 1;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) comp(0, j) = -p[d - 1 - j] / p[d];
  for (Eigen::Index i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, /*computeEigenvectors=*/false);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

bool MeasureBoundReport::holds() const noexcept {
  return nu_estimate >= lower_bound - 2.0 / static_cast<double>(grid);
}

ScaledMat2 rotated_product(std::span<const SL2> as, double theta) {
  const Mat2 r = rotation(theta).mat();
  ScaledMat2 acc;
  int since = 0;
  for (const SL2& a : as) {
    acc.left_multiply(a.mat() * r);
    if (++since == kRenormInterval) {
      acc.renormalize();
      since = 0;
    }
  }
  return acc;
}

double sum_n_values(std::span<const SL2> as) noexcept {
  double s = 0.0;
  for (const SL2& a : as) s += n_value(a);
  return s;
}

std::vector<double> parabolic_angles(std::span<const SL2> as) {
  require_nonempty(as, "parabolic_angles");
  const auto n = static_cast<int>(as.size());
  const auto coeffs = trace_fourier(as);
  double scale = 0.0;
  for (const auto& c : coeffs) scale += std::abs(c);

  auto g = [&](double theta, double level) {
    std::complex<double> v = 0.0, dv = 0.0;
    for (int k = -n; k <= n; ++k) {
      const auto term = coeffs[static_cast<std::size_t>(k + n)] * std::polar(1.0, k * theta);
      v += term;
      dv += std::complex<double>(0.0, k) * term;
    }
    return std::pair{v.real() - level, dv.real()};
  };

  std::vector<double> angles;
  for (const double level : {2.0, -2.0}) {
    std::vector<std::complex<double>> p(coeffs.begin(), coeffs.end());
    p[static_cast<std::size_t>(n)] -= level;
    for (const auto& z : polynomial_roots(p)) {
      if (std::abs(std::abs(z) - 1.0) > 1e-3) continue;
      double theta = std::arg(z);
      // Newton polish on the real trigonometric polynomial; keep the raw
      // angle when the root is (nearly) double and Newton stalls.
      for (int it = 0; it < 8; ++it) {
        const auto [v, dv] = g(theta, level);
        if (std::abs(v) <= 1e-15 * scale || dv == 0.0) break;
        const double next = theta - v / dv;
        if (std::abs(next - theta) > 1e-3) break;
        theta = next;
      }
      angles.push_back(wrap_angle(theta));
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double x, double y) { return y - x <= 1e-14; }),
               angles.end());
  return angles;
}

IntegralEstimate kink_resolved_log_rho_average(std::span<const SL2> as,
                                               const QuadratureSpec& spec) {
  require_nonempty(as, "kink_resolved_log_rho_average");
  spec.validate();
  if (as.size() > kMaxKinkFactors) {
    return periodic_average(theorem2_integrand({as.begin(), as.end()}), spec);
  }

  std::size_t evaluations = 0;
  auto log_rho = [&](double theta) {
    ++evaluations;
    const double v = rotated_product(as, theta).log_spectral_radius();
    if (!std::isfinite(v)) throw IntegrandError(theta, v);
    return v;
  };

  const auto angles = parabolic_angles(as);
  if (angles.empty()) {
    // No parabolic parameter: the integrand is analytic on the whole circle.
    return periodic_average(log_rho, spec);
  }

  boost::math::quadrature::tanh_sinh<double> integrator;
  // The level-difference error estimate runs far above the true error, so
  // ask for two extra digits.
  const double rel_tol = 1e-2 * std::min(1e-10, spec.tol);
  double total = 0.0;
  double err_total = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double lo = angles[i];
    const double hi = (i + 1 < angles.size()) ? angles[i + 1] : angles.front() + kTwoPi;
    if (!(hi > lo)) continue;
    if (log_rho(0.5 * (lo + hi)) == 0.0) continue;  // elliptic arc
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    total += integrator.integrate(log_rho, lo, hi, rel_tol, &err, &l1, &levels);
    err_total += err;
  }
  IntegralEstimate out;
  out.value = total / kTwoPi;
  out.est_error = err_total / kTwoPi;
  out.grid_used = evaluations;
  out.converged = out.est_error <= spec.tol;
  return out;
}

PeriodicFunction theorem1_integrand(std::vector<SL2> as) {
  return [as = std::move(as)](double theta) { return rotated_product(as, theta).n_value(); };
}

PeriodicFunction theorem2_integrand(std::vector<SL2> as) {
  return [as = std::move(as)](double theta) {
    return rotated_product(as, theta).log_spectral_radius();
  };
}

PeriodicFunction expansion_integrand(const SL2& a) {
  const Mat2 m = a.mat();
  return [m](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double x = m.a11 * c + m.a12 * s;
    const double y = m.a21 * c + m.a22 * s;
    return 0.5 * std::log(x * x + y * y);
  };
}

PeriodicFunction f_integrand(double b) {
  return [b](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return std::log(b * b * c * c + s * s);
  };
}

FormulaReport theorem1_check(std::span<const SL2> as, const QuadratureSpec& spec) {
  require_nonempty(as, "theorem1_check");
  const auto q = periodic_average(theorem1_integrand({as.begin(), as.end()}), spec);
  return make_report(q, q.value, sum_n_values(as));
}

FormulaReport theorem2_check(std::span<const SL2> as, const QuadratureSpec& spec) {
  require_nonempty(as, "theorem2_check");
  const auto q = kink_resolved_log_rho_average(as, spec);
  return make_report(q, q.value, sum_n_values(as));
}

FormulaReport theorem2_check_uniform(std::span<const SL2> as, const QuadratureSpec& spec) {
  require_nonempty(as, "theorem2_check_uniform");
  const auto q = periodic_average(theorem2_integrand({as.begin(), as.end()}), spec);
  return make_report(q, q.value, sum_n_values(as));
}

FormulaReport avg_expansion_check(const SL2& a, const QuadratureSpec& spec) {
  const auto q = periodic_average(expansion_integrand(a), spec);
  return make_report(q, q.value, n_value(a));
}

FormulaReport f_integral_check(double b, const QuadratureSpec& spec) {
  if (!std::isfinite(b) || b < 1.0) {
    throw InvalidInput("f_integral_check: b must be finite and >= 1");
  }
  // The integrand has period pi, so the integral over [0, pi] is pi times
  // its average over the full circle.
  auto q = periodic_average(f_integrand(b), spec);
  const double lhs = std::numbers::pi * q.value;
  q.est_error *= std::numbers::pi;
  return make_report(q, lhs, kTwoPi * std::log(0.5 * (b + 1.0)));
}

MeasureBoundReport measure_bound_check(std::span<const SL2> as, double a,
                                       std::size_t grid, unsigned threads) {
  require_nonempty(as, "measure_bound_check");
  if (!std::isfinite(a) || !(a > 0.0)) {
    throw InvalidInput("measure_bound_check: a must be finite and > 0");
  }
  if (grid < 1) throw InvalidInput("measure_bound_check: grid must be >= 1");

  const double n = static_cast<double>(as.size());
  double sum_log_norms = 0.0;
  for (const SL2& m : as) sum_log_norms += std::log(operator_norm(m));
  const double threshold = -a + sum_log_norms / n;

  // Strict inequality: nodes exactly on the boundary count as outside E.
  std::vector<double> indicator = grid_values(
      [&](double theta) {
        return rotated_product(as, theta).log_norm() / n > threshold ? 1.0 : 0.0;
      },
      grid, threads);
  double inside = 0.0;
  for (double v : indicator) inside += v;

  MeasureBoundReport r;
  r.a = a;
  r.grid = grid;
  r.nu_estimate = inside / static_cast<double>(grid);
  r.lower_bound = 1.0 - std::numbers::ln2 / a;
  return r;
}

IntegralEstimate fubini_inner(std::span<const SL2> as, double theta,
                              const QuadratureSpec& spec) {
  require_nonempty(as, "fubini_inner");
  const SL2 b = rotated_product(as, theta).to_sl2();
  QuadratureSpec inner = spec;
  inner.threads = 1;
  return kink_resolved_log_rho_average(std::span<const SL2>(&b, 1), inner);
}

FormulaReport fubini_check(std::span<const SL2> as, const QuadratureSpec& spec) {
  require_nonempty(as, "fubini_check");
  std::atomic<std::size_t> unconverged{0};
  const auto q = periodic_average(
      [&](double theta) {
        const auto inner = fubini_inner(as, theta, spec);
        if (!inner.converged) unconverged.fetch_add(1, std::memory_order_relaxed);
        return inner.value;
      },
      spec);

  FormulaReport r = make_report(q, q.value, sum_n_values(as));
  if (spec.max_grid > kFubiniCostWarnGrid) {
    r.warnings.push_back("fubini grid above 2^12 x 2^12: cost grows quadratically");
  }
  if (const std::size_t k = unconverged.load(); k > 0) {
    r.quadrature.converged = false;
    r.warnings.push_back(std::to_string(k) + " inner averages did not converge");
  }
  return r;
}

}  // namespace sl2lab
