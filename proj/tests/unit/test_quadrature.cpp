#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "sl2lab/error.hpp"
#include "sl2lab/formulas.hpp"
#include "sl2lab/quadrature.hpp"
#include "test_support.hpp"

using namespace sl2lab;
using sl2test::kPi;

TEST_CASE("QuadratureSpec validation") {
  QuadratureSpec q;
  CHECK_NOTHROW(q.validate());
  q.initial_grid = 8;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
  q = {};
  q.max_grid = 1000;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
  q = {};
  q.max_grid = std::size_t{1} << 25;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
  q = {};
  q.initial_grid = 64;
  q.max_grid = 32;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
  q = {};
  q.tol = 1e-15;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
}

TEST_CASE("periodic_average basics") {
  QuadratureSpec q;
  const auto c = periodic_average([](double t) { return std::cos(t); }, q);
  CHECK(std::abs(c.value) < 1e-14);
  CHECK(c.converged);

  const auto h2 = periodic_average(
      [](double t) { return std::log(std::hypot(2 * std::cos(t), 0.5 * std::sin(t))); }, q);
  CHECK(std::abs(h2.value - std::log(1.25)) < 1e-12);
  CHECK(h2.converged);
  CHECK(h2.est_error <= q.tol);

  // F(2) from the full-period average of log(4 cos^2 + sin^2).
  const auto f = periodic_average(
      [](double t) { return std::log(4 * std::cos(t) * std::cos(t) + std::sin(t) * std::sin(t)); }, q);
  CHECK(std::abs(f.value * 2 * kPi / 2 - 2 * kPi * std::log(1.5)) < 1e-10);
}

TEST_CASE("trigonometric polynomials of degree < m are exact on grid m") {
  for (std::size_t m : {16u, 64u, 256u}) {
    for (std::size_t k = 1; k < m; ++k) {
      const double avg = grid_average([k](double t) { return std::cos(k * t) + std::sin(k * t); }, m);
      if (std::abs(avg) > 1e-13) FAIL_CHECK("m=" << m << " k=" << k << " avg=" << avg);
    }
    CHECK(grid_average([m](double t) { return std::cos(m * t); }, m) == doctest::Approx(1.0));
  }
}

TEST_CASE("grid_values") {
  const auto ones = grid_values([](double) { return 1.0; }, 8);
  CHECK(ones == std::vector<double>(8, 1.0));
  const auto s = grid_values([](double t) { return std::sin(t); }, 4);
  const std::vector<double> expect{0, 1, 0, -1};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s[i] - expect[i]) <= 1e-15);
  auto f = [](double t) { return std::exp(std::sin(3 * t)); };
  const auto v = grid_values(f, 64);
  CHECK(pairwise_sum(v) / 64 == grid_average(f, 64));
}

TEST_CASE("non-finite integrands report the first offending angle") {
  QuadratureSpec q;
  try {
    periodic_average([](double t) { return t > 3.0 ? NAN : 0.0; }, q);
    FAIL("expected IntegrandError");
  } catch (const IntegrandError& e) {
    CHECK(e.theta() > 3.0);
    CHECK(e.theta() < 3.0 + 2 * kPi / 16 + 1e-12);
  }
}

TEST_CASE("non-convergence is reported, not thrown") {
  QuadratureSpec q;
  q.max_grid = 32;
  q.tol = 1e-14;
  const auto r = periodic_average([](double t) { return std::abs(std::sin(t)); }, q);
  CHECK_FALSE(r.converged);
  CHECK(r.grid_used == 32);
  CHECK(r.est_error > q.tol);
}

TEST_CASE("results do not depend on the thread count") {
  auto f = [](double t) { return std::log(1.5 + std::cos(t) * std::sin(7 * t)); };
  QuadratureSpec q;
  q.max_grid = 1 << 16;
  q.tol = 1e-15 * 10;
  const auto a = periodic_average(f, q);
  q.threads = 7;
  const auto b = periodic_average(f, q);
  CHECK(a.value == b.value);
  CHECK(a.grid_used == b.grid_used);
  CHECK(grid_values(f, 4096, 1) == grid_values(f, 4096, 5));
}

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1000, 0.1);
  CHECK(std::abs(pairwise_sum(v) - 100.0) < 1e-12);
  CHECK(pairwise_sum({}) == 0.0);
}

namespace {

// Successive differences |avg(2m) - avg(m)| for m = 16 .. 2^14.
std::vector<double> refinement_steps(const PeriodicFunction& f) {
  std::vector<double> steps;
  double last = grid_average(f, 16);
  for (std::size_t m = 32; m <= (1u << 14); m *= 2) {
    const double cur = grid_average(f, m);
    steps.push_back(std::abs(cur - last));
    last = cur;
  }
  return steps;
}

const std::vector<SL2> kRefinementCase{diag_hyperbolic(2.0), rotation(0.3) * diag_hyperbolic(1.7)};

}  // namespace

TEST_CASE("refinement is monotone on the N(B_theta) integrand") {
  const auto steps = refinement_steps(theorem1_integrand(kRefinementCase));
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i - 1] > 1e-13) CHECK(steps[i] <= 2 * steps[i - 1] + 1e-15);
  }
}

// Kinks where |tr B_theta| = 2 land at varying offsets from the grid, so
// the uniform-grid differences jump around (up to ~10x between doublings).
TEST_CASE("refinement is monotone on the log rho(B_theta) integrand" * doctest::should_fail()) {
  const auto steps = refinement_steps(theorem2_integrand(kRefinementCase));
  for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] <= 2 * steps[i - 1] + 1e-15);
}

TEST_CASE("the kinked log rho integrand self-converges on uniform grids") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 5; ++i) {
    const auto as = sl2test::random_list(rng, 4, 10.0);
    const auto f = theorem2_integrand(as);
    const double a = grid_average(f, 1 << 16), b = grid_average(f, 1 << 17);
    CHECK(std::abs(a - b) <= 1e-6);
  }
}

TEST_CASE("write_grid_csv") {
  std::ostringstream os;
  const std::vector<double> v{1.0, 0.25};
  write_grid_csv(os, v);
  CHECK(os.str() == "theta,value\n0,1\n3.1415926535897931,0.25\n");
}
