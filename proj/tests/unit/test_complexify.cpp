#include <cmath>
#include <vector>

#include "doctest.h"
#include "sl2lab/complexify.hpp"
#include "sl2lab/error.hpp"
#include "sl2lab/formulas.hpp"
#include "sl2lab/quadrature.hpp"
#include "test_support.hpp"

using namespace sl2lab;
using sl2test::kPi;

namespace {

const cplx I{0.0, 1.0};

CMat2 embed(const SL2& a) { return CMat2::from_real(a.mat()); }

}  // namespace

TEST_CASE("s_matrix") {
  CHECK(max_abs_diff(s_matrix(1.0), CMat2::identity()) < 1e-15);
  CHECK(max_abs_diff(s_matrix(std::polar(1.0, kPi / 2)), embed(SL2(Mat2{0, -1, 1, 0}))) < 1e-15);
  CHECK(max_abs_diff(s_matrix(2.0) * s_matrix(3.0), s_matrix(6.0)) < 1e-12);
  CHECK_THROWS_AS(s_matrix(0.0), InvalidInput);
  for (double t : {0.1, 1.7, 4.0}) {
    CHECK(max_abs_diff(s_matrix(std::polar(1.0, t)), embed(rotation(t))) < 1e-15);
  }
}

TEST_CASE("s_matrix group law on random points") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const cplx z = std::polar(sl2test::uniform(rng, 0.3, 3.0), sl2test::uniform(rng, 0, 7));
    const cplx w = std::polar(sl2test::uniform(rng, 0.3, 3.0), sl2test::uniform(rng, 0, 7));
    CHECK(max_abs_diff(s_matrix(z) * s_matrix(w), s_matrix(z * w)) < 1e-12);
  }
}

TEST_CASE("t_matrix") {
  const CMat2 t0 = t_matrix(0.0);
  CHECK(max_abs_diff(t0, CMat2{0.5, -0.5 * I, 0.5 * I, 0.5}) < 1e-16);
  for (double th : {0.9, 2.3}) {
    const CMat2 left = embed(rotation(th)) * t0;
    const CMat2 right = t0 * embed(rotation(th));
    CHECK(max_abs_diff(left, std::polar(1.0, -th) * t0) < 1e-12);
    CHECK(max_abs_diff(right, std::polar(1.0, -th) * t0) < 1e-12);
  }
  const cplx z{0.5, 0.1}, w{0.0, -0.3};
  CHECK(max_abs_diff(t_matrix(z) * t_matrix(w), t_matrix(z * w)) < 1e-12);
  CHECK(std::abs(t_matrix(z).det() - z * z) < 1e-12);
  CHECK(max_abs_diff(t_matrix(z), z * s_matrix(z)) < 1e-12);
}

TEST_CASE("c_matrix") {
  const std::vector<SL2> id{SL2::identity()};
  CHECK(max_abs_diff(c_matrix(id, 1.0), CMat2::identity()) < 1e-15);
  const std::vector<SL2> h23{diag_hyperbolic(2.0), diag_hyperbolic(3.0)};
  const cplx z{0.4, 0.2};
  CHECK(std::abs(c_matrix(h23, z).det() - std::pow(z, 4)) < 1e-10);
  const auto e = eigen2(c_matrix(h23, 0.0));
  CHECK(std::abs(e.lambda1 - 25.0 / 12.0) < 1e-12);
  CHECK(std::abs(e.lambda2) < 1e-12);
  CHECK_THROWS_AS(c_matrix({}, 0.5), InvalidInput);
}

TEST_CASE("c_matrix determinant on random inputs") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    const auto as = sl2test::random_list(rng, 4, 10.0);
    const cplx z = std::polar(sl2test::uniform(rng, 0.1, 1.0), sl2test::uniform(rng, 0, 7));
    const cplx expected = std::pow(z, 2 * static_cast<int>(as.size()));
    const CMat2 c = c_matrix(as, z);
    // a11 a22 - a12 a21 cancels down to |z|^{2n}; the rounding floor scales
    // with the squared entry size.
    const double entries = std::norm(c.a11) + std::norm(c.a12) + std::norm(c.a21) + std::norm(c.a22);
    CHECK(std::abs(c.det() - expected) <= 1e-9 * std::abs(expected) + 1e-14 * entries);
    if (std::abs(z) >= 0.9) CHECK(std::abs(c.det() - expected) <= 1e-9 * std::abs(expected));
  }
}

TEST_CASE("eigen2") {
  auto e = eigen2(CMat2::identity());
  CHECK(std::abs(e.lambda1 - 1.0) < 1e-15);
  CHECK(std::abs(e.lambda2 - 1.0) < 1e-15);
  e = eigen2(embed(diag_hyperbolic(2.0)));
  CHECK(std::abs(e.lambda1 - 2.0) < 1e-15);
  CHECK(std::abs(e.lambda2 - 0.5) < 1e-15);
  e = eigen2(embed(SL2(Mat2{0, -1, 1, 0})));
  // Equal moduli: ordered by argument, i (pi/2) before -i (3pi/2).
  CHECK(std::abs(e.lambda1 - I) < 1e-15);
  CHECK(std::abs(e.lambda2 + I) < 1e-15);
}

TEST_CASE("eigen2 invariants") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    CMat2 c;
    c.a11 = {sl2test::uniform(rng, -5, 5), sl2test::uniform(rng, -5, 5)};
    c.a12 = {sl2test::uniform(rng, -5, 5), sl2test::uniform(rng, -5, 5)};
    c.a21 = {sl2test::uniform(rng, -5, 5), sl2test::uniform(rng, -5, 5)};
    c.a22 = {sl2test::uniform(rng, -5, 5), sl2test::uniform(rng, -5, 5)};
    const auto e = eigen2(c);
    CHECK(std::abs(e.lambda1) >= std::abs(e.lambda2));
    CHECK(std::abs(e.lambda1 * e.lambda2 - c.det()) < 1e-9);
    CHECK(std::abs(e.lambda1 + e.lambda2 - c.trace()) < 1e-9);
  }
}

TEST_CASE("equal_modulus") {
  CHECK(equal_modulus(embed(rotation(kPi / 3))));
  CHECK_FALSE(equal_modulus(embed(diag_hyperbolic(2.0))));
  const std::vector<SL2> h2{diag_hyperbolic(2.0)};
  const CMat2 c = c_matrix(h2, 0.5);
  const auto e = eigen2(c);
  CHECK_FALSE(equal_modulus(c));
  CHECK(std::abs(e.lambda1) > std::abs(e.lambda2));
  CHECK_THROWS_AS(equal_modulus(c_matrix(h2, 0.0)), SingularMatrix);
  // Parabolic: u = 1 exactly, on the boundary of the interval.
  CHECK(equal_modulus(embed(SL2(Mat2{1, 1, 0, 1}))));
}

TEST_CASE("equal_modulus agrees with eigen2 moduli") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 300; ++i) {
    const auto as = sl2test::random_list(rng, 3, 5.0);
    const cplx z = std::polar(sl2test::uniform(rng, 0.2, 1.0), sl2test::uniform(rng, 0, 7));
    const CMat2 c = c_matrix(as, z);
    const auto e = eigen2(c);
    const double m1 = std::abs(e.lambda1), m2 = std::abs(e.lambda2);
    if (std::abs(m1 - m2) > 1e-6 * m1) CHECK(equal_modulus(c) == false);
  }
}

TEST_CASE("centro_check") {
  const std::vector<SL2> h2{diag_hyperbolic(2.0)};
  auto [small, gap] = centro_check(h2);
  CHECK(small < 1e-12);
  CHECK(std::abs(gap) < 1e-12);
  CHECK(std::abs(eigen2(c_matrix(h2, 0.0)).lambda1 - 1.25) < 1e-12);

  const std::vector<SL2> tilted{rotation(0.7) * diag_hyperbolic(2.0) * rotation(1.1)};
  CHECK(std::abs(std::abs(eigen2(c_matrix(tilted, 0.0)).lambda1) - 1.25) < 1e-12);

  std::mt19937_64 rng(25);
  for (int i = 0; i < 200; ++i) {
    const auto as = sl2test::random_list(rng, 4, 10.0);
    std::tie(small, gap) = centro_check(as);
    CHECK(small <= 1e-8);
    CHECK(std::abs(gap) <= 1e-8);
  }
  // With norms up to 1e3 the large eigenvalue reaches ~1e11, where double
  // spacing alone exceeds 1e-8; the residual is checked relative to it.
  for (int i = 0; i < 200; ++i) {
    const auto as = sl2test::random_list(rng, 4, 1e3);
    double expected = 1.0;
    for (const auto& a : as) expected *= (operator_norm(a) + 1.0 / operator_norm(a)) / 2.0;
    std::tie(small, gap) = centro_check(as);
    CHECK(small <= 1e-8);
    CHECK(std::abs(gap) <= 1e-13 * expected);
  }
}

TEST_CASE("on the unit circle C_z has the spectral radius of the rotated product") {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 200; ++i) {
    const auto as = sl2test::random_list(rng, 4, 5.0);
    const double theta = sl2test::uniform(rng, 0, 2 * kPi);
    const auto e = eigen2(c_matrix(as, std::polar(1.0, theta)));
    const double rho = std::exp(rotated_product(as, theta).log_spectral_radius());
    CHECK(std::abs(std::abs(e.lambda1) - rho) <= 1e-9 * rho);
  }
}

TEST_CASE("log rho(C_z) has the mean-value property on the circle") {
  const std::vector<SL2> as{diag_hyperbolic(2.0), rotation(0.4) * diag_hyperbolic(3.0)};
  const double centre = std::log(std::abs(eigen2(c_matrix(as, 0.0)).lambda1));
  QuadratureSpec q;
  q.max_grid = 1 << 12;
  const auto r = periodic_average(
      [&](double t) { return std::log(std::abs(eigen2(c_matrix(as, std::polar(1.0, t))).lambda1)); },
      q);
  CHECK(std::abs(r.value - centre) < 1e-4);
  CHECK(std::abs(centre - sum_n_values(as)) < 1e-12);
}

TEST_CASE("separation inside the disk") {
  const std::vector<SL2> h2{diag_hyperbolic(2.0)};
  const auto s = separation_sample(h2, {0.3, 0.4});
  CHECK(s.separated);
  CHECK(s.modulus1 > s.modulus2);

  const auto rep = autoval_sample(3, 1000);
  CHECK(rep.samples == 1000);
  CHECK(rep.separated == 1000);
  CHECK(rep.min_relative_gap > 0.0);
  CHECK(std::abs(rep.worst_z) <= 0.9);

  const auto again = autoval_sample(3, 1000);
  CHECK(again.min_relative_gap == rep.min_relative_gap);
}
