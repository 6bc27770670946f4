// Acceptance run: one PASS/FAIL line per criterion, details after the
// colon. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sl2lab/cli.hpp"
#include "sl2lab/cocycles.hpp"
#include "sl2lab/complexify.hpp"
#include "sl2lab/formulas.hpp"
#include "sl2lab/randprod.hpp"
#include "test_support.hpp"

using namespace sl2lab;

namespace {

const double kLog54 = std::log(1.25);
const double kLog2Half = 0.5 * std::log(2.0);

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<std::vector<SL2>> instances(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<SL2>> out;
  for (int i = 0; i < count; ++i) out.push_back(sl2test::random_list(rng, 4, 10.0));
  return out;
}

Verdict criterion1() {
  double worst = 0.0;
  std::size_t grid = 0;
  for (const auto& as : instances(101, 100)) {
    const auto r = theorem1_check(as, {});
    worst = std::max(worst, r.abs_error);
    grid = std::max(grid, r.quadrature.grid_used);
  }
  const std::vector<SL2> h23{diag_hyperbolic(2.0), diag_hyperbolic(3.0)};
  const double named = std::abs(theorem1_check(h23, {}).lhs - std::log(25.0 / 12.0));
  return {worst <= 1e-6 && grid <= (1u << 18) && named <= 1e-8,
          "worst |lhs - sum N| " + fmt("%.2e", worst) + " (<= 1e-6), largest grid " +
              std::to_string(grid) + "; [H_2,H_3] error " + fmt("%.2e", named) + " (<= 1e-8)"};
}

Verdict criterion2() {
  double worst = 0.0, worst_cross = 0.0;
  std::size_t evals = 0;
  bool converged = true;
  for (const auto& as : instances(101, 100)) {
    const auto r2 = theorem2_check(as, {});
    const auto r1 = theorem1_check(as, {});
    worst = std::max(worst, r2.abs_error);
    worst_cross = std::max(worst_cross, std::abs(r1.lhs - r2.lhs));
    evals = std::max(evals, r2.quadrature.grid_used);
    converged = converged && r2.quadrature.converged;
  }
  return {worst <= 1e-6 && worst_cross <= 2e-6 && evals <= (1u << 18) && converged,
          "worst |lhs - sum N| " + fmt("%.2e", worst) + " (<= 1e-6), most evaluations " +
              std::to_string(evals) + "; |lhs1 - lhs2| " + fmt("%.2e", worst_cross) +
              " (<= 2e-6)"};
}

Verdict criterion3() {
  QuadratureSpec q;
  q.max_grid = 1 << 14;
  std::mt19937_64 rng(303);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    worst = std::max(worst, avg_expansion_check(sl2test::random_sl2(rng, 10.0), q).abs_error);
  }
  double worst_f = 0.0;
  for (double b : {1.0, 1.5, 2.0, 10.0, 100.0}) {
    worst_f = std::max(worst_f, f_integral_check(b, {}).abs_error);
  }
  return {worst <= 1e-8 && worst_f <= 1e-8,
          "expansion average worst " + fmt("%.2e", worst) + ", F(b) worst " +
              fmt("%.2e", worst_f) + " (both <= 1e-8)"};
}

Verdict criterion4() {
  std::mt19937_64 rng(404);
  const std::size_t grid = 1 << 14;
  int failures = 0;
  double min_margin = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const auto as = sl2test::random_list(rng, 4, 10.0);
    const double a = sl2test::uniform(rng, std::log(2.0), 10.0);
    const auto r = measure_bound_check(as, a, grid);
    min_margin = std::min(min_margin, r.nu_estimate - (r.lower_bound - 2.0 / grid));
    if (!r.holds()) ++failures;
  }
  return {failures == 0, std::to_string(failures) + "/1000 violations, smallest margin " +
                             fmt("%.4f", min_margin)};
}

Verdict criterion5() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto as = sl2test::random_list(rng, 4, 10.0);
    const auto [small, gap] = centro_check(as);
    worst = std::max({worst, small, std::abs(gap)});
  }
  const auto sep = autoval_sample(505, 1000, 0.9);
  return {worst <= 1e-8 && sep.separated == sep.samples,
          "centre eigenvalue worst residual " + fmt("%.2e", worst) + " (<= 1e-8); " +
              std::to_string(sep.separated) + "/" + std::to_string(sep.samples) +
              " disk samples separated, min relative gap " + fmt("%.3f", sep.min_relative_gap)};
}

Verdict criterion6() {
  const CocycleSpec herman{CircleRotation{}, HermanMap{2.0}};
  const double e = lyapunov_estimate(herman, {}, 100000).exponent;
  QuadratureSpec q;
  q.max_grid = 1 << 8;
  q.tol = 1e-3;
  const auto r = herman_equality_check(herman, 10000, q);
  return {std::abs(e - kLog54) <= 0.01 && r.abs_error <= 0.02,
          "exponent " + fmt("%.5f", e) + " vs log(5/4) " + fmt("%.5f", kLog54) +
              " (<= 0.01); equality check abs_error " + fmt("%.2e", r.abs_error) + " (<= 0.02)"};
}

Verdict criterion7() {
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    sum += lyapunov_estimate({BernoulliShift{s}, BernoulliHIR{}}, {}, 100000).exponent;
  }
  const double lambda = sum / 10;
  const bool lambda_ok = std::abs(lambda - kLog2Half) <= 0.02;

  const CocycleSpec spec{BernoulliShift{0}, BernoulliHIR{}};
  const auto c4 = spectral_growth(spec, {}, 10000).rho_one_count;
  const auto c3 = spectral_growth(spec, {}, 1000).rho_one_count;
  const bool count_ok = c4 >= 100 && c4 > c3;

  int below = 0;
  std::string offenders;
  for (int n = 1; n <= 20; ++n) {
    const auto [value, reference] = star_identity_probe(n);
    if (value < reference) {
      ++below;
    } else {
      offenders += (offenders.empty() ? "" : ",") + std::to_string(n);
    }
  }
  const bool star_ok = below == 20;
  std::string detail = "lambda " + fmt("%.5f", lambda) + " vs log2/2 (<= 0.02) " +
                       (lambda_ok ? "ok" : "FAIL") + "; rho=1 count " + std::to_string(c3) +
                       " -> " + std::to_string(c4) + " " + (count_ok ? "ok" : "FAIL") +
                       "; star probe strictly below log2/2 for " + std::to_string(below) +
                       "/20 horizons";
  if (!star_ok) detail += " (not below at n=" + offenders + ")";
  return {lambda_ok && count_ok && star_ok, detail};
}

Verdict criterion8() {
  const auto c = dedieu_shub_check({ConstantC{2.0}, 8}, 100000, 10000, 4);
  const double worst = std::max({std::abs(c.lambda_est - kLog54), std::abs(c.int_log_rho_est - kLog54),
                                 std::abs(c.int_N_est - kLog54), std::abs(c.furstenberg_est - kLog54)});
  const auto lu = dedieu_shub_check({LogUniformC{1.0, 4.0}, 8}, 100000, 10000, 4);
  return {worst <= 0.01 && lu.consistent(3.0),
          "constant(2) worst deviation " + fmt("%.4f", worst) +
              " (<= 0.01); log_uniform(1,4) max pairwise " + fmt("%.2f", lu.max_pairwise_sigma()) +
              " sigma (<= 3)"};
}

Verdict criterion9() {
  const CocycleSpec herman{CircleRotation{}, HermanMap{2.0}};
  const auto r = spectral_growth(herman, {}, 10000);
  const double norm_exponent = r.series.back().inv_n_log_norm;
  bool below = true;
  for (const auto& p : r.series) below = below && p.inv_n_log_rho <= p.inv_n_log_norm + 1e-9;
  const double gap = std::abs(r.running_max - norm_exponent);
  return {gap <= 0.03 && below,
          "running max " + fmt("%.5f", r.running_max) + " vs norm exponent " +
              fmt("%.5f", norm_exponent) + " (<= 0.03); rho series below norm series: " +
              (below ? "yes" : "no")};
}

Verdict criterion10() {
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string mats = dir + "/sl2lab_acceptance_mats.json";
  std::ofstream(mats) << R"({"matrices": [[[2, 1], [1, 1]], [[3, 0], [0, 0.3333333333333333]]]})";
  const std::string one = dir + "/sl2lab_acceptance_one.json";
  std::ofstream(one) << R"({"matrices": [[[2, 1], [1, 1]]]})";

  const std::vector<std::vector<std::string>> runs = {
      {"verify-theorem1", "--config", mats},
      {"verify-theorem2", "--config", mats},
      {"avg-expansion", "--config", one},
      {"f-integral", "--b", "3"},
      {"measure-bound", "--config", mats, "--grid", "4096"},
      {"fubini", "--config", one, "--grid", "256"},
      {"lyapunov", "--n", "20000"},
      {"herman-equality", "--n", "2000"},
      {"bernoulli", "--n", "20000", "--n-max", "5000", "--seeds", "3", "--seed", "11"},
      {"star-probe", "--n", "12"},
      {"dedieu-shub", "--samples", "20000", "--n", "2000", "--seed", "5"},
      {"spectral-growth", "--n-max", "5000"},
      {"centro-check", "--config", mats},
      {"autoval-sample", "--samples", "300", "--seed", "9"},
  };
  int identical = 0;
  std::string broken;
  for (const auto& args : runs) {
    auto run = [&](const std::string& threads) {
      auto a = args;
      a.insert(a.end(), {"--threads", threads});
      std::ostringstream out, err;
      sl2lab::cli::run(a, out, err);
      return out.str();
    };
    const std::string first = run("1");
    const bool same = !first.empty() && first == run("1") && first == run("4");
    if (same) {
      ++identical;
    } else {
      broken += " " + args.front();
    }
  }
  return {identical == static_cast<int>(runs.size()),
          std::to_string(identical) + "/" + std::to_string(runs.size()) +
              " subcommands byte-identical across repeats and --threads 1/4" + broken};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"1 N-average identity", criterion1},
      {"2 log rho-average identity", criterion2},
      {"3 average expansion and F(b)", criterion3},
      {"4 measure bound", criterion4},
      {"5 centre eigenvalues and separation", criterion5},
      {"6 Herman exponent and equality", criterion6},
      {"7 Bernoulli example", criterion7},
      {"8 Dedieu-Shub chain", criterion8},
      {"9 spectral growth", criterion9},
      {"10 determinism", criterion10},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = check();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
