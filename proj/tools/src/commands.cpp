#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <ostream>

#include "fields.hpp"
#include "sl2lab/cli.hpp"
#include "sl2lab/complexify.hpp"
#include "sl2lab/error.hpp"
#include "sl2lab/formulas.hpp"
#include "sl2lab/json_io.hpp"
#include "sl2lab/version.hpp"

namespace sl2lab::cli {
namespace {

using detail::int_field;
using detail::real_field;
using detail::require_fields;
using detail::u64_field;

// Points in the plot-ready integrand CSV.
constexpr std::size_t kCsvGrid = 1024;

const double kLog2Half = 0.5 * std::log(2.0);

using Builder = Prepared (*)(json& cfg);

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

QuadratureSpec with_threads(QuadratureSpec q, unsigned threads) {
  q.threads = threads;
  return q;
}

std::function<void(std::ostream&)> integrand_csv(PeriodicFunction f, QuadratureSpec q,
                                                 unsigned threads) {
  return [f = std::move(f), q, threads](std::ostream& os) {
    const std::size_t m = std::min(q.max_grid, kCsvGrid);
    write_grid_csv(os, grid_values(f, m, threads));
  };
}

json formula_results(const FormulaReport& r, double tolerance) {
  json j = r;
  j["tolerance"] = tolerance;
  return j;
}

bool formula_pass(const FormulaReport& r, double tolerance) {
  return r.quadrature.converged && r.abs_error <= tolerance;
}

// Reference exponent for the built-in maps, when one is known in closed form.
std::optional<double> reference_exponent(const CocycleSpec& spec) {
  if (const auto* h = std::get_if<HermanMap>(&spec.map)) {
    return std::log((h->c + 1.0 / h->c) / 2.0);
  }
  if (std::holds_alternative<BernoulliHIR>(spec.map)) return kLog2Half;
  if (const auto* c = std::get_if<ConstantMap>(&spec.map)) {
    return std::log(spectral_radius(c->a));
  }
  return std::nullopt;
}

Prepared theorem_command(json& cfg, const char* name, double default_tol, bool kinks) {
  require_fields(cfg, {"matrices", "quadrature", "tolerance"}, name);
  const auto as = detail::matrices_field(cfg);
  const auto q = detail::quadrature_field(cfg, QuadratureSpec{});
  const double tol = real_field(cfg, "tolerance", default_tol);
  Prepared p;
  p.plan = std::string(kinks ? "kink-resolved average of log rho(B_theta)"
                             : "periodic average of log |B_theta|") +
           " for " + std::to_string(as.size()) + " matrices, grid up to " +
           std::to_string(q.max_grid);
  p.has_csv = true;
  p.execute = [as, q, tol, kinks](unsigned threads) {
    const auto spec = with_threads(q, threads);
    const auto r = kinks ? theorem2_check(as, spec) : theorem1_check(as, spec);
    Outcome o{formula_results(r, tol), formula_pass(r, tol), {}};
    o.csv = integrand_csv(kinks ? theorem2_integrand(as) : theorem1_integrand(as), q, threads);
    return o;
  };
  return p;
}

Prepared verify_theorem1(json& cfg) {
  return theorem_command(cfg, "verify-theorem1", kTheorem1Tolerance, false);
}

Prepared verify_theorem2(json& cfg) {
  return theorem_command(cfg, "verify-theorem2", kTheorem2Tolerance, true);
}

Prepared avg_expansion(json& cfg) {
  require_fields(cfg, {"matrices", "quadrature", "tolerance"}, "avg-expansion");
  const auto as = detail::matrices_field(cfg);
  if (as.size() != 1) throw ConfigError("config.matrices: avg-expansion takes exactly one matrix");
  QuadratureSpec def;
  def.max_grid = std::size_t{1} << 14;
  const auto q = detail::quadrature_field(cfg, def);
  const double tol = real_field(cfg, "tolerance", 1e-8);
  const SL2 a = as.front();
  Prepared p;
  p.plan = "circle average of log |A u_theta| against N(A), grid up to " +
           std::to_string(q.max_grid);
  p.has_csv = true;
  p.execute = [a, q, tol](unsigned threads) {
    const auto r = avg_expansion_check(a, with_threads(q, threads));
    return Outcome{formula_results(r, tol), formula_pass(r, tol),
                   integrand_csv(expansion_integrand(a), q, threads)};
  };
  return p;
}

Prepared f_integral(json& cfg) {
  require_fields(cfg, {"b", "quadrature", "tolerance"}, "f-integral");
  const double b = real_field(cfg, "b", 2.0);
  if (!(b >= 1.0)) throw ConfigError("config.b: must be >= 1");
  const auto q = detail::quadrature_field(cfg, QuadratureSpec{});
  const double tol = real_field(cfg, "tolerance", 1e-8);
  Prepared p;
  p.plan = "F(b) = integral of log(b^2 cos^2 + sin^2)^(1/2) for b = " + fmt(b);
  p.has_csv = true;
  p.execute = [b, q, tol](unsigned threads) {
    const auto r = f_integral_check(b, with_threads(q, threads));
    return Outcome{formula_results(r, tol), formula_pass(r, tol),
                   integrand_csv(f_integrand(b), q, threads)};
  };
  return p;
}

Prepared measure_bound(json& cfg) {
  require_fields(cfg, {"matrices", "a", "grid"}, "measure-bound");
  const auto as = detail::matrices_field(cfg);
  const double a = real_field(cfg, "a", 1.0);
  if (!(a > 0.0)) throw ConfigError("config.a: must be > 0");
  const auto grid = u64_field(cfg, "grid", std::size_t{1} << 14);
  if (!is_power_of_two(grid) || grid > kMaxGrid) {
    throw ConfigError("config.grid: must be a power of two <= 2^24");
  }
  Prepared p;
  p.plan = "fraction of " + std::to_string(grid) + " grid angles in the large-norm set, a = " +
           fmt(a);
  p.execute = [as, a, grid](unsigned threads) {
    const auto r = measure_bound_check(as, a, grid, threads);
    json j = r;
    j["slack"] = 2.0 / static_cast<double>(grid);
    return Outcome{j, r.holds(), {}};
  };
  return p;
}

Prepared fubini(json& cfg) {
  require_fields(cfg, {"matrices", "quadrature", "tolerance"}, "fubini");
  const auto as = detail::matrices_field(cfg);
  QuadratureSpec def;
  def.max_grid = std::size_t{1} << 10;
  def.tol = 1e-7;
  const auto q = detail::quadrature_field(cfg, def);
  const double tol = real_field(cfg, "tolerance", 1e-5);
  Prepared p;
  p.plan = "double average of log rho(B_theta R_phi), outer grid up to " +
           std::to_string(q.max_grid);
  p.execute = [as, q, tol](unsigned threads) {
    const auto r = fubini_check(as, with_threads(q, threads));
    return Outcome{formula_results(r, tol), formula_pass(r, tol), {}};
  };
  return p;
}

Prepared lyapunov(json& cfg) {
  require_fields(cfg, {"cocycle", "x0", "n", "seed", "tolerance"}, "lyapunov");
  const auto spec = detail::cocycle_field(cfg);
  const auto x0 = detail::x0_field(cfg);
  const auto n = int_field(cfg, "n", 100000, 1);
  const bool bernoulli = std::holds_alternative<BernoulliShift>(spec.base);
  const double tol = real_field(cfg, "tolerance", bernoulli ? 0.02 : 0.01);
  Prepared p;
  p.plan = "(1/n) log |A^n(x0)| at n = " + std::to_string(n);
  p.execute = [spec, x0, n, tol](unsigned) {
    const auto r = lyapunov_estimate(spec, x0, n);
    json j = r;
    const auto ref = reference_exponent(spec);
    bool pass = std::isfinite(r.exponent);
    if (ref) {
      j["reference"] = *ref;
      j["abs_error"] = std::abs(r.exponent - *ref);
      j["tolerance"] = tol;
      pass = pass && std::abs(r.exponent - *ref) <= tol;
    } else {
      j["reference"] = nullptr;
    }
    return Outcome{j, pass, {}};
  };
  return p;
}

Prepared herman_equality(json& cfg) {
  require_fields(cfg, {"cocycle", "x0", "n", "quadrature", "seed", "tolerance"},
                 "herman-equality");
  const auto spec = detail::cocycle_field(cfg);
  const auto x0 = detail::x0_field(cfg);
  const auto n = int_field(cfg, "n", 10000, 1);
  QuadratureSpec def;
  def.max_grid = 256;
  def.tol = 1e-3;
  const auto q = detail::quadrature_field(cfg, def);
  const double tol = real_field(cfg, "tolerance", 0.02);
  Prepared p;
  p.plan = "rotation-averaged exponent at n = " + std::to_string(n) +
           " against the Birkhoff average of N, grid up to " + std::to_string(q.max_grid);
  p.execute = [spec, x0, n, q, tol](unsigned threads) {
    const auto r = herman_equality_check(spec, n, with_threads(q, threads), x0);
    return Outcome{formula_results(r, tol), formula_pass(r, tol), {}};
  };
  return p;
}

json growth_summary(const SpectralGrowthReport& r) {
  json j = r;
  double worst = -INFINITY;
  for (const auto& pt : r.series) worst = std::max(worst, pt.inv_n_log_rho - pt.inv_n_log_norm);
  j["max_rho_minus_norm"] = worst;
  return j;
}

bool rho_below_norm(const SpectralGrowthReport& r) {
  return std::all_of(r.series.begin(), r.series.end(), [](const SpectralGrowthPoint& pt) {
    return pt.inv_n_log_rho <= pt.inv_n_log_norm + 1e-9;
  });
}

Prepared spectral_growth_cmd(json& cfg) {
  require_fields(cfg, {"cocycle", "x0", "n_max", "seed", "tolerance"}, "spectral-growth");
  const auto spec = detail::cocycle_field(cfg);
  const auto x0 = detail::x0_field(cfg);
  const auto n_max = int_field(cfg, "n_max", 10000, 1);
  const double tol = real_field(cfg, "tolerance", 0.03);
  Prepared p;
  p.plan = "(1/n) log rho(A^n(x0)) for n = 1.." + std::to_string(n_max);
  p.has_csv = true;
  p.execute = [spec, x0, n_max, tol](unsigned) {
    auto r = std::make_shared<SpectralGrowthReport>(spectral_growth(spec, x0, n_max));
    const double norm_exponent = r->series.back().inv_n_log_norm;
    json j = growth_summary(*r);
    j["norm_exponent"] = norm_exponent;
    j["abs_error"] = std::abs(r->running_max - norm_exponent);
    j["tolerance"] = tol;
    const bool pass = rho_below_norm(*r) && std::abs(r->running_max - norm_exponent) <= tol;
    return Outcome{j, pass, [r](std::ostream& os) { write_spectral_growth_csv(os, *r); }};
  };
  return p;
}

Prepared bernoulli(json& cfg) {
  require_fields(cfg, {"seed", "seeds", "n", "n_max", "tolerance"}, "bernoulli");
  const auto seed = u64_field(cfg, "seed", 0);
  const auto seeds = int_field(cfg, "seeds", 10, 1);
  const auto n = int_field(cfg, "n", 100000, 1);
  const auto n_max = int_field(cfg, "n_max", 10000, 1);
  const double tol = real_field(cfg, "tolerance", 0.02);
  Prepared p;
  p.plan = "H/I/R cocycle over the Bernoulli shift: exponent at n = " + std::to_string(n) +
           " over " + std::to_string(seeds) + " seeds, spectral growth to n_max = " +
           std::to_string(n_max);
  p.has_csv = true;
  p.execute = [seed, seeds, n, n_max, tol](unsigned) {
    auto spec_for = [](std::uint64_t s) { return CocycleSpec{BernoulliShift{s}, BernoulliHIR{}}; };
    json exponents = json::array();
    double sum = 0.0;
    for (std::int64_t k = 0; k < seeds; ++k) {
      const double e = lyapunov_estimate(spec_for(seed + static_cast<std::uint64_t>(k)), {}, n)
                           .exponent;
      exponents.push_back(e);
      sum += e;
    }
    const double mean = sum / static_cast<double>(seeds);
    auto r = std::make_shared<SpectralGrowthReport>(spectral_growth(spec_for(seed), {}, n_max));
    json j;
    j["exponents"] = exponents;
    j["lambda_est"] = mean;
    j["reference"] = kLog2Half;
    j["abs_error"] = std::abs(mean - kLog2Half);
    j["tolerance"] = tol;
    j["spectral_growth"] = growth_summary(*r);
    const bool pass =
        std::abs(mean - kLog2Half) <= tol && r->rho_one_count > 0 && rho_below_norm(*r);
    return Outcome{j, pass, [r](std::ostream& os) { write_spectral_growth_csv(os, *r); }};
  };
  return p;
}

Prepared star_probe(json& cfg) {
  require_fields(cfg, {"n"}, "star-probe");
  const auto n = int_field(cfg, "n", 20, 1);
  if (n > kStarProbeMaxN) {
    throw ConfigError("config.n: exact enumeration is limited to n <= " +
                      std::to_string(kStarProbeMaxN));
  }
  Prepared p;
  p.plan = "exact enumeration of (1/k) E[log rho(A^k)] for k = 1.." + std::to_string(n);
  p.has_csv = true;
  p.execute = [n](unsigned) {
    struct Row {
      int k;
      double rho, norm;
    };
    auto rows = std::make_shared<std::vector<Row>>();
    json values = json::array();
    bool all_below = true;
    for (int k = 1; k <= static_cast<int>(n); ++k) {
      const auto [rho, ref] = star_identity_probe(k);
      const double norm = star_norm_average(k);
      rows->push_back({k, rho, norm});
      values.push_back({{"n", k}, {"inv_n_log_rho", rho}, {"inv_n_log_norm", norm}});
      all_below = all_below && rho < ref;
    }
    json j;
    j["values"] = values;
    j["reference"] = kLog2Half;
    j["all_strictly_below"] = all_below;
    return Outcome{j, all_below, [rows](std::ostream& os) {
                     os << "n,inv_n_log_rho,inv_n_log_norm\n";
                     for (const auto& r : *rows) {
                       os << r.k << ',' << fmt(r.rho) << ',' << fmt(r.norm) << '\n';
                     }
                   }};
  };
  return p;
}

Prepared dedieu_shub(json& cfg) {
  require_fields(cfg, {"law", "samples", "n", "seed", "tolerance"}, "dedieu-shub");
  const auto law = detail::law_field(cfg);
  const auto samples = int_field(cfg, "samples", 100000, 1000);
  const auto n = int_field(cfg, "n", 10000, 1000);
  const double tol = real_field(cfg, "tolerance", 0.01);
  Prepared p;
  p.plan = std::to_string(samples) + " samples and " + std::to_string(kBatchCount) +
           " product runs of " + std::to_string(n) + " steps";
  p.has_csv = true;
  p.execute = [law, samples, n, tol](unsigned threads) {
    auto r = std::make_shared<DedieuShubReport>(dedieu_shub_check(law, samples, n, threads));
    json j = *r;
    bool pass = r->consistent(3.0);
    if (const auto* c = std::get_if<ConstantC>(&law.c_distribution)) {
      const double ref = std::log((c->c + 1.0 / c->c) / 2.0);
      const double worst = std::max({std::abs(r->lambda_est - ref),
                                     std::abs(r->int_log_rho_est - ref),
                                     std::abs(r->int_N_est - ref),
                                     std::abs(r->furstenberg_est - ref)});
      j["reference"] = ref;
      j["abs_error"] = worst;
      j["tolerance"] = tol;
      pass = pass && worst <= tol;
    }
    return Outcome{j, pass, [r](std::ostream& os) { write_run_exponents_csv(os, *r); }};
  };
  return p;
}

Prepared centro(json& cfg) {
  require_fields(cfg, {"matrices", "tolerance"}, "centro-check");
  const auto as = detail::matrices_field(cfg);
  const double tol = real_field(cfg, "tolerance", 1e-8);
  Prepared p;
  p.plan = "eigenvalues of C_0 for " + std::to_string(as.size()) + " matrices";
  p.execute = [as, tol](unsigned) {
    double expected = 1.0;
    for (const auto& a : as) {
      const double c = operator_norm(a);
      expected *= (c + 1.0 / c) / 2.0;
    }
    const auto [small, gap] = centro_check(as);
    json j;
    j["eigenvalues"] = eigen2(c_matrix(as, cplx{0.0}));
    j["expected_lambda1"] = expected;
    j["abs_lambda2"] = small;
    j["lambda1_error"] = gap;
    j["tolerance"] = tol;
    return Outcome{j, small <= tol && std::abs(gap) <= tol * std::max(1.0, expected), {}};
  };
  return p;
}

Prepared autoval(json& cfg) {
  require_fields(cfg, {"seed", "samples"}, "autoval-sample");
  const auto seed = u64_field(cfg, "seed", 0);
  const auto samples = int_field(cfg, "samples", 1000, 1);
  Prepared p;
  p.plan = std::to_string(samples) + " random (matrices, z) with |z| <= 0.9";
  p.execute = [seed, samples](unsigned) {
    const auto r = autoval_sample(seed, static_cast<std::size_t>(samples));
    return Outcome{json(r), r.separated == r.samples, {}};
  };
  return p;
}

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> table = {
      {"verify-theorem1", verify_theorem1},
      {"verify-theorem2", verify_theorem2},
      {"avg-expansion", avg_expansion},
      {"f-integral", f_integral},
      {"measure-bound", measure_bound},
      {"fubini", fubini},
      {"lyapunov", lyapunov},
      {"herman-equality", herman_equality},
      {"bernoulli", bernoulli},
      {"star-probe", star_probe},
      {"dedieu-shub", dedieu_shub},
      {"spectral-growth", spectral_growth_cmd},
      {"centro-check", centro},
      {"autoval-sample", autoval},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

Prepared prepare(const std::string& command, json config) {
  const auto& table = registry();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const auto& e) { return e.first == command; });
  if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
  if (config.is_null()) config = json::object();
  try {
    Prepared p = it->second(config);
    p.command = command;
    p.config = std::move(config);
    return p;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  } catch (const ResourceError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json make_report(const Prepared& p, const Outcome& o) {
  return {{"command", p.command},
          {"config", p.config},
          {"results", o.results},
          {"verdict", o.pass ? "PASS" : "FAIL"},
          {"version", kVersion}};
}

}  // namespace sl2lab::cli
