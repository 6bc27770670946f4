#include "sl2lab/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sl2lab/error.hpp"

namespace sl2lab {
namespace {

double number_at(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
  return v.get<double>();
}

std::uint64_t u64_at(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(ctx + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string type_at(const json& j, const std::string& ctx) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError(ctx + ": expected an object with a string 'type'");
  }
  return j.at("type").get<std::string>();
}

}  // namespace

void require_keys_within(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* a) { return key == a; });
    if (!ok) throw ConfigError(context + ": unknown field '" + key + "'");
  }
}

void to_json(json& j, const Mat2& m) {
  j = json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})});
}

void from_json(const json& j, Mat2& m) {
  auto row_ok = [](const json& r) {
    return r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number();
  };
  if (!j.is_array() || j.size() != 2 || !row_ok(j[0]) || !row_ok(j[1])) {
    throw ConfigError("matrix: expected [[a11, a12], [a21, a22]]");
  }
  m = {j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(),
       j[1][1].get<double>()};
  if (!m.is_finite()) throw ConfigError("matrix: entries must be finite");
}

void to_json(json& j, const SL2& a) { to_json(j, a.mat()); }

void from_json(const json& j, SL2& a) {
  Mat2 m;
  from_json(j, m);
  try {
    a = SL2(m);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("matrix: ") + e.what());
  }
}

void to_json(json& j, const PolarForm& p) {
  j = {{"beta", p.beta}, {"c", p.c}, {"alpha", p.alpha}};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("complex: expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void to_json(json& j, const EigenPair& e) {
  j = {{"lambda1", complex_to_json(e.lambda1)}, {"lambda2", complex_to_json(e.lambda2)}};
}

void to_json(json& j, const SeparationReport& r) {
  j = {{"samples", r.samples},
       {"separated", r.separated},
       {"min_relative_gap", r.min_relative_gap},
       {"worst_z", complex_to_json(r.worst_z)}};
}

void to_json(json& j, const QuadratureSpec& q) {
  j = {{"initial_grid", q.initial_grid}, {"max_grid", q.max_grid}, {"tol", q.tol}};
}

void merge_quadrature(const json& j, QuadratureSpec& q) {
  require_keys_within(j, {"initial_grid", "max_grid", "tol"}, "quadrature");
  if (j.contains("initial_grid")) q.initial_grid = u64_at(j, "initial_grid", "quadrature");
  if (j.contains("max_grid")) q.max_grid = u64_at(j, "max_grid", "quadrature");
  if (j.contains("tol")) q.tol = number_at(j, "tol", "quadrature");
}

void to_json(json& j, const IntegralEstimate& e) {
  j = {{"value", e.value},
       {"est_error", e.est_error},
       {"grid_used", e.grid_used},
       {"converged", e.converged}};
}

void to_json(json& j, const FormulaReport& r) {
  j = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"abs_error", r.abs_error}, {"quadrature", r.quadrature}};
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
}

void to_json(json& j, const MeasureBoundReport& r) {
  j = {{"a", r.a},
       {"nu_estimate", r.nu_estimate},
       {"lower_bound", r.lower_bound},
       {"grid", r.grid}};
}

void to_json(json& j, const CocycleSpec& s) {
  json base;
  if (const auto* c = std::get_if<CircleRotation>(&s.base)) {
    base = {{"type", "circle_rotation"}, {"alpha", c->alpha}};
  } else {
    base = {{"type", "bernoulli_shift"}, {"seed", std::get<BernoulliShift>(s.base).seed}};
  }
  json map;
  if (const auto* h = std::get_if<HermanMap>(&s.map)) {
    map = {{"type", "herman"}, {"c", h->c}};
  } else if (std::holds_alternative<BernoulliHIR>(s.map)) {
    map = {{"type", "bernoulli_HIR"}};
  } else if (const auto* k = std::get_if<ConstantMap>(&s.map)) {
    map = {{"type", "constant"}, {"matrix", k->a}};
  } else {
    map = {{"type", "table"}, {"matrices", std::get<TableMap>(s.map).table}};
  }
  j = {{"base", base}, {"map", map}};
}

void from_json(const json& j, CocycleSpec& s) {
  require_keys_within(j, {"base", "map"}, "cocycle");
  if (!j.contains("base") || !j.contains("map")) {
    throw ConfigError("cocycle: both 'base' and 'map' are required");
  }
  const json& base = j.at("base");
  const std::string bt = type_at(base, "cocycle.base");
  if (bt == "circle_rotation") {
    require_keys_within(base, {"type", "alpha"}, "cocycle.base");
    CircleRotation c;
    if (base.contains("alpha")) c.alpha = number_at(base, "alpha", "cocycle.base");
    s.base = c;
  } else if (bt == "bernoulli_shift") {
    require_keys_within(base, {"type", "seed"}, "cocycle.base");
    BernoulliShift b;
    if (base.contains("seed")) b.seed = u64_at(base, "seed", "cocycle.base");
    s.base = b;
  } else {
    throw ConfigError("cocycle.base.type: unknown base '" + bt + "'");
  }

  const json& map = j.at("map");
  const std::string mt = type_at(map, "cocycle.map");
  if (mt == "herman") {
    require_keys_within(map, {"type", "c"}, "cocycle.map");
    HermanMap h;
    if (map.contains("c")) h.c = number_at(map, "c", "cocycle.map");
    s.map = h;
  } else if (mt == "bernoulli_HIR") {
    require_keys_within(map, {"type"}, "cocycle.map");
    s.map = BernoulliHIR{};
  } else if (mt == "constant") {
    require_keys_within(map, {"type", "matrix"}, "cocycle.map");
    if (!map.contains("matrix")) throw ConfigError("cocycle.map: missing field 'matrix'");
    s.map = ConstantMap{map.at("matrix").get<SL2>()};
  } else if (mt == "table") {
    require_keys_within(map, {"type", "matrices"}, "cocycle.map");
    if (!map.contains("matrices") || !map.at("matrices").is_array()) {
      throw ConfigError("cocycle.map: 'matrices' must be an array");
    }
    s.map = TableMap{map.at("matrices").get<std::vector<SL2>>()};
  } else {
    throw ConfigError("cocycle.map.type: unknown map '" + mt + "'");
  }
  s.validate();
}

void to_json(json& j, const BasePoint& x) {
  j = {{"phase", x.phase}, {"offset", x.offset}};
}

void to_json(json& j, const LyapunovReport& r) {
  j = {{"n", r.n}, {"exponent", r.exponent}, {"x0", r.x0}, {"renorm_count", r.renorm_count}};
}

void to_json(json& j, const SpectralGrowthReport& r) {
  const auto n_max = r.series.empty() ? std::int64_t{0} : r.series.back().n;
  j = {{"n_max", n_max},
       {"tail_start", r.tail_start},
       {"running_max", r.running_max},
       {"rho_one_count", r.rho_one_count}};
  if (!r.series.empty()) j["final_inv_n_log_norm"] = r.series.back().inv_n_log_norm;
}

void to_json(json& j, const LawSpec& s) {
  json dist;
  if (const auto* c = std::get_if<ConstantC>(&s.c_distribution)) {
    dist = {{"type", "constant"}, {"c", c->c}};
  } else {
    const auto& l = std::get<LogUniformC>(s.c_distribution);
    dist = {{"type", "log_uniform"}, {"c_min", l.c_min}, {"c_max", l.c_max}};
  }
  j = {{"c_distribution", dist}, {"seed", s.seed}};
}

void from_json(const json& j, LawSpec& s) {
  require_keys_within(j, {"c_distribution", "seed"}, "law");
  if (!j.contains("c_distribution")) throw ConfigError("law: missing field 'c_distribution'");
  const json& d = j.at("c_distribution");
  const std::string t = type_at(d, "law.c_distribution");
  if (t == "constant") {
    require_keys_within(d, {"type", "c"}, "law.c_distribution");
    s.c_distribution = ConstantC{number_at(d, "c", "law.c_distribution")};
  } else if (t == "log_uniform") {
    require_keys_within(d, {"type", "c_min", "c_max"}, "law.c_distribution");
    s.c_distribution = LogUniformC{number_at(d, "c_min", "law.c_distribution"),
                                   number_at(d, "c_max", "law.c_distribution")};
  } else {
    throw ConfigError("law.c_distribution.type: unknown distribution '" + t + "'");
  }
  if (j.contains("seed")) s.seed = u64_at(j, "seed", "law");
  try {
    s.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

void to_json(json& j, const DedieuShubReport& r) {
  j = {{"lambda_est", r.lambda_est},
       {"int_log_rho_est", r.int_log_rho_est},
       {"int_N_est", r.int_N_est},
       {"furstenberg_est", r.furstenberg_est},
       {"n_steps", r.n_steps},
       {"samples", r.samples},
       {"runs", r.runs},
       {"std_errors",
        {{"lambda", r.std_errors.lambda},
         {"log_rho", r.std_errors.log_rho},
         {"N", r.std_errors.n_value},
         {"furstenberg", r.std_errors.furstenberg}}}};
}

}  // namespace sl2lab
