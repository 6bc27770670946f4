#include <algorithm>
#include <cmath>

#include "fields.hpp"
#include "sl2lab/error.hpp"
#include "sl2lab/json_io.hpp"

namespace sl2lab::cli::detail {

void require_fields(const json& cfg, const std::vector<std::string>& allowed,
                    const std::string& command) {
  if (!cfg.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, _] : cfg.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("config: unknown field '" + key + "' for " + command);
    }
  }
}

double real_field(json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) {
    cfg[key] = fallback;
    return fallback;
  }
  const json& v = cfg.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw ConfigError(std::string("config.") + key + ": expected a finite number");
  }
  return v.get<double>();
}

std::int64_t int_field(json& cfg, const char* key, std::int64_t fallback,
                       std::int64_t min_value) {
  if (!cfg.contains(key)) cfg[key] = fallback;
  const json& v = cfg.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("config.") + key + ": expected an integer");
  }
  const auto value = v.get<std::int64_t>();
  if (value < min_value) {
    throw ConfigError(std::string("config.") + key + ": must be >= " +
                      std::to_string(min_value));
  }
  return value;
}

std::uint64_t u64_field(json& cfg, const char* key, std::uint64_t fallback) {
  if (!cfg.contains(key)) cfg[key] = fallback;
  const json& v = cfg.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError(std::string("config.") + key + ": expected a non-negative integer");
}

std::vector<SL2> matrices_field(const json& cfg) {
  if (!cfg.contains("matrices")) throw ConfigError("config: missing field 'matrices'");
  const json& ms = cfg.at("matrices");
  if (!ms.is_array()) throw ConfigError("config.matrices: expected a list of matrices");
  if (ms.empty()) throw ConfigError("config.matrices: need at least one matrix");
  std::vector<SL2> out;
  out.reserve(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    try {
      out.push_back(ms[i].get<SL2>());
    } catch (const Error& e) {
      throw ConfigError("config.matrices[" + std::to_string(i) + "]: " + e.what());
    } catch (const json::exception& e) {
      throw ConfigError("config.matrices[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

QuadratureSpec quadrature_field(json& cfg, QuadratureSpec defaults) {
  QuadratureSpec q = defaults;
  const bool explicit_initial =
      cfg.contains("quadrature") && cfg["quadrature"].contains("initial_grid");
  if (cfg.contains("quadrature")) merge_quadrature(cfg.at("quadrature"), q);
  if (!explicit_initial) q.initial_grid = std::min(q.initial_grid, q.max_grid);
  try {
    q.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config.quadrature: ") + e.what());
  }
  cfg["quadrature"] = q;
  return q;
}

CocycleSpec cocycle_field(json& cfg) {
  CocycleSpec spec{CircleRotation{}, HermanMap{}};
  if (cfg.contains("cocycle")) {
    try {
      spec = cfg.at("cocycle").get<CocycleSpec>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config.cocycle: ") + e.what());
    }
  }
  if (cfg.contains("seed")) {
    const std::uint64_t seed = u64_field(cfg, "seed", 0);
    if (auto* b = std::get_if<BernoulliShift>(&spec.base)) b->seed = seed;
  }
  spec.validate();
  cfg["cocycle"] = spec;
  return spec;
}

BasePoint x0_field(json& cfg) {
  BasePoint x;
  if (cfg.contains("x0")) {
    json& j = cfg["x0"];
    require_keys_within(j, {"phase", "offset"}, "config.x0");
    x.phase = real_field(j, "phase", 0.0);
    x.offset = int_field(j, "offset", 0, INT64_MIN);
    if (!(x.phase >= 0.0 && x.phase < 1.0)) {
      throw ConfigError("config.x0.phase: must lie in [0, 1)");
    }
  }
  cfg["x0"] = x;
  return x;
}

LawSpec law_field(json& cfg) {
  LawSpec law{ConstantC{2.0}, 0};
  if (cfg.contains("law")) {
    try {
      law = cfg.at("law").get<LawSpec>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config.law: ") + e.what());
    }
  }
  if (cfg.contains("seed")) law.seed = u64_field(cfg, "seed", 0);
  law.validate();
  cfg["law"] = law;
  return law;
}

}  // namespace sl2lab::cli::detail
