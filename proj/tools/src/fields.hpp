#pragma once

// Typed readers over a config object. Each reader fills in its default
// so the object doubles as the resolved config echoed in reports.

#include <cstdint>
#include <string>
#include <vector>

#include "sl2lab/cli.hpp"
#include "sl2lab/cocycles.hpp"
#include "sl2lab/quadrature.hpp"
#include "sl2lab/randprod.hpp"

namespace sl2lab::cli::detail {

void require_fields(const json& cfg, const std::vector<std::string>& allowed,
                    const std::string& command);

double real_field(json& cfg, const char* key, double fallback);
std::int64_t int_field(json& cfg, const char* key, std::int64_t fallback,
                       std::int64_t min_value);
std::uint64_t u64_field(json& cfg, const char* key, std::uint64_t fallback);

/// Non-empty list of SL2 matrices under "matrices".
std::vector<SL2> matrices_field(const json& cfg);

/// "quadrature" merged over `defaults`; validated.
QuadratureSpec quadrature_field(json& cfg, QuadratureSpec defaults);

/// "cocycle" (default: herman c = 2 over the golden rotation). A top-level
/// "seed" overrides the Bernoulli base seed.
CocycleSpec cocycle_field(json& cfg);

/// "x0": {"phase", "offset"}.
BasePoint x0_field(json& cfg);

/// "law" (default: constant c = 2); top-level "seed" overrides its seed.
LawSpec law_field(json& cfg);

}  // namespace sl2lab::cli::detail
