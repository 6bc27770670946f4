#pragma once

// JSON forms used by reports and experiment configs. Matrices are
// [[a11, a12], [a21, a22]], complex numbers [re, im]. Readers reject
// unknown keys with a ConfigError naming the offending field.

#include <nlohmann/json.hpp>

#include "sl2lab/cocycles.hpp"
#include "sl2lab/complexify.hpp"
#include "sl2lab/formulas.hpp"
#include "sl2lab/mat2.hpp"
#include "sl2lab/quadrature.hpp"
#include "sl2lab/randprod.hpp"

namespace sl2lab {

using json = nlohmann::json;

void to_json(json& j, const Mat2& m);
void from_json(const json& j, Mat2& m);
void to_json(json& j, const SL2& a);
/// Validates the determinant; throws ConfigError otherwise.
void from_json(const json& j, SL2& a);
void to_json(json& j, const PolarForm& p);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);
void to_json(json& j, const EigenPair& e);
void to_json(json& j, const SeparationReport& r);

void to_json(json& j, const QuadratureSpec& q);
/// Missing keys keep the values already in `q`.
void merge_quadrature(const json& j, QuadratureSpec& q);
void to_json(json& j, const IntegralEstimate& e);
void to_json(json& j, const FormulaReport& r);
void to_json(json& j, const MeasureBoundReport& r);

void to_json(json& j, const CocycleSpec& s);
void from_json(const json& j, CocycleSpec& s);
void to_json(json& j, const BasePoint& x);
void to_json(json& j, const LyapunovReport& r);
/// Summary only; the series is exported as CSV.
void to_json(json& j, const SpectralGrowthReport& r);

void to_json(json& j, const LawSpec& s);
void from_json(const json& j, LawSpec& s);
void to_json(json& j, const DedieuShubReport& r);

/// Throws ConfigError if `j` is not an object or has a key outside `allowed`.
void require_keys_within(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& context);

}  // namespace sl2lab
