#pragma once

// I.i.d. products of A = R_phi H_c R_psi with uniform angles (a
// rotation-invariant law by construction) and the four estimates that the
// Dedieu-Shub chain identifies: the Lyapunov exponent, E log rho, E N and
// the Furstenberg average of log |A u|.

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "sl2lab/mat2.hpp"

namespace sl2lab {

struct ConstantC {
  double c = 1.0;
};
/// log c uniform on [log c_min, log c_max].
struct LogUniformC {
  double c_min = 1.0;
  double c_max = 4.0;
};
using CDistribution = std::variant<ConstantC, LogUniformC>;

struct LawSpec {
  CDistribution c_distribution = ConstantC{};
  std::uint64_t seed = 0;

  void validate() const;
};

/// Deterministic in (seed, index).
SL2 sample_matrix(const LawSpec& law, std::uint64_t index);

/// Number of batches for batch-means standard errors, and of independent
/// product runs behind the exponent estimate.
inline constexpr std::size_t kBatchCount = 100;

struct DedieuShubErrors {
  double lambda = 0.0;
  double log_rho = 0.0;
  double n_value = 0.0;
  double furstenberg = 0.0;
};

struct DedieuShubReport {
  double lambda_est = 0.0;
  double int_log_rho_est = 0.0;
  double int_N_est = 0.0;
  double furstenberg_est = 0.0;
  std::int64_t n_steps = 0;
  std::int64_t samples = 0;
  std::int64_t runs = 0;
  DedieuShubErrors std_errors;
  std::vector<double> run_exponents;

  /// Largest |x - y| / sqrt(se_x^2 + se_y^2) over the six pairs; pairs
  /// whose difference is below 1e-12 count as zero.
  double max_pairwise_sigma() const noexcept;
  /// Every pair within k combined standard errors.
  bool consistent(double k = 3.0) const noexcept;
};

/// Throws InvalidInput unless samples >= 1000 and n_steps >= 1000.
DedieuShubReport dedieu_shub_check(const LawSpec& law, std::int64_t samples,
                                   std::int64_t n_steps, unsigned threads = 1);

/// CSV with header "run,exponent".
void write_run_exponents_csv(std::ostream& os, const DedieuShubReport& r);

}  // namespace sl2lab
