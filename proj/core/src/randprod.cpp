#include "sl2lab/randprod.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <type_traits>

#include "sl2lab/counter_rng.hpp"
#include "sl2lab/detail/parallel.hpp"
#include "sl2lab/error.hpp"

namespace sl2lab {
namespace {

constexpr std::uint64_t kSampleStream = 0;
constexpr std::uint64_t kRunStream = 1;

struct Draw {
  SL2 a;
  double theta;  // direction for the Furstenberg average
};

Draw draw(const LawSpec& law, std::uint64_t stream, std::uint64_t index) {
  CounterStream rng(law.seed, stream, index);
  const double phi = kTwoPi * rng.uniform();
  const double psi = kTwoPi * rng.uniform();
  const double u = rng.uniform();
  const double c = std::visit(
      [u](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ConstantC>) {
          return d.c;
        } else {
          const double lo = std::log(d.c_min);
          return std::exp(lo + u * (std::log(d.c_max) - lo));
        }
      },
      law.c_distribution);
  const double theta = kTwoPi * rng.uniform();
  return {rotation(phi) * diag_hyperbolic(std::max(1.0, c)) * rotation(psi), theta};
}

double log_expansion(const SL2& a, double theta) noexcept {
  const Mat2& m = a.mat();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double x = m.a11 * c + m.a12 * s;
  const double y = m.a21 * c + m.a22 * s;
  return 0.5 * std::log(x * x + y * y);
}

struct MeanAndError {
  double mean;
  double std_error;
};

// Mean of equal-weight groups and the standard error of that mean.
MeanAndError summarize(const std::vector<double>& group_means) {
  const double k = static_cast<double>(group_means.size());
  const double mean = std::accumulate(group_means.begin(), group_means.end(), 0.0) / k;
  double ss = 0.0;
  for (double v : group_means) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (k - 1.0) / k)};
}

}  // namespace

void LawSpec::validate() const {
  std::visit(
      [](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ConstantC>) {
          if (!std::isfinite(d.c) || d.c < 1.0) throw InvalidInput("law: constant c must be >= 1");
        } else {
          if (!std::isfinite(d.c_max) || d.c_min < 1.0 || d.c_max < d.c_min) {
            throw InvalidInput("law: log_uniform needs 1 <= c_min <= c_max");
          }
        }
      },
      c_distribution);
}

SL2 sample_matrix(const LawSpec& law, std::uint64_t index) {
  law.validate();
  return draw(law, kSampleStream, index).a;
}

double DedieuShubReport::max_pairwise_sigma() const noexcept {
  const double est[4] = {lambda_est, int_log_rho_est, int_N_est, furstenberg_est};
  const double se[4] = {std_errors.lambda, std_errors.log_rho, std_errors.n_value,
                        std_errors.furstenberg};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double diff = std::abs(est[i] - est[j]);
      if (diff <= 1e-12) continue;
      const double scale = std::hypot(se[i], se[j]);
      worst = std::max(worst, scale > 0.0 ? diff / scale : HUGE_VAL);
    }
  }
  return worst;
}

bool DedieuShubReport::consistent(double k) const noexcept {
  return max_pairwise_sigma() <= k;
}

DedieuShubReport dedieu_shub_check(const LawSpec& law, std::int64_t samples,
                                   std::int64_t n_steps, unsigned threads) {
  law.validate();
  if (samples < 1000 || n_steps < 1000) {
    throw InvalidInput("dedieu_shub_check: samples and n_steps must be >= 1000");
  }
  const std::size_t batches = kBatchCount;
  const auto total = static_cast<std::size_t>(samples);

  // Single-matrix averages, batch by batch.
  std::vector<double> rho_b(batches), n_b(batches), fu_b(batches);
  detail::parallel_for(batches, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      const std::size_t lo = b * total / batches;
      const std::size_t hi = (b + 1) * total / batches;
      double sr = 0.0, sn = 0.0, sf = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const Draw d = draw(law, kSampleStream, i);
        sr += std::log(spectral_radius(d.a));
        sn += n_value(d.a);
        sf += log_expansion(d.a, d.theta);
      }
      const double cnt = static_cast<double>(hi - lo);
      rho_b[b] = sr / cnt;
      n_b[b] = sn / cnt;
      fu_b[b] = sf / cnt;
    }
  }, /*grain=*/1);

  // Independent product runs for the exponent.
  std::vector<double> runs(batches);
  detail::parallel_for(batches, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      ScaledMat2 acc;
      const auto base = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(n_steps);
      for (std::int64_t j = 0; j < n_steps; ++j) {
        acc.left_multiply(draw(law, kRunStream, base + static_cast<std::uint64_t>(j)).a.mat());
        if ((j + 1) % kRenormInterval == 0) acc.renormalize();
      }
      runs[r] = acc.log_norm() / static_cast<double>(n_steps);
    }
  }, /*grain=*/1);

  const auto lam = summarize(runs);
  const auto rho = summarize(rho_b);
  const auto nv = summarize(n_b);
  const auto fu = summarize(fu_b);

  DedieuShubReport rep;
  rep.lambda_est = lam.mean;
  rep.int_log_rho_est = rho.mean;
  rep.int_N_est = nv.mean;
  rep.furstenberg_est = fu.mean;
  rep.n_steps = n_steps;
  rep.samples = samples;
  rep.runs = static_cast<std::int64_t>(batches);
  rep.std_errors = {lam.std_error, rho.std_error, nv.std_error, fu.std_error};
  rep.run_exponents = std::move(runs);
  return rep;
}

void write_run_exponents_csv(std::ostream& os, const DedieuShubReport& r) {
  os << "run,exponent\n";
  char buf[64];
  for (std::size_t i = 0; i < r.run_exponents.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, r.run_exponents[i]);
    os << buf;
  }
}

}  // namespace sl2lab
