#include "sl2lab/cocycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

#include "sl2lab/counter_rng.hpp"
#include "sl2lab/error.hpp"

namespace sl2lab {
namespace {

constexpr std::uint64_t kSymbolStream = 0xb3;

constexpr Mat2 kHalfTurnH{2.0, 0.0, 0.0, 0.5};
constexpr Mat2 kQuarterTurn{0.0, -1.0, 1.0, 0.0};

double frac(double x) noexcept {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Mat2 hir_value(int prev, int cur, int next) noexcept {
  if (cur == 1) return kHalfTurnH;
  if (prev == next) return Mat2::identity();  // (0,0,0) or (1,0,1)
  return kQuarterTurn;                         // (1,0,0) or (0,0,1)
}

// Walks x, Tx, T^2 x, ... and yields A(T^j x) as a plain matrix.
class OrbitStepper {
 public:
  OrbitStepper(const CocycleSpec& spec, const BasePoint& x0)
      : spec_(spec), x0_(x0) {
    if (const auto* b = std::get_if<BernoulliShift>(&spec.base)) {
      seed_ = b->seed;
      prev_ = bernoulli_symbol(seed_, x0.offset - 1);
      cur_ = bernoulli_symbol(seed_, x0.offset);
      next_ = bernoulli_symbol(seed_, x0.offset + 1);
    } else {
      alpha_ = std::get<CircleRotation>(spec.base).alpha;
    }
  }

  Mat2 value() const {
    return std::visit(
        overloaded{
            [&](const HermanMap& h) {
              const double t = kTwoPi * phase();
              const double c = std::cos(t);
              const double s = std::sin(t);
              return Mat2{h.c * c, -h.c * s, s / h.c, c / h.c};
            },
            [&](const BernoulliHIR&) { return hir_value(prev_, cur_, next_); },
            [&](const ConstantMap& m) { return m.a.mat(); },
            [&](const TableMap& t) {
              if (is_circle()) {
                const auto k = t.table.size();
                auto idx = static_cast<std::size_t>(phase() * static_cast<double>(k));
                if (idx >= k) idx = k - 1;
                return t.table[idx].mat();
              }
              return t.table[static_cast<std::size_t>(cur_)].mat();
            }},
        spec_.map);
  }

  void step() {
    ++j_;
    if (!is_circle()) {
      prev_ = cur_;
      cur_ = next_;
      next_ = bernoulli_symbol(seed_, x0_.offset + j_ + 1);
    }
  }

 private:
  bool is_circle() const noexcept { return seed_ == kNoSeed; }
  double phase() const noexcept {
    return frac(x0_.phase + frac(static_cast<double>(j_) * alpha_));
  }

  static constexpr std::uint64_t kNoSeed = ~std::uint64_t{0};

  const CocycleSpec& spec_;
  BasePoint x0_;
  std::int64_t j_ = 0;
  double alpha_ = 0.0;
  std::uint64_t seed_ = kNoSeed;
  int prev_ = 0, cur_ = 0, next_ = 0;
};

}  // namespace

void CocycleSpec::validate() const {
  const bool circle = std::holds_alternative<CircleRotation>(base);
  if (circle) {
    const double a = std::get<CircleRotation>(base).alpha;
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("circle_rotation: alpha must lie in (0, 1)");
  } else if (std::get<BernoulliShift>(base).seed == ~std::uint64_t{0}) {
    throw ConfigError("bernoulli_shift: seed 2^64-1 is reserved");
  }
  std::visit(overloaded{
                 [&](const HermanMap& h) {
                   if (!circle) throw ConfigError("herman map requires a circle_rotation base");
                   if (!std::isfinite(h.c) || h.c < 1.0) throw ConfigError("herman: c must be >= 1");
                 },
                 [&](const BernoulliHIR&) {
                   if (circle) throw ConfigError("bernoulli_HIR map requires a bernoulli_shift base");
                 },
                 [](const ConstantMap&) {},
                 [&](const TableMap& t) {
                   if (t.table.empty()) throw ConfigError("table map: empty table");
                   if (!circle && t.table.size() != 2) {
                     throw ConfigError("table map over bernoulli_shift needs exactly 2 entries");
                   }
                 }},
             map);
}

BasePoint advance(const CocycleSpec& spec, const BasePoint& x, std::int64_t m) {
  BasePoint out = x;
  if (const auto* c = std::get_if<CircleRotation>(&spec.base)) {
    out.phase = frac(x.phase + frac(static_cast<double>(m) * c->alpha));
  } else {
    out.offset = x.offset + m;
  }
  return out;
}

int bernoulli_symbol(std::uint64_t seed, std::int64_t i) noexcept {
  return static_cast<int>(counter_hash(seed, kSymbolStream, static_cast<std::uint64_t>(i), 0) >> 63);
}

SL2 cocycle_value(const CocycleSpec& spec, const BasePoint& x) {
  spec.validate();
  return SL2::trusted(OrbitStepper(spec, x).value());
}

SL2 bernoulli_cocycle_value(int x_prev, int x0, int x_next) {
  auto bit = [](int s) { return s == 0 || s == 1; };
  if (!bit(x_prev) || !bit(x0) || !bit(x_next)) {
    throw InvalidInput("bernoulli_cocycle_value: symbols must be 0 or 1");
  }
  return SL2::trusted(hir_value(x_prev, x0, x_next));
}

SL2 bernoulli_word_product(std::span<const int> window) {
  if (window.size() < 3) {
    throw InvalidInput("bernoulli_word_product: need at least three symbols");
  }
  Mat2 acc = Mat2::identity();
  for (std::size_t j = 1; j + 1 < window.size(); ++j) {
    acc = bernoulli_cocycle_value(window[j - 1], window[j], window[j + 1]).mat() * acc;
  }
  return SL2::trusted(acc);
}

ScaledMat2 cocycle_product_scaled(const CocycleSpec& spec, const BasePoint& x0,
                                  std::int64_t n, double twist) {
  spec.validate();
  if (n < 1) throw InvalidInput("cocycle product: n must be >= 1");
  const bool twisted = twist != 0.0;
  const Mat2 r = rotation(twist).mat();
  OrbitStepper orbit(spec, x0);
  ScaledMat2 acc;
  for (std::int64_t j = 0; j < n; ++j) {
    const Mat2 a = orbit.value();
    acc.left_multiply(twisted ? a * r : a);
    if ((j + 1) % kRenormInterval == 0) acc.renormalize();
    orbit.step();
  }
  acc.renormalize();
  return acc;
}

SL2 cocycle_product(const CocycleSpec& spec, const BasePoint& x0, std::int64_t n) {
  return cocycle_product_scaled(spec, x0, n).to_sl2();
}

LyapunovReport lyapunov_estimate(const CocycleSpec& spec, const BasePoint& x0,
                                 std::int64_t n, double twist) {
  const ScaledMat2 p = cocycle_product_scaled(spec, x0, n, twist);
  return {n, p.log_norm() / static_cast<double>(n), x0, p.renorm_count()};
}

FormulaReport herman_equality_check(const CocycleSpec& spec, std::int64_t n,
                                    const QuadratureSpec& quad, const BasePoint& x0) {
  spec.validate();
  if (n < 1) throw InvalidInput("herman_equality_check: n must be >= 1");
  const auto q = periodic_average(
      [&](double theta) { return lyapunov_estimate(spec, x0, n, theta).exponent; }, quad);

  OrbitStepper orbit(spec, x0);
  double birkhoff = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    birkhoff += n_value(SL2::trusted(orbit.value()));
    orbit.step();
  }
  birkhoff /= static_cast<double>(n);

  FormulaReport r;
  r.lhs = q.value;
  r.rhs = birkhoff;
  r.abs_error = std::abs(r.lhs - r.rhs);
  r.quadrature = q;
  return r;
}

SpectralGrowthReport spectral_growth(const CocycleSpec& spec, const BasePoint& x0,
                                     std::int64_t n_max) {
  spec.validate();
  if (n_max < 1) throw InvalidInput("spectral_growth: n_max must be >= 1");
  static const double kRhoOneLog = std::log1p(1e-9);

  SpectralGrowthReport rep;
  rep.series.reserve(static_cast<std::size_t>(n_max));
  rep.tail_start = std::max<std::int64_t>(1, n_max / 2);
  rep.running_max = -std::numeric_limits<double>::infinity();

  OrbitStepper orbit(spec, x0);
  ScaledMat2 acc;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    acc.left_multiply(orbit.value());
    acc.renormalize();
    orbit.step();

    const double log_rho = acc.log_spectral_radius();
    const double nd = static_cast<double>(n);
    SpectralGrowthPoint pt{n, log_rho / nd, acc.log_norm() / nd, log_rho <= kRhoOneLog};
    if (pt.rho_is_one) ++rep.rho_one_count;
    if (n >= rep.tail_start) rep.running_max = std::max(rep.running_max, pt.inv_n_log_rho);
    rep.series.push_back(pt);
  }
  return rep;
}

namespace {

struct StarSums {
  long double log_rho = 0.0L;
  long double log_norm = 0.0L;
};

// Depth-first enumeration of s = (x_{-1}, ..., x_n); factor j is fixed as
// soon as s[j + 2] is assigned, so shared prefixes are multiplied once.
void star_enumerate(int n, int depth, int* s, const Mat2& prefix, StarSums& sums) {
  for (int bit = 0; bit <= 1; ++bit) {
    s[depth] = bit;
    Mat2 p = prefix;
    if (depth >= 2) p = hir_value(s[depth - 2], s[depth - 1], s[depth]) * p;
    if (depth == n + 1) {
      const SL2 m = SL2::trusted(p);
      sums.log_rho += std::log(spectral_radius(m));
      sums.log_norm += std::log(operator_norm(m));
    } else {
      star_enumerate(n, depth + 1, s, p, sums);
    }
  }
}

StarSums star_sums(int n) {
  if (n < 1) throw InvalidInput("star_identity_probe: n must be >= 1");
  if (n > kStarProbeMaxN) {
    throw ResourceError("star_identity_probe: n > " + std::to_string(kStarProbeMaxN) +
                        " needs more than 2^24 windows");
  }
  int s[kStarProbeMaxN + 2] = {};
  StarSums sums;
  star_enumerate(n, 0, s, Mat2::identity(), sums);
  return sums;
}

}  // namespace

std::pair<double, double> star_identity_probe(int n) {
  const StarSums sums = star_sums(n);
  const long double windows = std::ldexp(1.0L, n + 2);
  return {static_cast<double>(sums.log_rho / windows / n), 0.5 * std::numbers::ln2};
}

double star_norm_average(int n) {
  const StarSums sums = star_sums(n);
  const long double windows = std::ldexp(1.0L, n + 2);
  return static_cast<double>(sums.log_norm / windows / n);
}

void write_spectral_growth_csv(std::ostream& os, const SpectralGrowthReport& r) {
  os << "n,inv_n_log_rho,inv_n_log_norm,rho_is_one\n";
  char buf[96];
  for (const auto& p : r.series) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%d\n", static_cast<long long>(p.n),
                  p.inv_n_log_rho, p.inv_n_log_norm, p.rho_is_one ? 1 : 0);
    os << buf;
  }
}

}  // namespace sl2lab
