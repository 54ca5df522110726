#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geh/correlations.hpp"
#include "geh/errors.hpp"
#include "geh/multiplicative.hpp"
#include "geh/parallel.hpp"
#include "geh/sieve.hpp"
#include "geh/summation.hpp"

namespace geh {

inline constexpr std::uint64_t kDefaultModulusCap = 1'000'000;
// Rough operation budget for one averaged sum; larger requests are refused.
inline constexpr double kDefaultWorkCap = 2e11;

struct DistributionOptions {
  unsigned threads = 1;
  std::size_t segment_size = kDefaultSegmentSize;
  std::uint64_t truncation = kDefaultTruncation;
  std::uint64_t modulus_cap = kDefaultModulusCap;
  double work_cap = kDefaultWorkCap;
  Geh2Variant variant = Geh2Variant::endpoint;

  [[nodiscard]] SieveConfig sieve() const {
    SieveConfig config;
    config.segment_size = segment_size;
    config.threads = threads;
    return config;
  }
};

namespace detail {

using u128 = unsigned __int128;

// base^exp, or nullopt once the value leaves 128 bits.
inline std::optional<u128> checked_pow(std::uint64_t base, std::uint64_t exp) {
  u128 result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<u128>::max() / base) return std::nullopt;
    result *= base;
  }
  return result;
}

// Small-denominator fraction equal to theta up to double rounding, if any.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> as_small_fraction(double theta) {
  for (std::uint64_t den = 1; den <= 64; ++den) {
    const double num = std::round(theta * static_cast<double>(den));
    if (num < 1.0) continue;
    if (std::abs(num / static_cast<double>(den) - theta) <= 4 * std::numeric_limits<double>::epsilon() * theta) {
      return std::pair{static_cast<std::uint64_t>(num), den};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Largest integer q >= 1 with q <= x^theta.
///
/// When theta is a fraction num/den with den <= 64 the boundary is decided by
/// comparing q^den with x^num exactly; otherwise by extended-precision logs.
inline std::uint64_t floor_power(std::uint64_t x, double theta) {
  if (x < 2) throw DomainError("floor_power requires x >= 2");
  if (!(theta > 0.0)) throw DomainError("floor_power requires theta > 0");
  const auto fraction = detail::as_small_fraction(theta);
  const long double log_x = std::log(static_cast<long double>(x));

  auto fits = [&](std::uint64_t q) {
    if (q <= 1) return true;
    if (fraction) {
      const auto lhs = detail::checked_pow(q, fraction->second);
      const auto rhs = detail::checked_pow(x, fraction->first);
      if (lhs && rhs) return *lhs <= *rhs;
      if (!lhs && rhs) return false;
      if (lhs && !rhs) return true;
    }
    return std::log(static_cast<long double>(q)) <= static_cast<long double>(theta) * log_x;
  };

  const long double approx = std::exp(static_cast<long double>(theta) * log_x);
  if (approx >= 1.8e19L) throw ResourceError("x^theta exceeds 64-bit range");
  auto q = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(approx));
  while (q > 1 && !fits(q)) --q;
  while (fits(q + 1)) ++q;
  return q;
}

namespace detail {

inline void check_moduli(std::uint64_t q_max, double work, const DistributionOptions& options) {
  if (q_max > options.modulus_cap) {
    throw ResourceError("modulus bound " + std::to_string(q_max) + " exceeds cap " +
                        std::to_string(options.modulus_cap));
  }
  if (work > options.work_cap) {
    throw ResourceError("estimated work " + std::to_string(work) + " exceeds cap " +
                        std::to_string(options.work_cap));
  }
}

inline double modulus_work(std::uint64_t q_lo, std::uint64_t q_hi, double terms) {
  const double count = static_cast<double>(q_hi - q_lo + 1);
  const double span = static_cast<double>(q_hi) + static_cast<double>(q_lo);
  return count * terms + count * span / 2.0;
}

// Runs fn(q) for q in [q_lo, q_hi], largest q first, storing results at q - q_lo.
template <typename Fn>
std::vector<double> per_modulus(std::uint64_t q_lo, std::uint64_t q_hi, unsigned threads, Fn&& fn) {
  if (q_hi < q_lo) return {};
  const auto count = static_cast<std::size_t>(q_hi - q_lo + 1);
  std::vector<double> out(count, 0.0);
  parallel_for(count, threads, [&](std::size_t i) {
    const std::uint64_t q = q_hi - i;
    out[q - q_lo] = fn(q);
  });
  return out;
}

inline double ascending_sum(const std::vector<double>& values) {
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  return sum.value();
}

}  // namespace detail

/// max_{(a,q)=1} |E₂(x; q, a, h)| for every q in [q_lo, q_hi], in ascending q order.
inline std::vector<double> geh2_max_errors(const PairList& pairs, const SingularSeriesValue& ss, std::uint64_t q_lo,
                                           std::uint64_t q_hi, const DistributionOptions& options = {}) {
  if (q_lo < 1) throw DomainError("moduli start at 1");
  if (q_hi < q_lo) return {};
  detail::check_moduli(q_hi, detail::modulus_work(q_lo, q_hi, static_cast<double>(pairs.terms.size())), options);
  return detail::per_modulus(q_lo, q_hi, options.threads, [&](std::uint64_t q) {
    return residue_error_profile(pairs, q, ss, options.variant).max_abs_error;
  });
}

/// sup_{y<=x} E(y; q) for every q in [1, q_hi], in ascending q order.
inline std::vector<double> eh_max_errors(const PrimeList& primes, std::uint64_t q_hi,
                                         const DistributionOptions& options = {}) {
  detail::check_moduli(q_hi, detail::modulus_work(1, q_hi, static_cast<double>(primes.terms.size())), options);
  return detail::per_modulus(1, q_hi, options.threads, [&](std::uint64_t q) { return eh_error_sup(primes, q); });
}

/// Σ_{q <= x^theta} max_{y <= x} E(y; q).
inline double eh_sum(std::uint64_t x, double theta, const DistributionOptions& options = {}) {
  if (x < 2) throw DomainError("eh_sum requires x >= 2");
  const std::uint64_t q_max = floor_power(x, theta);
  // Rough prime count for the guard, before any sieving.
  const double est_primes = 1.3 * static_cast<double>(x) / std::log(static_cast<double>(x));
  detail::check_moduli(q_max, detail::modulus_work(1, q_max, est_primes), options);
  return detail::ascending_sum(eh_max_errors(build_prime_list(x, options.sieve()), q_max, options));
}

inline void check_geh2_theta(double theta) {
  if (!(theta > 0.0 && theta < 2.0)) throw DomainError("theta must lie in (0, 2)");
}

/// Σ_{q <= x^theta} max_{(a,q)=1} |E₂(x; q, a, h)|.
inline double geh2_sum(std::uint64_t x, double theta, std::int64_t h, const DistributionOptions& options = {}) {
  if (x < 2) throw DomainError("geh2_sum requires x >= 2");
  check_geh2_theta(theta);
  const std::uint64_t q_max = floor_power(x, theta);
  detail::check_moduli(q_max, detail::modulus_work(1, q_max, 0.0), options);
  const PairList pairs = build_pair_list(x, h, options.sieve());
  return detail::ascending_sum(geh2_max_errors(pairs, singular_series(h, options.truncation), 1, q_max, options));
}

/// Σ over x^theta < q <= q_max of max_{(a,q)=1} |E₂(x; q, a, h)|.
inline double tail_sum(std::uint64_t x, double theta, std::int64_t h, std::uint64_t q_max,
                       const DistributionOptions& options = {}) {
  if (x < 2) throw DomainError("tail_sum requires x >= 2");
  check_geh2_theta(theta);
  const std::uint64_t q_lo = floor_power(x, theta);
  if (q_max <= q_lo) throw DomainError("tail_sum requires q_max > floor(x^theta)");
  detail::check_moduli(q_max, detail::modulus_work(q_lo + 1, q_max, 0.0), options);
  const PairList pairs = build_pair_list(x, h, options.sieve());
  return detail::ascending_sum(
      geh2_max_errors(pairs, singular_series(h, options.truncation), q_lo + 1, q_max, options));
}

/// Ψ_h(x) / (𝔖(h)·x), defined for even h.
inline double hl_ratio(std::uint64_t x, std::int64_t h, const DistributionOptions& options = {}) {
  if (h == 0 || h % 2 != 0) throw DomainError("hl_ratio requires even nonzero h");
  if (x < 2) throw DomainError("hl_ratio requires x >= 2");
  const double value = psi(x, h, options.sieve()).value;
  return value / (singular_series(h, options.truncation).value * static_cast<double>(x));
}

// S ≈ C·x/(log x)^A.
struct LogPowerFit {
  double C = 0.0;
  double A = 0.0;
  double residual_norm = 0.0;  // Euclidean norm of log-space residuals
};

/// Least squares for log S = log C + log x - A·log log x.
inline LogPowerFit fit_log_power(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw DomainError("fit_log_power needs at least 3 points");
  std::vector<double> u, z;
  for (const auto& [x, s] : points) {
    if (!(x > 1.0)) throw DomainError("fit_log_power needs x > 1");
    if (!(s > 0.0)) throw DomainError("fit_log_power needs S > 0");
    u.push_back(std::log(std::log(x)));
    z.push_back(std::log(s) - std::log(x));
  }
  const double n = static_cast<double>(points.size());
  double u_mean = 0.0, z_mean = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    u_mean += u[i];
    z_mean += z[i];
  }
  u_mean /= n;
  z_mean /= n;
  double suu = 0.0, suz = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - u_mean) * (u[i] - u_mean);
    suz += (u[i] - u_mean) * (z[i] - z_mean);
  }
  if (!(suu > 1e-300) || suu <= 1e-24 * (u_mean * u_mean + 1.0)) {
    throw DomainError("fit_log_power: degenerate design (all x equal)");
  }
  const double slope = suz / suu;
  const double intercept = z_mean - slope * u_mean;
  double rss = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = z[i] - (intercept + slope * u[i]);
    rss += r * r;
  }
  return {std::exp(intercept), -slope, std::sqrt(rss)};
}

enum class ScanMode { eh, geh2, both };

struct ScanConfig {
  std::uint64_t x_start = 10'000;
  double x_ratio = 10.0;
  std::size_t x_count = 1;
  double theta = 0.4;
  std::int64_t h = 2;
  std::vector<double> A_list{1.0};
  ScanMode mode = ScanMode::geh2;

  [[nodiscard]] bool wants_eh() const noexcept { return mode != ScanMode::geh2; }
  [[nodiscard]] bool wants_geh2() const noexcept { return mode != ScanMode::eh; }

  /// x_k = round(x_start·x_ratio^k), k = 0..x_count-1.
  [[nodiscard]] std::vector<std::uint64_t> grid() const {
    std::vector<std::uint64_t> xs;
    for (std::size_t k = 0; k < x_count; ++k) {
      const double v = std::round(static_cast<double>(x_start) * std::pow(x_ratio, static_cast<double>(k)));
      if (!(v < 1.8e19)) throw ResourceError("scan grid point exceeds 64-bit range");
      xs.push_back(static_cast<std::uint64_t>(v));
    }
    return xs;
  }

  void validate() const {
    if (x_start < 2) throw DomainError("x_start must be >= 2");
    if (x_count < 1) throw DomainError("x_count must be >= 1");
    if (x_count > 1 && !(x_ratio > 1.0)) throw DomainError("x_ratio must exceed 1");
    if (!(theta > 0.0 && theta < 2.0)) throw DomainError("theta must lie in (0, 2)");
    if (h == 0) throw DomainError("h must be nonzero");
    if (A_list.empty()) throw DomainError("A list must not be empty");
    for (double a : A_list) {
      if (!(a > 0.0)) throw DomainError("A values must be > 0");
    }
    const auto xs = grid();
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (xs[i] <= xs[i - 1]) throw DomainError("x grid must be strictly increasing");
    }
  }
};

/// raw·(log x)^A / x.
inline double normalize_sum(double raw, std::uint64_t x, double A) {
  const double xd = static_cast<double>(x);
  return raw * std::pow(std::log(xd), A) / xd;
}

struct ScanPoint {
  std::uint64_t x = 0;
  std::uint64_t q_max = 0;
  std::optional<double> eh_sum;
  std::optional<double> geh2_sum;
  std::vector<double> eh_normalized;    // one per A in the config, same order
  std::vector<double> geh2_normalized;
};

struct ScanReport {
  ScanConfig config;
  std::uint64_t truncation = 0;
  Geh2Variant variant = Geh2Variant::endpoint;
  std::vector<ScanPoint> points;
  std::optional<LogPowerFit> eh_fit;
  std::optional<LogPowerFit> geh2_fit;
  std::vector<std::string> notes;
  unsigned threads = 1;
  double wall_time_seconds = 0.0;
};

inline std::optional<LogPowerFit> fit_series(const std::vector<ScanPoint>& points,
                                             std::optional<double> ScanPoint::*field) {
  std::vector<std::pair<double, double>> series;
  for (const auto& p : points) {
    const auto& s = p.*field;
    if (!s || !(*s > 0.0)) return std::nullopt;
    series.emplace_back(static_cast<double>(p.x), *s);
  }
  if (series.size() < 3) return std::nullopt;
  return fit_log_power(series);
}

inline ScanReport run_scan(const ScanConfig& config, const DistributionOptions& options = {}) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  ScanReport report;
  report.config = config;
  report.truncation = options.truncation;
  report.variant = options.variant;
  report.threads = options.threads;

  for (std::uint64_t x : config.grid()) {
    ScanPoint point;
    point.x = x;
    point.q_max = floor_power(x, config.theta);
    if (config.wants_eh()) {
      point.eh_sum = eh_sum(x, config.theta, options);
      for (double A : config.A_list) point.eh_normalized.push_back(normalize_sum(*point.eh_sum, x, A));
    }
    if (config.wants_geh2()) {
      point.geh2_sum = geh2_sum(x, config.theta, config.h, options);
      for (double A : config.A_list) point.geh2_normalized.push_back(normalize_sum(*point.geh2_sum, x, A));
    }
    if (point.q_max > x) {
      report.notes.push_back("x=" + std::to_string(x) + ": moduli above x hold at most one term per class");
    }
    report.points.push_back(std::move(point));
  }

  if (config.wants_eh()) report.eh_fit = fit_series(report.points, &ScanPoint::eh_sum);
  if (config.wants_geh2()) report.geh2_fit = fit_series(report.points, &ScanPoint::geh2_sum);

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace geh
