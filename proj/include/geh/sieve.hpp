#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "geh/errors.hpp"
#include "geh/parallel.hpp"
#include "geh/summation.hpp"

namespace geh {

inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 40;
inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 20;
// Largest block a single LambdaTable may hold (values + flags ~ 9 bytes each).
inline constexpr std::uint64_t kMaxTableSpan = std::uint64_t{1} << 31;

struct SieveConfig {
  std::size_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
  std::uint64_t max_limit = kMaxSieveLimit;
  std::uint64_t max_table_span = kMaxTableSpan;

  void validate() const {
    if (segment_size < 1) throw DomainError("segment_size must be >= 1");
    if (threads < 1) throw DomainError("threads must be >= 1");
  }
};

/// floor(sqrt(n)), exact for every 64-bit n.
inline std::uint64_t isqrt(std::uint64_t n) noexcept {
  if (n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

namespace detail {

// Plain sieve of Eratosthenes for the small base primes.
inline std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<std::uint8_t> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) primes.push_back(i);
  }
  return primes;
}

class BasePrimeCache {
 public:
  static BasePrimeCache& instance() {
    static BasePrimeCache cache;
    return cache;
  }

  // Immutable list covering at least every prime <= bound.
  std::shared_ptr<const std::vector<std::uint64_t>> covering(std::uint64_t bound) {
    std::lock_guard lock(mutex_);
    if (!primes_ || bound > bound_) {
      std::uint64_t target = std::max<std::uint64_t>(bound, 1u << 16);
      if (primes_) target = std::max(target, 2 * bound_);
      primes_ = std::make_shared<const std::vector<std::uint64_t>>(simple_sieve(target));
      bound_ = target;
    }
    return primes_;
  }

 private:
  std::mutex mutex_;
  std::shared_ptr<const std::vector<std::uint64_t>> primes_;
  std::uint64_t bound_ = 0;
};

inline void check_limit(std::uint64_t limit, const SieveConfig& config) {
  if (limit > config.max_limit) {
    throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds cap " +
                        std::to_string(config.max_limit));
  }
}

}  // namespace detail

/// Primes p <= bound, shared from a process-wide immutable cache.
inline std::vector<std::uint64_t> base_primes(std::uint64_t bound) {
  auto all = detail::BasePrimeCache::instance().covering(bound);
  auto last = std::upper_bound(all->begin(), all->end(), bound);
  return {all->begin(), last};
}

/// Every prime in [2, limit], ascending.
inline std::vector<std::uint64_t> enumerate_primes(std::uint64_t limit, const SieveConfig& config = {}) {
  config.validate();
  detail::check_limit(limit, config);
  if (limit < 2) return {};

  const std::uint64_t root = isqrt(limit);
  const auto cache = detail::BasePrimeCache::instance().covering(root);
  const auto base_end = std::upper_bound(cache->begin(), cache->end(), root);
  const std::vector<std::uint64_t> base(cache->begin(), base_end);

  const std::uint64_t seg = config.segment_size;
  const std::uint64_t span = limit - 1;  // numbers 2..limit
  const std::size_t segments = static_cast<std::size_t>((span + seg - 1) / seg);
  std::vector<std::vector<std::uint64_t>> found(segments);

  parallel_for(segments, config.threads, [&](std::size_t s) {
    const std::uint64_t lo = 2 + s * seg;
    const std::uint64_t hi = std::min(limit, lo + seg - 1);
    std::vector<std::uint8_t> composite(hi - lo + 1, 0);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= hi; m += p) composite[m - lo] = 1;
    }
    auto& out = found[s];
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (!composite[n - lo]) out.push_back(n);
    }
  });

  std::size_t total = 0;
  for (const auto& f : found) total += f.size();
  std::vector<std::uint64_t> primes;
  primes.reserve(total);
  for (const auto& f : found) primes.insert(primes.end(), f.begin(), f.end());
  return primes;
}

// Contiguous block of von Mangoldt values: values[i] = Λ(start + i).
struct LambdaTable {
  std::uint64_t start = 1;
  std::vector<double> values;
  std::vector<std::uint8_t> is_prime;
  // Largest base prime bound used while sieving; >= floor(sqrt(last())).
  std::uint64_t base_prime_bound = 0;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] std::uint64_t last() const noexcept { return start + values.size() - 1; }
  [[nodiscard]] bool covers(std::int64_t m) const noexcept {
    return m >= static_cast<std::int64_t>(start) && static_cast<std::uint64_t>(m) <= last();
  }

  /// Λ(m), with Λ(m) = 0 for m <= 0. m must otherwise lie in the table.
  [[nodiscard]] double operator()(std::int64_t m) const {
    if (m <= 0) return 0.0;
    if (!covers(m)) throw DomainError("Lambda lookup outside table: " + std::to_string(m));
    return values[static_cast<std::size_t>(static_cast<std::uint64_t>(m) - start)];
  }

  [[nodiscard]] bool prime_at(std::uint64_t n) const {
    if (!covers(static_cast<std::int64_t>(n))) throw DomainError("prime lookup outside table");
    return is_prime[static_cast<std::size_t>(n - start)] != 0;
  }
};

/// Λ(n) for every n in [lo, hi]. Output is independent of segment size and thread count.
inline LambdaTable lambda_range(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config = {}) {
  config.validate();
  if (lo < 1) throw DomainError("lambda_range requires lo >= 1");
  if (hi < lo) throw DomainError("lambda_range requires lo <= hi");
  detail::check_limit(hi, config);
  const std::uint64_t span = hi - lo + 1;
  if (span > config.max_table_span) {
    throw ResourceError("lambda_range span " + std::to_string(span) + " exceeds cap " +
                        std::to_string(config.max_table_span));
  }

  const std::uint64_t root = isqrt(hi);
  const std::vector<std::uint64_t> base = base_primes(root);
  std::vector<double> log_base(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) log_base[i] = std::log(static_cast<double>(base[i]));

  LambdaTable table;
  table.start = lo;
  table.base_prime_bound = root;
  table.values.assign(span, 0.0);
  table.is_prime.assign(span, 0);

  const std::uint64_t seg = config.segment_size;
  const std::size_t segments = static_cast<std::size_t>((span + seg - 1) / seg);

  parallel_for(segments, config.threads, [&](std::size_t s) {
    const std::uint64_t s_lo = lo + s * seg;
    const std::uint64_t s_hi = std::min(hi, s_lo + seg - 1);
    const std::size_t offset = static_cast<std::size_t>(s_lo - lo);
    std::vector<std::uint8_t> composite(s_hi - s_lo + 1, 0);

    for (std::size_t i = 0; i < base.size(); ++i) {
      const std::uint64_t p = base[i];
      if (p > s_hi) break;
      const std::uint64_t first = std::max(2 * p, (s_lo + p - 1) / p * p);
      for (std::uint64_t m = first; m <= s_hi; m += p) composite[m - s_lo] = 1;
      // Powers p^k with k >= 2 are composite and carry log p.
      for (std::uint64_t pk = p; pk <= s_hi / p;) {
        pk *= p;
        if (pk >= s_lo) table.values[offset + (pk - s_lo)] = log_base[i];
      }
    }

    for (std::uint64_t n = std::max<std::uint64_t>(s_lo, 2); n <= s_hi; ++n) {
      const std::size_t k = static_cast<std::size_t>(n - s_lo);
      if (!composite[k]) {
        table.values[offset + k] = std::log(static_cast<double>(n));
        table.is_prime[offset + k] = 1;
      }
    }
  });

  return table;
}

/// θ(x; q, a): Σ log p over primes p <= x with p ≡ a (mod q).
inline double chebyshev_theta_progression(double x, std::uint64_t q, std::int64_t a,
                                          const SieveConfig& config = {}) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  if (!(x >= 2.0)) return 0.0;
  const double fl = std::floor(x);
  if (fl > static_cast<double>(config.max_limit)) {
    throw ResourceError("theta cutoff exceeds sieve cap");
  }
  const auto limit = static_cast<std::uint64_t>(fl);
  const auto qs = static_cast<std::int64_t>(q);
  const auto residue = static_cast<std::uint64_t>(((a % qs) + qs) % qs);

  CompensatedSum sum;
  for (std::uint64_t p : enumerate_primes(limit, config)) {
    if (p % q == residue) sum.add(std::log(static_cast<double>(p)));
  }
  return sum.value();
}

}  // namespace geh
