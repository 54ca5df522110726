#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "geh/errors.hpp"
#include "geh/sieve.hpp"
#include "geh/summation.hpp"

namespace geh {

inline constexpr std::uint64_t kMaxFactorizable = std::uint64_t{1} << 50;
inline constexpr std::uint64_t kDefaultTruncation = 1'000'000;

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// n = Π p^e with primes strictly increasing; n = 1 has no factors.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;
};

inline Factorization factorize(std::uint64_t n) {
  if (n < 1) throw DomainError("factorize requires n >= 1");
  if (n > kMaxFactorizable) {
    throw ResourceError("factorize: " + std::to_string(n) + " exceeds cap 2^50");
  }
  Factorization f{n, {}};
  std::uint64_t rest = n;

  auto strip = [&](std::uint64_t p) {
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) f.factors.push_back({p, e});
  };

  // Small primes first so the base-prime cache is only grown for large cofactors.
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (p * p > rest) break;
    strip(p);
  }
  if (rest >= 17 * 17) {
    const auto primes = base_primes(isqrt(rest));
    for (std::uint64_t p : primes) {
      if (p < 17) continue;
      if (p * p > rest) break;
      strip(p);
    }
  }
  // The cofactor has no prime factor <= its square root, so it is prime.
  if (rest > 1) f.factors.push_back({rest, 1});
  return f;
}

inline std::uint64_t euler_phi(const Factorization& f) noexcept {
  std::uint64_t phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (unsigned k = 1; k < e; ++k) phi *= p;
  }
  return phi;
}

inline std::uint64_t euler_phi(std::uint64_t n) { return euler_phi(factorize(n)); }

inline int moebius(const Factorization& f) noexcept {
  int mu = 1;
  for (const auto& pe : f.factors) {
    if (pe.exponent >= 2) return 0;
    mu = -mu;
  }
  return mu;
}

inline int moebius(std::uint64_t n) { return moebius(factorize(n)); }

/// Number of a in [1, q] with gcd(a, q) = gcd(a + h, q) = 1.
///
/// Multiplicative in q: a prime power p^k contributes p^(k-1)(p-1) when
/// p | h and p^(k-1)(p-2) otherwise.
inline std::uint64_t phi2(const Factorization& q, std::int64_t h) {
  if (h == 0) throw DomainError("phi2 requires h != 0");
  const auto qs = static_cast<std::int64_t>(q.n);
  const auto h_mod = static_cast<std::uint64_t>(((h % qs) + qs) % qs);
  std::uint64_t count = 1;
  for (const auto& [p, e] : q.factors) {
    const bool divides_h = (h_mod % p) == 0;
    std::uint64_t local = divides_h ? p - 1 : p - 2;
    for (unsigned k = 1; k < e; ++k) local *= p;
    count *= local;
  }
  return count;
}

inline std::uint64_t phi2(std::uint64_t q, std::int64_t h) {
  if (q < 1) throw DomainError("phi2 requires q >= 1");
  return phi2(factorize(q), h);
}

// Truncated singular series 𝔖(h) with a rigorous relative tail bound.
struct SingularSeriesValue {
  std::int64_t h = 0;
  double value = 0.0;
  std::uint64_t truncation = 0;  // primes p <= truncation enter the Euler product
  double tail_bound = 0.0;       // |value / 𝔖(h) - 1| is bounded by this
};

/// exp(2/(P-1)) - 1: bounds the omitted factor Π_{p>P} (1 - 1/(p-1)^2)^-1 - 1.
inline double singular_series_tail_bound(std::uint64_t truncation) {
  return std::expm1(2.0 / static_cast<double>(truncation - 1));
}

inline SingularSeriesValue singular_series(std::int64_t h, std::uint64_t truncation = kDefaultTruncation) {
  if (h == 0) throw DomainError("singular series requires h != 0");
  if (truncation < 3) throw DomainError("singular series truncation must be >= 3");
  if (h % 2 != 0) return {h, 0.0, truncation, 0.0};

  double product = 1.0;
  for (std::uint64_t p : base_primes(truncation)) {
    if (p == 2) continue;
    const double pm1 = static_cast<double>(p - 1);
    product *= 1.0 - 1.0 / (pm1 * pm1);
  }

  double local = 1.0;
  const std::uint64_t abs_h = h < 0 ? static_cast<std::uint64_t>(-(h + 1)) + 1 : static_cast<std::uint64_t>(h);
  for (const auto& pe : factorize(abs_h).factors) {
    if (pe.prime == 2) continue;
    local *= static_cast<double>(pe.prime - 1) / static_cast<double>(pe.prime - 2);
  }

  return {h, (2.0 * product) * local, truncation, singular_series_tail_bound(truncation)};
}

/// Σ_{q <= Q} phi2(q, h) / φ(q), accumulated with compensated summation.
inline double partial_sum_phi2_over_phi(std::uint64_t max_q, std::int64_t h) {
  if (max_q < 1) throw DomainError("partial sum requires Q >= 1");
  if (h == 0) throw DomainError("partial sum requires h != 0");
  CompensatedSum sum;
  for (std::uint64_t q = 1; q <= max_q; ++q) {
    const auto f = factorize(q);
    sum.add(static_cast<double>(phi2(f, h)) / static_cast<double>(euler_phi(f)));
  }
  return sum.value();
}

}  // namespace geh
