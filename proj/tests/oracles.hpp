#pragma once

// Brute-force reference implementations used only by the test suites. They
// share no code with the library beyond the compensated accumulator.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "geh/summation.hpp"

namespace geh::oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Λ(n) by trial division; 0 for n <= 1 (and for nonpositive arguments).
inline double lambda(std::int64_t n) {
  if (n < 2) return 0.0;
  const auto u = static_cast<std::uint64_t>(n);
  for (std::uint64_t p = 2; p * p <= u; ++p) {
    if (u % p != 0) continue;
    std::uint64_t m = u;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return std::log(static_cast<double>(u));
}

inline std::vector<double> lambda_table(std::uint64_t max_n) {
  std::vector<double> t(max_n + 1, 0.0);
  for (std::uint64_t n = 2; n <= max_n; ++n) t[n] = lambda(static_cast<std::int64_t>(n));
  return t;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

inline std::uint64_t totient(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t a = 1; a <= n; ++a) {
    if (std::gcd(a, n) == 1) ++c;
  }
  return c;
}

inline std::uint64_t phi2(std::uint64_t q, std::int64_t h) {
  const auto qs = static_cast<std::int64_t>(q);
  std::uint64_t c = 0;
  for (std::int64_t a = 1; a <= qs; ++a) {
    if (std::gcd(a, qs) == 1 && std::gcd(a + h, qs) == 1) ++c;
  }
  return c;
}

// Σ_{n<=x, n≡a (q)} Λ(n)Λ(n+h), walking the progression n = a, a+q, ... in
// ascending order with the same accumulator the library uses.
inline double restricted_pair_sum(const std::vector<double>& lam, std::uint64_t x, std::int64_t h,
                                  std::uint64_t q, std::uint64_t a) {
  CompensatedSum s;
  std::uint64_t start = a % q;
  if (start == 0) start = q;
  for (std::uint64_t n = start; n <= x; n += q) {
    const std::int64_t m = static_cast<std::int64_t>(n) + h;
    if (m <= 0) continue;
    s.add(lam[n] * lam[static_cast<std::size_t>(m)]);
  }
  return s.value();
}

// max over integer y in [2, x] and the pre-jump limits at primes of
// max_{(a,q)=1} |θ(y;q,a) - y/φ(q)|.
inline double eh_sup_exhaustive(std::uint64_t x, std::uint64_t q, const std::vector<std::uint8_t>& prime_flags) {
  if (x < 2) return 0.0;
  const double phi = static_cast<double>(totient(q));
  double best = 0.0;
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    CompensatedSum theta;
    for (std::uint64_t y = 2; y <= x; ++y) {
      if (prime_flags[y] && y % q == a) {
        if (y > 2) best = std::max(best, std::abs(theta.value() - 1.0 * static_cast<double>(y) / phi));
        theta.add(std::log(static_cast<double>(y)));
      }
      best = std::max(best, std::abs(theta.value() - 1.0 * static_cast<double>(y) / phi));
    }
  }
  return best;
}

inline std::vector<std::uint8_t> prime_flags(std::uint64_t limit) {
  std::vector<std::uint8_t> f(limit + 1, 0);
  for (std::uint64_t n = 2; n <= limit; ++n) f[n] = is_prime(n) ? 1 : 0;
  return f;
}

}  // namespace geh::oracle
