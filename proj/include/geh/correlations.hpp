#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "geh/errors.hpp"
#include "geh/multiplicative.hpp"
#include "geh/sieve.hpp"
#include "geh/summation.hpp"

namespace geh {

inline constexpr std::int64_t kMaxShift = std::int64_t{1} << 40;

// One nonzero summand: weight attached to the integer n.
struct Term {
  std::uint64_t n = 0;
  double weight = 0.0;
};

// Sparse list of n <= x with Λ(n)Λ(n+h) != 0, ascending in n.
struct PairList {
  std::uint64_t x = 0;
  std::int64_t h = 0;
  std::vector<Term> terms;
};

// Primes p <= x paired with log p, ascending.
struct PrimeList {
  std::uint64_t x = 0;
  std::vector<Term> terms;
};

struct PairCorrelation {
  std::uint64_t x = 0;
  std::int64_t h = 0;
  double value = 0.0;  // Ψ_h(x)
};

enum class Geh2Variant {
  endpoint,  // E₂ evaluated at y = x
  sup,       // sup over y in [2, x] of |E₂(y; q, a, h)|
};

struct ResidueErrorProfile {
  std::uint64_t x = 0;
  std::uint64_t q = 0;
  std::int64_t h = 0;
  Geh2Variant variant = Geh2Variant::endpoint;
  std::uint64_t truncation = 0;
  double singular_series = 0.0;
  double main_term_unit = 0.0;  // 𝔖(h)·x/φ(q)
  // Keyed by residue a in [1, q] with gcd(a, q) = 1. Signed E₂ for the
  // endpoint variant, the nonnegative sup for the sup variant.
  std::map<std::uint64_t, double> errors;
  double max_abs_error = 0.0;
  std::uint64_t argmax = 0;  // smallest residue realizing max_abs_error
};

struct DecompositionCheck {
  bool pass = false;
  double residue_side = 0.0;  // Σ over admissible residues of restricted sums
  double direct_side = 0.0;   // Σ over n <= x with gcd(n(n+h), q) = 1
  double residual = 0.0;
  std::uint64_t contributing_residues = 0;
};

namespace detail {

inline void check_shift(std::int64_t h) {
  if (h == 0) throw DomainError("shift h must be nonzero");
  if (h > kMaxShift || h < -kMaxShift) throw ResourceError("shift |h| exceeds 2^40");
}

inline std::uint64_t reduce(std::int64_t a, std::uint64_t q) {
  const auto qs = static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(((a % qs) + qs) % qs);
}

// coprime[r] != 0 iff gcd(r, q) = 1, for residues r in [0, q).
inline std::vector<std::uint8_t> coprime_residues(const Factorization& q) {
  std::vector<std::uint8_t> coprime(q.n, 1);
  if (q.n == 1) return coprime;  // gcd(0, 1) = 1
  for (const auto& pe : q.factors) {
    for (std::uint64_t r = 0; r < q.n; r += pe.prime) coprime[r] = 0;
  }
  return coprime;
}

// Per-class sup over y in [2, x] of |R_a(y) - coef_a·y/φ(q)|, where R_a is the
// running sum of term weights with n ≡ a (mod q). Each R_a is a step function
// and the subtracted line is nondecreasing, so on every piece the extremes sit
// at the piece's left end (after a jump, or y = 2) and its right end (the limit
// before the next jump, or y = x).
inline std::vector<double> class_sups(std::span<const Term> terms, std::uint64_t x, std::uint64_t q,
                                      const std::vector<std::uint8_t>& coprime,
                                      const std::vector<double>& coef, double phi) {
  std::vector<double> sup(q, 0.0);
  if (x < 2) return sup;
  std::vector<CompensatedSum> running(q);

  auto line = [&](std::uint64_t r, std::uint64_t y) { return coef[r] * static_cast<double>(y) / phi; };
  auto bump = [&](std::uint64_t r, double v) { sup[r] = std::max(sup[r], std::abs(v)); };

  std::size_t i = 0;
  for (; i < terms.size() && terms[i].n <= 2; ++i) running[terms[i].n % q].add(terms[i].weight);
  for (std::uint64_t r = 0; r < q; ++r) {
    if (coprime[r]) bump(r, running[r].value() - line(r, 2));
  }

  for (; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const std::uint64_t r = t.n % q;
    if (!coprime[r]) continue;
    bump(r, running[r].value() - line(r, t.n));
    running[r].add(t.weight);
    bump(r, running[r].value() - line(r, t.n));
  }

  for (std::uint64_t r = 0; r < q; ++r) {
    if (coprime[r]) bump(r, running[r].value() - line(r, x));
  }
  return sup;
}

}  // namespace detail

/// Sieve range needed to evaluate Ψ_h(x): [1, x + max(h, 0)].
inline std::uint64_t pair_sieve_limit(std::uint64_t x, std::int64_t h) {
  return x + static_cast<std::uint64_t>(std::max<std::int64_t>(h, 0));
}

inline PairList build_pair_list(const LambdaTable& table, std::uint64_t x, std::int64_t h) {
  detail::check_shift(h);
  if (x < 1) throw DomainError("cutoff x must be >= 1");
  if (table.start != 1 || table.last() < pair_sieve_limit(x, h)) {
    throw DomainError("Lambda table does not cover [1, x + max(h, 0)]");
  }
  PairList pairs{x, h, {}};
  for (std::uint64_t n = 2; n <= x; ++n) {
    const double ln = table.values[n - 1];
    if (ln == 0.0) continue;
    const double w = ln * table(static_cast<std::int64_t>(n) + h);
    if (w != 0.0) pairs.terms.push_back({n, w});
  }
  return pairs;
}

inline PairList build_pair_list(std::uint64_t x, std::int64_t h, const SieveConfig& config = {}) {
  detail::check_shift(h);
  if (x < 1) throw DomainError("cutoff x must be >= 1");
  return build_pair_list(lambda_range(1, pair_sieve_limit(x, h), config), x, h);
}

inline PrimeList build_prime_list(std::uint64_t x, const SieveConfig& config = {}) {
  PrimeList list{x, {}};
  for (std::uint64_t p : enumerate_primes(x, config)) {
    list.terms.push_back({p, std::log(static_cast<double>(p))});
  }
  return list;
}

inline PairCorrelation psi(const PairList& pairs) {
  CompensatedSum sum;
  for (const auto& t : pairs.terms) sum.add(t.weight);
  return {pairs.x, pairs.h, sum.value()};
}

/// Ψ_h(x) = Σ_{n <= x} Λ(n)Λ(n+h), with Λ(m) = 0 for m <= 0.
inline PairCorrelation psi(std::uint64_t x, std::int64_t h, const SieveConfig& config = {}) {
  return psi(build_pair_list(x, h, config));
}

inline double psi_progression(const PairList& pairs, std::uint64_t q, std::int64_t a) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  const std::uint64_t r = detail::reduce(a, q);
  CompensatedSum sum;
  for (const auto& t : pairs.terms) {
    if (t.n % q == r) sum.add(t.weight);
  }
  return sum.value();
}

/// Σ_{n <= x, n ≡ a (mod q)} Λ(n)Λ(n+h).
inline double psi_progression(std::uint64_t x, std::int64_t h, std::uint64_t q, std::int64_t a,
                              const SieveConfig& config = {}) {
  return psi_progression(build_pair_list(x, h, config), q, a);
}

/// Main term 𝔖(h)·y/φ(q) of one admissible class.
inline double geh2_main_term(double singular_series, std::uint64_t y, std::uint64_t phi) {
  return singular_series * static_cast<double>(y) / static_cast<double>(phi);
}

inline bool geh2_indicator(std::int64_t a, std::int64_t h, std::uint64_t q) {
  const auto qs = static_cast<std::int64_t>(q);
  return std::gcd(detail::reduce(a, q), q) == 1 && std::gcd(detail::reduce(a + h % qs, q), q) == 1;
}

inline double geh2_error(const PairList& pairs, std::uint64_t q, std::int64_t a, const SingularSeriesValue& ss) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  if (std::gcd(detail::reduce(a, q), q) != 1) throw DomainError("geh2_error requires gcd(a, q) = 1");
  if (ss.h != pairs.h) throw DomainError("singular series shift does not match pair list");
  const double restricted = psi_progression(pairs, q, a);
  if (!geh2_indicator(a, pairs.h, q)) return restricted;
  return restricted - geh2_main_term(ss.value, pairs.x, euler_phi(q));
}

/// E₂(x; q, a, h): restricted pair sum minus 1_{(a(a+h),q)=1}·𝔖(h)x/φ(q).
inline double geh2_error(std::uint64_t x, std::uint64_t q, std::int64_t a, std::int64_t h,
                         std::uint64_t truncation = kDefaultTruncation, const SieveConfig& config = {}) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  if (std::gcd(detail::reduce(a, q), q) != 1) throw DomainError("geh2_error requires gcd(a, q) = 1");
  return geh2_error(build_pair_list(x, h, config), q, a, singular_series(h, truncation));
}

inline ResidueErrorProfile residue_error_profile(const PairList& pairs, std::uint64_t q,
                                                 const SingularSeriesValue& ss,
                                                 Geh2Variant variant = Geh2Variant::endpoint) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  if (ss.h != pairs.h) throw DomainError("singular series shift does not match pair list");
  const Factorization fq = factorize(q);
  const std::uint64_t phi = euler_phi(fq);
  const auto coprime = detail::coprime_residues(fq);
  const std::uint64_t h_mod = detail::reduce(pairs.h, q);

  ResidueErrorProfile profile;
  profile.x = pairs.x;
  profile.q = q;
  profile.h = pairs.h;
  profile.variant = variant;
  profile.truncation = ss.truncation;
  profile.singular_series = ss.value;
  profile.main_term_unit = geh2_main_term(ss.value, pairs.x, phi);

  auto admissible = [&](std::uint64_t r) { return coprime[r] && coprime[(r + h_mod) % q]; };

  std::vector<double> per_class(q, 0.0);
  if (variant == Geh2Variant::endpoint) {
    std::vector<CompensatedSum> buckets(q);
    for (const auto& t : pairs.terms) buckets[t.n % q].add(t.weight);
    for (std::uint64_t r = 0; r < q; ++r) {
      if (!coprime[r]) continue;
      const double restricted = buckets[r].value();
      per_class[r] = admissible(r) ? restricted - profile.main_term_unit : restricted;
    }
  } else {
    std::vector<double> coef(q, 0.0);
    for (std::uint64_t r = 0; r < q; ++r) coef[r] = admissible(r) ? ss.value : 0.0;
    per_class = detail::class_sups(pairs.terms, pairs.x, q, coprime, coef, static_cast<double>(phi));
  }

  // Residues are reported as a in [1, q]; residue 0 appears as a = q (only for q = 1).
  for (std::uint64_t a = 1; a <= q; ++a) {
    const std::uint64_t r = a % q;
    if (!coprime[r]) continue;
    const double e = per_class[r];
    profile.errors.emplace(a, e);
    if (std::abs(e) > profile.max_abs_error || profile.argmax == 0) {
      profile.max_abs_error = std::abs(e);
      profile.argmax = a;
    }
  }
  return profile;
}

inline ResidueErrorProfile residue_error_profile(std::uint64_t x, std::uint64_t q, std::int64_t h,
                                                 std::uint64_t truncation = kDefaultTruncation,
                                                 Geh2Variant variant = Geh2Variant::endpoint,
                                                 const SieveConfig& config = {}) {
  return residue_error_profile(build_pair_list(x, h, config), q, singular_series(h, truncation), variant);
}

inline double eh_error_sup(const PrimeList& primes, std::uint64_t q) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  if (primes.x < 2) return 0.0;
  const Factorization fq = factorize(q);
  const auto coprime = detail::coprime_residues(fq);
  const std::vector<double> coef(q, 1.0);
  const auto sups =
      detail::class_sups(primes.terms, primes.x, q, coprime, coef, static_cast<double>(euler_phi(fq)));
  double best = 0.0;
  for (std::uint64_t r = 0; r < q; ++r) {
    if (coprime[r]) best = std::max(best, sups[r]);
  }
  return best;
}

/// sup over real y in [2, x] of max_{(a,q)=1} |θ(y; q, a) - y/φ(q)|; 0 for x < 2.
inline double eh_error_sup(std::uint64_t x, std::uint64_t q, const SieveConfig& config = {}) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  if (x < 2) return 0.0;
  return eh_error_sup(build_prime_list(x, config), q);
}

/// Checks Σ_{a: (a,q)=(a+h,q)=1} Σ_{n<=x, n≡a} Λ(n)Λ(n+h) = Σ_{n<=x, (n(n+h),q)=1} Λ(n)Λ(n+h),
/// evaluating the two sides by separate enumerations.
inline DecompositionCheck residue_decomposition_check(const LambdaTable& table, const PairList& pairs,
                                                      std::uint64_t q) {
  if (q < 1) throw DomainError("modulus q must be >= 1");
  const std::int64_t h = pairs.h;
  DecompositionCheck check;

  CompensatedSum residue_side;
  for (std::uint64_t a = 1; a <= q; ++a) {
    if (!geh2_indicator(static_cast<std::int64_t>(a), h, q)) continue;
    ++check.contributing_residues;
    residue_side.add(psi_progression(pairs, q, static_cast<std::int64_t>(a)));
  }

  CompensatedSum direct_side;
  const auto qs = static_cast<std::int64_t>(q);
  for (std::int64_t n = 1; n <= static_cast<std::int64_t>(pairs.x); ++n) {
    if (std::gcd(n, qs) != 1 || std::gcd(n + h, qs) != 1) continue;
    direct_side.add(table(n) * table(n + h));
  }

  check.residue_side = residue_side.value();
  check.direct_side = direct_side.value();
  check.residual = std::abs(check.residue_side - check.direct_side);
  check.pass = check.residual <= 1e-9 * (1.0 + std::abs(check.residue_side));
  return check;
}

inline DecompositionCheck residue_decomposition_check(std::uint64_t x, std::uint64_t q, std::int64_t h,
                                                      const SieveConfig& config = {}) {
  detail::check_shift(h);
  if (x < 1) throw DomainError("cutoff x must be >= 1");
  const LambdaTable table = lambda_range(1, pair_sieve_limit(x, h), config);
  return residue_decomposition_check(table, build_pair_list(table, x, h), q);
}

}  // namespace geh
