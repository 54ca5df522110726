#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "geh/correlations.hpp"
#include "geh/multiplicative.hpp"
#include "geh/sieve.hpp"
#include "geh/summation.hpp"

// Self-check suites behind the `check` subcommand. Each suite compares a
// library result against a direct enumeration written independently here.
namespace geh::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckSizes {
  std::uint64_t lambda_n = 100'000;
  std::uint64_t divisor_n = 10'000;
  std::uint64_t phi2_q = 2000;
  std::uint64_t multiplicative_n = 10'000;
  std::uint64_t partition_q = 100;
  std::uint64_t partition_x = 100'000;
  std::uint64_t decomposition_x = 100'000;

  static CheckSizes quick() {
    return {20'000, 2'000, 300, 2'000, 30, 20'000, 20'000};
  }
};

namespace detail {

// Λ(n) by trial division.
inline double naive_lambda(std::uint64_t n) {
  if (n < 2) return 0.0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::uint64_t m = n;
    while (m % p == 0) m /= p;
    return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return std::log(static_cast<double>(n));
}

inline std::uint64_t enumerate_phi2(std::uint64_t q, std::int64_t h) {
  std::uint64_t count = 0;
  const auto qs = static_cast<std::int64_t>(q);
  for (std::int64_t a = 1; a <= qs; ++a) {
    if (std::gcd(a, qs) == 1 && std::gcd(a + h, qs) == 1) ++count;
  }
  return count;
}

inline std::string describe(std::uint64_t checked, std::uint64_t failures) {
  std::ostringstream os;
  os << "checked=" << checked << " failures=" << failures;
  return os.str();
}

}  // namespace detail

inline CheckResult check_lambda_oracle(std::uint64_t max_n, const SieveConfig& config = {}) {
  const auto table = lambda_range(1, max_n, config);
  std::uint64_t failures = 0;
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    const double expected = detail::naive_lambda(n);
    const double got = table(static_cast<std::int64_t>(n));
    if (std::abs(got - expected) > 1e-12 * std::abs(expected)) ++failures;
  }
  return {"lambda_oracle", failures == 0, detail::describe(max_n, failures)};
}

inline CheckResult check_divisor_identity(std::uint64_t max_n, const SieveConfig& config = {}) {
  const auto table = lambda_range(1, max_n, config);
  std::uint64_t failures = 0;
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    CompensatedSum sum;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
      if (n % d != 0) continue;
      sum.add(table(static_cast<std::int64_t>(d)));
      if (d * d != n) sum.add(table(static_cast<std::int64_t>(n / d)));
    }
    if (std::abs(sum.value() - std::log(static_cast<double>(n))) > 1e-9) ++failures;
  }
  return {"divisor_identity", failures == 0, detail::describe(max_n, failures)};
}

inline CheckResult check_phi2_enumeration(std::uint64_t max_q) {
  std::uint64_t failures = 0, checked = 0;
  for (std::int64_t h : {2, 4, 6, -2}) {
    for (std::uint64_t q = 1; q <= max_q; ++q, ++checked) {
      if (phi2(q, h) != detail::enumerate_phi2(q, h)) ++failures;
    }
  }
  return {"phi2_enumeration", failures == 0, detail::describe(checked, failures)};
}

inline CheckResult check_multiplicative_identities(std::uint64_t max_n) {
  std::uint64_t failures = 0;
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    std::uint64_t phi_sum = 0;
    std::int64_t mu_sum = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
      if (n % d != 0) continue;
      phi_sum += euler_phi(d);
      mu_sum += moebius(d);
      if (d * d != n) {
        phi_sum += euler_phi(n / d);
        mu_sum += moebius(n / d);
      }
    }
    if (phi_sum != n || mu_sum != (n == 1 ? 1 : 0)) ++failures;
  }
  return {"phi_moebius_identities", failures == 0, detail::describe(max_n, failures)};
}

inline CheckResult check_singular_series() {
  const auto odd = singular_series(3);
  const auto two = singular_series(2);
  const auto six = singular_series(6);
  const bool ok = odd.value == 0.0 && odd.tail_bound == 0.0 && six.value / two.value == 2.0 && two.value > 0.0;
  return {"singular_series", ok, "S(3)=0; S(6)/S(2)=2"};
}

inline CheckResult check_partition(std::uint64_t x, std::uint64_t max_q, const SieveConfig& config = {}) {
  const auto pairs = build_pair_list(x, 2, config);
  const double total = psi(pairs).value;
  std::uint64_t failures = 0;
  for (std::uint64_t q = 1; q <= max_q; ++q) {
    CompensatedSum sum;
    for (std::uint64_t a = 0; a < q; ++a) sum.add(psi_progression(pairs, q, static_cast<std::int64_t>(a)));
    if (std::abs(sum.value() - total) > 1e-9 * total) ++failures;
  }
  return {"class_partition", failures == 0, detail::describe(max_q, failures)};
}

inline CheckResult check_residue_decomposition(std::uint64_t x, const SieveConfig& config = {}) {
  const std::int64_t h = 2;
  const auto table = lambda_range(1, pair_sieve_limit(x, h), config);
  const auto pairs = build_pair_list(table, x, h);
  std::uint64_t failures = 0, checked = 0;
  for (std::uint64_t q : {1, 3, 4, 5, 12, 30}) {
    ++checked;
    const auto c = residue_decomposition_check(table, pairs, q);
    if (!c.pass || c.contributing_residues != phi2(q, h)) ++failures;
  }
  return {"residue_decomposition", failures == 0, detail::describe(checked, failures)};
}

inline std::vector<CheckResult> run_all(const CheckSizes& sizes, const SieveConfig& config = {}) {
  return {
      check_lambda_oracle(sizes.lambda_n, config),
      check_divisor_identity(sizes.divisor_n, config),
      check_phi2_enumeration(sizes.phi2_q),
      check_multiplicative_identities(sizes.multiplicative_n),
      check_singular_series(),
      check_partition(sizes.partition_x, sizes.partition_q, config),
      check_residue_decomposition(sizes.decomposition_x, config),
  };
}

}  // namespace geh::checks
