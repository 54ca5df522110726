#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "frozen_values.hpp"
#include "geh/multiplicative.hpp"
#include "oracles.hpp"

namespace geh {
namespace {

TEST(Factorize, Examples) {
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_EQ(factorize(12).factors, (std::vector<PrimePower>{{2, 2}, {3, 1}}));
  EXPECT_EQ(factorize((1u << 20) * 3).factors, (std::vector<PrimePower>{{2, 20}, {3, 1}}));
  EXPECT_EQ(factorize(999983).factors, (std::vector<PrimePower>{{999983, 1}}));
  // Large semiprime near the cap.
  const std::uint64_t p = 33554393, q = 33554383;  // primes below 2^25
  EXPECT_EQ(factorize(p * q).factors, (std::vector<PrimePower>{{q, 1}, {p, 1}}));
}

TEST(Factorize, Errors) {
  EXPECT_THROW(factorize(0), DomainError);
  EXPECT_THROW(factorize(kMaxFactorizable + 1), ResourceError);
}

TEST(Factorize, ProductAndOrderInvariant) {
  for (std::uint64_t n = 1; n <= 20'000; ++n) {
    const auto f = factorize(n);
    std::uint64_t prod = 1, last = 1;
    for (const auto& [p, e] : f.factors) {
      ASSERT_GT(p, last);
      ASSERT_GE(e, 1u);
      ASSERT_TRUE(oracle::is_prime(p));
      for (unsigned k = 0; k < e; ++k) prod *= p;
      last = p;
    }
    ASSERT_EQ(prod, n);
  }
}

TEST(EulerPhi, Examples) {
  EXPECT_EQ(euler_phi(1), 1u);
  EXPECT_EQ(euler_phi(12), 4u);
  for (std::uint64_t p : {2u, 3u, 97u, 7919u}) EXPECT_EQ(euler_phi(p), p - 1);
}

TEST(Moebius, Examples) {
  EXPECT_EQ(moebius(1), 1);
  EXPECT_EQ(moebius(12), 0);
  EXPECT_EQ(moebius(30), -1);
  EXPECT_EQ(moebius(6), 1);
}

TEST(MultiplicativeIdentities, DivisorSums) {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    std::uint64_t phi_sum = 0;
    std::int64_t mu_sum = 0;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d) continue;
      phi_sum += euler_phi(d);
      mu_sum += moebius(d);
    }
    ASSERT_EQ(phi_sum, n);
    ASSERT_EQ(mu_sum, n == 1 ? 1 : 0);
  }
}

TEST(EulerPhi, MatchesCountingOracle) {
  for (std::uint64_t n = 1; n <= 600; ++n) ASSERT_EQ(euler_phi(n), oracle::totient(n));
}

TEST(Phi2, Examples) {
  EXPECT_EQ(phi2(2, 2), 1u);
  EXPECT_EQ(phi2(1, 2), 1u);
  EXPECT_EQ(phi2(15, 2), 3u);
  EXPECT_EQ(phi2(3, 2), 1u);
  // 2^α with h = 2 gives 2^(α-1).
  for (unsigned a = 1; a <= 10; ++a) EXPECT_EQ(phi2(1u << a, 2), 1u << (a - 1));
  EXPECT_THROW(phi2(5, 0), DomainError);
}

TEST(Phi2, MatchesEnumeration) {
  for (std::int64_t h : {2, 4, 6, -2}) {
    for (std::uint64_t q = 1; q <= 2000; ++q) ASSERT_EQ(phi2(q, h), oracle::phi2(q, h)) << q << " " << h;
  }
  for (std::int64_t h : {1, 3, -7, 15}) {
    for (std::uint64_t q = 1; q <= 300; ++q) ASSERT_EQ(phi2(q, h), oracle::phi2(q, h)) << q << " " << h;
  }
}

TEST(Phi2, MultiplicativeOnCoprimePairs) {
  for (std::uint64_t a = 1; a <= 10'000; ++a) {
    for (std::uint64_t b = 1; a * b <= 10'000; ++b) {
      if (std::gcd(a, b) != 1) continue;
      ASSERT_EQ(phi2(a * b, 2), phi2(a, 2) * phi2(b, 2));
    }
  }
}

TEST(Phi2, BoundedByTotient) {
  for (std::uint64_t q = 1; q <= 5000; ++q) {
    ASSERT_LE(phi2(q, 2), euler_phi(q));
    ASSERT_LE(phi2(q, 3), euler_phi(q));
  }
}

TEST(SingularSeries, OddShiftIsZero) {
  for (std::int64_t h : {3, -1, 1, 15}) {
    const auto s = singular_series(h, 1000);
    EXPECT_EQ(s.value, 0.0);
    EXPECT_EQ(s.tail_bound, 0.0);
  }
}

TEST(SingularSeries, ShiftSixDoublesTwo) {
  for (std::uint64_t P : {3ull, 1000ull, 1'000'000ull}) {
    EXPECT_EQ(singular_series(6, P).value / singular_series(2, P).value, 2.0);
  }
  EXPECT_EQ(singular_series(-2).value, singular_series(2).value);
  EXPECT_EQ(singular_series(4).value, singular_series(2).value);
  // 2 · (3-1)/(3-2) · (5-1)/(5-2) for h = 30.
  EXPECT_DOUBLE_EQ(singular_series(30).value, singular_series(2).value * 2.0 * (4.0 / 3.0));
}

TEST(SingularSeries, FrozenValuesAndTailBound) {
  const auto s6 = singular_series(2, 1'000'000);
  const auto s5 = singular_series(2, 100'000);
  EXPECT_NEAR(s6.value, frozen::kSingularSeries2At1e6, 1e-12);
  EXPECT_NEAR(s5.value, frozen::kSingularSeries2At1e5, 1e-12);
  EXPECT_NEAR(s6.value, 1.3203236316937392, 1e-6);  // twice the twin-prime constant
  EXPECT_NEAR(s5.tail_bound, std::exp(2.0 / 99999.0) - 1.0, 1e-10 * s5.tail_bound);  // exp(u) - 1 cancels; the library uses expm1
  EXPECT_LE(std::abs(s5.value - s6.value), s6.value * s5.tail_bound);
  EXPECT_EQ(singular_series(2).truncation, kDefaultTruncation);
}

TEST(SingularSeries, RefinementWithinTailBound) {
  std::vector<std::uint64_t> Ps{3, 10, 100, 1000, 10'000, 100'000};
  for (std::size_t i = 0; i < Ps.size(); ++i) {
    for (std::size_t j = i + 1; j < Ps.size(); ++j) {
      const auto a = singular_series(2, Ps[i]);
      const auto b = singular_series(2, Ps[j]);
      EXPECT_LT(b.tail_bound, a.tail_bound);
      EXPECT_LE(std::abs(a.value - b.value), b.value * a.tail_bound);
    }
  }
}

TEST(SingularSeries, Errors) {
  EXPECT_THROW(singular_series(0), DomainError);
  EXPECT_THROW(singular_series(2, 2), DomainError);
}

TEST(PartialSumPhi2OverPhi, Examples) {
  EXPECT_EQ(partial_sum_phi2_over_phi(1, 2), 1.0);
  EXPECT_EQ(partial_sum_phi2_over_phi(2, 2), 2.0);
  EXPECT_NEAR(partial_sum_phi2_over_phi(100, 2), frozen::kPartialSumPhi2OverPhi1e2, 1e-12 * 75);
  EXPECT_NEAR(partial_sum_phi2_over_phi(1000, 2), frozen::kPartialSumPhi2OverPhi1e3, 1e-12 * 750);
}

TEST(PartialSumPhi2OverPhi, MatchesDirectSummation) {
  double direct = 0.0;
  for (std::uint64_t q = 1; q <= 10'000; ++q) {
    direct += static_cast<double>(oracle::phi2(q, 2)) / static_cast<double>(euler_phi(q));
  }
  EXPECT_NEAR(partial_sum_phi2_over_phi(10'000, 2), direct, 1e-9 * direct);
}

}  // namespace
}  // namespace geh
