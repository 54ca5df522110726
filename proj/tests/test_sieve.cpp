#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "frozen_values.hpp"
#include "geh/sieve.hpp"
#include "oracles.hpp"

namespace geh {
namespace {

TEST(EnumeratePrimes, SmallLimits) {
  EXPECT_EQ(enumerate_primes(10), (std::vector<std::uint64_t>{2, 3, 5, 7}));
  EXPECT_TRUE(enumerate_primes(1).empty());
  EXPECT_TRUE(enumerate_primes(0).empty());
  EXPECT_EQ(enumerate_primes(2), (std::vector<std::uint64_t>{2}));
}

TEST(EnumeratePrimes, CountToMillion) {
  EXPECT_EQ(enumerate_primes(1'000'000).size(), frozen::kPrimeCount1e6);
}

TEST(EnumeratePrimes, MatchesTrialDivisionAcrossSegmentSizes) {
  const auto expected = oracle::primes_upto(20'000);
  for (std::size_t seg : {1u, 7u, 1000u, 1u << 20}) {
    SieveConfig config;
    config.segment_size = seg;
    config.threads = 3;
    EXPECT_EQ(enumerate_primes(20'000, config), expected) << "segment " << seg;
  }
}

TEST(EnumeratePrimes, CapacityGuard) {
  EXPECT_THROW(enumerate_primes(kMaxSieveLimit + 1), ResourceError);
  SieveConfig config;
  config.max_limit = 100;
  EXPECT_THROW(enumerate_primes(101, config), ResourceError);
}

TEST(Isqrt, ExactAtSquares) {
  for (std::uint64_t r : {0ull, 1ull, 2ull, 3ull, 1000ull, 4294967295ull}) {
    EXPECT_EQ(isqrt(r * r), r);
    if (r > 0) {
      EXPECT_EQ(isqrt(r * r - 1), r - 1);
    }
  }
}

TEST(LambdaRange, Definitions) {
  const auto one = lambda_range(1, 1);
  EXPECT_EQ(one(1), 0.0);
  EXPECT_FALSE(one.prime_at(1));

  const auto t = lambda_range(8, 9);
  EXPECT_EQ(t(8), std::log(2.0));
  EXPECT_EQ(t(9), std::log(3.0));
  EXPECT_FALSE(t.prime_at(8));
  EXPECT_EQ(t(-3), 0.0);
  EXPECT_EQ(t(0), 0.0);
  EXPECT_THROW((void)t(10), DomainError);
}

TEST(LambdaRange, RangeErrors) {
  EXPECT_THROW(lambda_range(10, 9), DomainError);
  EXPECT_THROW(lambda_range(0, 9), DomainError);
  SieveConfig config;
  config.max_table_span = 10;
  EXPECT_THROW(lambda_range(1, 11, config), ResourceError);
}

TEST(LambdaRange, OracleOnSmallIntegers) {
  const auto t = lambda_range(1, 100'000);
  EXPECT_GE(t.base_prime_bound, isqrt(100'000));
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const double expected = oracle::lambda(static_cast<std::int64_t>(n));
    const double got = t(static_cast<std::int64_t>(n));
    ASSERT_LE(std::abs(got - expected), 1e-12 * expected) << n;
    ASSERT_EQ(t.prime_at(n), oracle::is_prime(n)) << n;
  }
}

TEST(LambdaRange, OracleOnShiftedWindow) {
  const std::uint64_t lo = 1'000'000, hi = 1'010'000;
  SieveConfig config;
  config.segment_size = 4096;
  const auto t = lambda_range(lo, hi, config);
  for (std::uint64_t n = lo; n <= hi; ++n) {
    ASSERT_LE(std::abs(t(static_cast<std::int64_t>(n)) - oracle::lambda(static_cast<std::int64_t>(n))), 1e-12 * 14)
        << n;
  }
}

TEST(LambdaRange, InvariantsHold) {
  const auto t = lambda_range(1, 50'000);
  for (std::uint64_t n = 1; n <= t.last(); ++n) {
    const double v = t(static_cast<std::int64_t>(n));
    if (t.prime_at(n)) {
      ASSERT_GT(v, 0.0);
    }
    ASSERT_GE(v, 0.0);
  }
}

TEST(LambdaRange, DivisorIdentity) {
  const auto t = lambda_range(1, 10'000);
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    double s = 0.0;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) s += t(static_cast<std::int64_t>(d));
    }
    ASSERT_NEAR(s, std::log(static_cast<double>(n)), 1e-9) << n;
  }
}

TEST(LambdaRange, SegmentAndThreadIndependence) {
  const std::uint64_t lo = 123'457, hi = 400'000;
  SieveConfig base;
  base.segment_size = 1000;
  const auto reference = lambda_range(lo, hi, base);
  for (std::size_t seg : {10'000u, 100'000u}) {
    for (unsigned threads : {1u, 4u}) {
      SieveConfig c;
      c.segment_size = seg;
      c.threads = threads;
      const auto t = lambda_range(lo, hi, c);
      ASSERT_EQ(t.values, reference.values);
      ASSERT_EQ(t.is_prime, reference.is_prime);
    }
  }
}

TEST(ChebyshevTheta, Examples) {
  EXPECT_DOUBLE_EQ(chebyshev_theta_progression(10, 4, 1), std::log(5.0));
  EXPECT_EQ(chebyshev_theta_progression(1.5, 1, 0), 0.0);
  double direct = 0.0;
  for (double p : {2, 3, 5, 7, 11, 13, 17, 19}) direct += std::log(p);
  EXPECT_NEAR(chebyshev_theta_progression(20, 1, 0), direct, 1e-12 * direct);
  // Real cutoffs floor; negative residues reduce.
  EXPECT_EQ(chebyshev_theta_progression(10.9, 4, -3), chebyshev_theta_progression(10, 4, 1));
  EXPECT_THROW(chebyshev_theta_progression(10, 0, 1), DomainError);
}

TEST(ChebyshevTheta, AdditiveOverClasses) {
  for (std::uint64_t q : {1u, 2u, 6u, 7u, 30u, 97u}) {
    double total = 0.0;
    for (std::uint64_t a = 0; a < q; ++a) total += chebyshev_theta_progression(50'000, q, static_cast<std::int64_t>(a));
    const double whole = chebyshev_theta_progression(50'000, 1, 0);
    EXPECT_NEAR(total, whole, 1e-9 * whole) << q;
  }
}

}  // namespace
}  // namespace geh
