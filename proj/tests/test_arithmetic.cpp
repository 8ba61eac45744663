#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hecke/arithmetic.hpp"

using namespace hecke;

namespace {

std::vector<std::int64_t> trial_division_primes(std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 2; n <= limit; ++n) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime)
      out.push_back(n);
  }
  return out;
}

} // namespace

TEST(Sieve, SmallLimits) {
  EXPECT_EQ(sieve_primes(10), (std::vector<std::int64_t>{2, 3, 5, 7}));
  EXPECT_EQ(sieve_primes(2), (std::vector<std::int64_t>{2}));
  EXPECT_EQ(sieve_primes(100).size(), 25u);
}

TEST(Sieve, MatchesTrialDivision) { EXPECT_EQ(sieve_primes(5000), trial_division_primes(5000)); }

TEST(Sieve, Errors) {
  EXPECT_THROW(sieve_primes(1), DomainError);
  EXPECT_THROW(sieve_primes(1'000'000, 1000), ResourceError);
}

TEST(Factorize, RecomposesAndOrdersPrimes) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 2'000'000'000'000ULL);
    const auto f = factorize(n);
    EXPECT_EQ(f.recompose(), n);
    for (std::size_t j = 0; j < f.factors.size(); ++j) {
      EXPECT_TRUE(is_prime(f.factors[j].prime));
      EXPECT_GE(f.factors[j].exponent, 1);
      if (j) {
        EXPECT_LT(f.factors[j - 1].prime, f.factors[j].prime);
      }
    }
  }
  EXPECT_TRUE(factorize(1).factors.empty());
}

TEST(Multiplicative, SpotValues) {
  EXPECT_DOUBLE_EQ(von_mangoldt(8), std::log(2.0));
  EXPECT_EQ(von_mangoldt(6), 0.0);
  EXPECT_EQ(von_mangoldt(1), 0.0);
  EXPECT_EQ(psi_index(1), 1);
  EXPECT_EQ(psi_index(6), 12);
  EXPECT_EQ(psi_index(4), 6);
  EXPECT_EQ(euler_phi(12), 4);
  EXPECT_EQ(divisor_count(12), 6);
  EXPECT_EQ(divisors(12), (std::vector<std::int64_t>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(gcd(12, 18), 6);
  EXPECT_TRUE(is_square(49));
  EXPECT_FALSE(is_square(50));
  EXPECT_FALSE(is_square(-4));
}

TEST(Multiplicative, PsiIsMultiplicative) {
  std::mt19937_64 rng(11);
  int tested = 0;
  while (tested < 300) {
    const std::int64_t a = 1 + rng() % 1'000'000, b = 1 + rng() % 1'000'000;
    if (gcd(a, b) != 1)
      continue;
    EXPECT_EQ(psi_index(a * b), psi_index(a) * psi_index(b));
    ++tested;
  }
}

TEST(Multiplicative, PhiDivisorSum) {
  for (std::int64_t n = 1; n <= 10000; ++n) {
    std::int64_t s = 0;
    for (std::int64_t d : divisors(n))
      s += euler_phi(d);
    ASSERT_EQ(s, n);
  }
}

TEST(Multiplicative, VonMangoldtDivisorSum) {
  for (std::int64_t n = 1; n <= 10000; ++n) {
    double s = 0;
    for (std::int64_t d : divisors(n))
      s += von_mangoldt(d);
    ASSERT_NEAR(s, std::log(static_cast<double>(n)), 1e-12);
  }
}

TEST(Gegenbauer, SpotValues) {
  EXPECT_EQ(gegenbauer_coeff(0, 1, 12), -1);
  EXPECT_EQ(gegenbauer_coeff(1, 1, 12), -1);
  EXPECT_EQ(gegenbauer_coeff(0, 1, 4), -1);
  EXPECT_THROW(gegenbauer_coeff(2, 1, 12), DomainError);
}

TEST(Gegenbauer, AgreesWithComplexRoots) {
  for (std::int64_t n = 1; n <= 30; ++n)
    for (std::int64_t t = 0; t * t < 4 * n; ++t)
      for (int s : {-1, 1})
        for (int k = 3; k <= 20; ++k) {
          const double tt = s * t;
          const std::complex<double> rho(tt / 2, std::sqrt(4.0 * n - tt * tt) / 2);
          const auto q = (std::pow(rho, k - 1) - std::pow(std::conj(rho), k - 1)) / (rho - std::conj(rho));
          const double exact = gegenbauer_coeff(s * t, n, k).get_d();
          const double scale = std::pow(static_cast<double>(n), (k - 2) / 2.0) * k;
          EXPECT_LE(std::abs(q.real() - exact), 1e-12 * scale);
          EXPECT_EQ(detail::gegenbauer_fast(s * t, n, k), gegenbauer_coeff(s * t, n, k));
        }
}

TEST(Gegenbauer, FastPathFallsBackOnOverflow) {
  EXPECT_EQ(detail::gegenbauer_fast(3, 99991, 40), gegenbauer_coeff(3, 99991, 40));
}

TEST(Crt, Examples) {
  EXPECT_EQ(crt_merge(1, 3, 1, 12), (Residue{1, 12}));
  EXPECT_FALSE(crt_merge(0, 2, 1, 4).has_value());
  EXPECT_EQ(crt_merge(2, 5, 3, 20), (Residue{7, 20}));
  EXPECT_THROW(crt_merge(1, 5, 1, 12), DomainError);
}

TEST(Crt, ExhaustiveScan) {
  for (std::int64_t N = 1; N <= 60; ++N)
    for (std::int64_t c : divisors(N)) {
      const std::int64_t c2 = N / c, modulus = N / gcd(c, c2);
      for (std::int64_t d = 0; d < c; ++d)
        for (std::int64_t e = 0; e < c2; ++e) {
          std::optional<std::int64_t> found;
          for (std::int64_t y = 0; y < modulus; ++y)
            if (mod(y - d, c) == 0 && mod(y - e, c2) == 0) {
              found = y;
              break;
            }
          const auto got = crt_merge(d, c, e, N);
          ASSERT_EQ(got.has_value(), found.has_value());
          if (got) {
            EXPECT_EQ(got->value, *found);
            EXPECT_EQ(got->modulus, modulus);
          }
        }
    }
}

TEST(Conversion, ToDoubleRoundsToNearest) {
  const Integer big = ipow(Integer(3), 60);
  EXPECT_EQ(to_double(big), std::strtod(big.get_str().c_str(), nullptr));
  EXPECT_EQ(to_double(Integer(-24)), -24.0);
}
