#include <gtest/gtest.h>

#include <cmath>

#include "hecke/hecke.hpp"
#include "test_support.hpp"

using namespace hecke;

namespace {

// ln of ∏ over newforms g of level m and lifts g(dz), d | N/m, of m: an
// explicit product over the divisor lattice, taken as one big integer.
double direct_level_log(const NewformDimensionTable &t) {
  Integer product = 1;
  for (const auto &[m, v] : t.nu)
    for (std::size_t lift = 0; lift < divisors(t.level / m).size(); ++lift)
      for (std::int64_t j = 0; j < v; ++j)
        product *= m;
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, product.get_mpz_t());
  return std::log(mantissa) + exponent * std::log(2.0);
}

} // namespace

TEST(NuTable, Examples) {
  const auto one = nu_table(HeckeSpace::trivial(12, 1));
  EXPECT_EQ(one.nu, (std::map<std::int64_t, std::int64_t>{{1, 1}}));
  const auto five = nu_table(HeckeSpace::trivial(4, 5));
  EXPECT_EQ(five.nu, (std::map<std::int64_t, std::int64_t>{{1, 0}, {5, 1}}));
  const auto two = nu_table(HeckeSpace::trivial(12, 2));
  EXPECT_EQ(two.nu.at(1), 1);
  EXPECT_EQ(two.nu.at(2), oracle::gamma0_dimension_oracle(2, 12) - 2);
}

TEST(NuTable, OnlyMultiplesOfTheConductor) {
  const auto t = nu_table(HeckeSpace(3, DirichletCharacter::quadratic(-4, 20)));
  for (const auto &[m, v] : t.nu)
    EXPECT_EQ(m % 4, 0);
  EXPECT_EQ(t.nu.size(), 2u); // 4 and 20
}

TEST(NuTable, ReconstructsDimension) {
  for (std::int64_t N = 1; N <= 60; ++N)
    for (int k : {4, 6}) {
      const HeckeSpace space = HeckeSpace::trivial(k, N);
      const auto t = nu_table(space);
      EXPECT_EQ(t.reconstructed_dimension(), TraceFormula(space).dimension()) << "N=" << N << " k=" << k;
      for (const auto &[m, v] : t.nu)
        EXPECT_GE(v, 0);
    }
  for (std::int64_t N : {4, 8, 12, 20, 28, 36})
    for (int k : {3, 5}) {
      const HeckeSpace space(k, DirichletCharacter::quadratic(-4, N));
      EXPECT_EQ(nu_table(space).reconstructed_dimension(), TraceFormula(space).dimension()) << N;
    }
}

TEST(LevelLog, Examples) {
  EXPECT_EQ(level_log_term(nu_table(HeckeSpace::trivial(12, 1))), 0.0);
  EXPECT_DOUBLE_EQ(level_log_term(nu_table(HeckeSpace::trivial(4, 5))), std::log(5.0));
  EXPECT_EQ(level_log_term(nu_table(HeckeSpace::trivial(4, 1))), 0.0);
}

TEST(LevelLog, MatchesDivisorLatticeExpansion) {
  for (std::int64_t N = 1; N <= 100; ++N) {
    const auto t = nu_table(HeckeSpace::trivial(4, N));
    const double direct = direct_level_log(t);
    EXPECT_NEAR(level_log_term(t), direct, 1e-12 * std::max(1.0, direct)) << N;
  }
}

TEST(LocalFactors, Classification) {
  EXPECT_EQ(local_linear_factors(5, 1, 2), 2);
  EXPECT_EQ(local_linear_factors(5, 1, 5), 1);
  EXPECT_EQ(local_linear_factors(25, 1, 5), 0);
  EXPECT_EQ(local_linear_factors(25, 25, 5), 1);
  // S_4(5): one newform of level 5, one linear factor at 5
  EXPECT_DOUBLE_EQ(hadamard_level_sum(nu_table(HeckeSpace::trivial(4, 5))), std::log(5.0));
}
