#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hecke/errors.hpp"

namespace hecke {

using Integer = mpz_class;
// mpq_class keeps numerator/denominator coprime with a positive denominator
// after every operation.
using Rational = mpq_class;

inline std::string to_string(const Integer &z) { return z.get_str(); }
inline std::string to_string(const Rational &q) { return q.get_str(); }

/// Nearest double (mpz_get_d truncates instead of rounding).
inline double to_double(const Integer &z) {
  if (z.fits_slong_p())
    return static_cast<double>(z.get_si());
  return std::strtod(z.get_str().c_str(), nullptr);
}

// ---------------------------------------------------------------------------
// Sieve and factorization

inline constexpr std::size_t kDefaultSieveBudgetBytes = std::size_t{1} << 30;

/// Primes <= limit in ascending order. The sieve uses one byte per integer;
/// limits whose table would exceed `budget_bytes` raise ResourceError.
inline std::vector<std::int64_t> sieve_primes(std::int64_t limit,
                                              std::size_t budget_bytes = kDefaultSieveBudgetBytes) {
  if (limit < 2)
    throw DomainError("sieve_primes: limit must be >= 2");
  if (static_cast<std::uint64_t>(limit) + 1 > budget_bytes)
    throw ResourceError("sieve_primes: limit " + std::to_string(limit) +
                        " exceeds the sieve memory budget");
  std::vector<char> composite(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<std::int64_t> primes;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[i])
      continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i)
      composite[j] = 1;
  }
  return primes;
}

namespace detail {
// Primes up to 10^6, built once and read-only afterwards (thread-safe static init).
inline const std::vector<std::int64_t> &small_primes() {
  static const std::vector<std::int64_t> primes = sieve_primes(1'000'000);
  return primes;
}
} // namespace detail

struct PrimePower {
  std::int64_t prime;
  int exponent;
  friend bool operator==(const PrimePower &, const PrimePower &) = default;
};

struct FactoredInteger {
  std::int64_t value = 1;
  std::vector<PrimePower> factors; // primes strictly increasing, exponents >= 1

  std::int64_t recompose() const {
    std::int64_t v = 1;
    for (const auto &f : factors)
      for (int i = 0; i < f.exponent; ++i)
        v *= f.prime;
    return v;
  }
};

/// Trial division against the shared sieve; adequate for n up to ~10^12.
inline FactoredInteger factorize(std::int64_t n) {
  if (n < 1)
    throw DomainError("factorize: n must be positive");
  FactoredInteger out;
  out.value = n;
  std::int64_t rest = n;
  auto divide_out = [&](std::int64_t p) {
    if (rest % p != 0)
      return;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  };
  for (std::int64_t p : detail::small_primes()) {
    if (p * p > rest)
      break;
    divide_out(p);
  }
  if (rest > 1) {
    const std::int64_t last = detail::small_primes().back();
    if (last * last >= rest) {
      out.factors.push_back({rest, 1});
    } else {
      for (std::int64_t p = last + 2; p * p <= rest; p += 2)
        divide_out(p);
      if (rest > 1)
        out.factors.push_back({rest, 1});
    }
  }
  return out;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2)
    return false;
  auto f = factorize(n);
  return f.factors.size() == 1 && f.factors[0].exponent == 1;
}

// ---------------------------------------------------------------------------
// Elementary multiplicative functions

inline std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

inline std::int64_t lcm(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

/// Non-negative residue of a mod m (m > 0).
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (const auto &f : factorize(n).factors)
    result = result / f.prime * (f.prime - 1);
  return result;
}

/// ψ(N) = N ∏_{p|N} (1 + 1/p), the index of Γ0(N) in SL2(Z).
inline std::int64_t psi_index(std::int64_t n) {
  std::int64_t result = n;
  for (const auto &f : factorize(n).factors)
    result = result / f.prime * (f.prime + 1);
  return result;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (const auto &f : factorize(n).factors) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int e = 1; e <= f.exponent; ++e) {
      pk *= f.prime;
      for (std::size_t i = 0; i < base; ++i)
        out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::int64_t divisor_count(std::int64_t n) {
  std::int64_t count = 1;
  for (const auto &f : factorize(n).factors)
    count *= f.exponent + 1;
  return count;
}

inline std::int64_t isqrt(std::int64_t n) {
  if (n < 0)
    throw DomainError("isqrt: negative argument");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n)
    --r;
  while ((r + 1) * (r + 1) <= n)
    ++r;
  return r;
}

inline bool is_square(std::int64_t n) {
  if (n < 0)
    return false;
  const std::int64_t r = isqrt(n);
  return r * r == n;
}

/// Λ(m): ln p when m is a positive power of the prime p, else 0.
inline double von_mangoldt(std::int64_t m) {
  if (m < 1)
    throw DomainError("von_mangoldt: m must be positive");
  if (m == 1)
    return 0.0;
  const auto f = factorize(m);
  return f.factors.size() == 1 ? std::log(static_cast<double>(f.factors[0].prime)) : 0.0;
}

/// The prime p when m = p^a with a >= 1, otherwise nullopt.
inline std::optional<PrimePower> as_prime_power(std::int64_t m) {
  if (m < 2)
    return std::nullopt;
  const auto f = factorize(m);
  if (f.factors.size() != 1)
    return std::nullopt;
  return f.factors[0];
}

inline Integer ipow(const Integer &base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

inline Integer ipow(std::int64_t base, unsigned long exponent) {
  return ipow(Integer(static_cast<long>(base)), exponent);
}

// ---------------------------------------------------------------------------
// Trace-formula helpers

/// (ρ^{k-1} - ρ̄^{k-1})/(ρ - ρ̄) for the roots of x² - t x + n, computed by
/// P_0 = 1, P_1 = t, P_j = t P_{j-1} - n P_{j-2}; returns P_{k-2}.
inline Integer gegenbauer_coeff(std::int64_t t, std::int64_t n, int k) {
  if (k < 2)
    throw DomainError("gegenbauer_coeff: k must be >= 2");
  if (t * t >= 4 * n)
    throw DomainError("gegenbauer_coeff: requires t^2 < 4n");
  Integer prev = 1;
  Integer cur = static_cast<long>(t);
  if (k == 2)
    return prev;
  Integer next;
  const Integer tz = static_cast<long>(t);
  const Integer nz = static_cast<long>(n);
  for (int j = 2; j <= k - 2; ++j) {
    mpz_mul(next.get_mpz_t(), tz.get_mpz_t(), cur.get_mpz_t());
    mpz_submul(next.get_mpz_t(), nz.get_mpz_t(), prev.get_mpz_t());
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return cur;
}

namespace detail {
/// gegenbauer_coeff with a 128-bit fast path; falls back to GMP on overflow.
inline Integer gegenbauer_fast(std::int64_t t, std::int64_t n, int k) {
  if (k == 2)
    return 1;
  __int128 prev = 1, cur = t;
  const __int128 tt = t, nn = n;
  for (int j = 2; j <= k - 2; ++j) {
    __int128 a, b, next;
    if (__builtin_mul_overflow(tt, cur, &a) || __builtin_mul_overflow(nn, prev, &b) ||
        __builtin_sub_overflow(a, b, &next))
      return gegenbauer_coeff(t, n, k);
    prev = cur;
    cur = next;
  }
  if (cur >= INT64_MIN && cur <= INT64_MAX)
    return Integer(static_cast<long>(cur));
  const bool negative = cur < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(cur) : static_cast<unsigned __int128>(cur);
  Integer out = static_cast<unsigned long>(mag >> 64);
  out <<= 64;
  out += static_cast<unsigned long>(mag & 0xffffffffffffffffULL);
  return negative ? Integer(-out) : out;
}
} // namespace detail

/// Residue y modulo N/(c, N/c) with y ≡ d (mod c) and y ≡ e (mod N/c), or
/// nullopt when d ≢ e modulo (c, N/c). Requires c | N.
struct Residue {
  std::int64_t value;
  std::int64_t modulus;
  friend bool operator==(const Residue &, const Residue &) = default;
};

inline std::optional<Residue> crt_merge(std::int64_t d, std::int64_t c, std::int64_t e,
                                        std::int64_t N) {
  if (c <= 0 || N <= 0 || N % c != 0)
    throw DomainError("crt_merge: c must divide N");
  const std::int64_t c2 = N / c;
  const std::int64_t g = gcd(c, c2);
  if (mod(d - e, g) != 0)
    return std::nullopt;
  const std::int64_t M = N / g; // lcm(c, N/c)
  // Solve y = d + c*s with c*s ≡ e - d (mod c2).
  const std::int64_t c_red = c / g, c2_red = c2 / g;
  const std::int64_t rhs = mod((e - d) / g, c2_red);
  std::int64_t s = 0;
  if (c2_red > 1) {
    // Inverse of c_red modulo c2_red by extended Euclid.
    std::int64_t r0 = mod(c_red, c2_red), r1 = c2_red, x0 = 1, x1 = 0;
    while (r1 != 0) {
      const std::int64_t q = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
      std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    }
    s = static_cast<std::int64_t>((static_cast<__int128>(mod(x0, c2_red)) * rhs) % c2_red);
  }
  return Residue{mod(d + c * s, M), M};
}

} // namespace hecke
