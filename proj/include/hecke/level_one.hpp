#pragma once

#include <cstdint>
#include <vector>

#include "hecke/arithmetic.hpp"

// Independent ground truth for the trace formula: exact q-expansions of
// level-one modular forms, Hecke operators acting on coefficients, and the
// classical genus formula for dim S_k(Γ0(N)).

namespace hecke::oracle {

struct QExpansion {
  int weight = 0;
  std::vector<Integer> coeffs; // a_0 .. a_M

  QExpansion() = default;
  QExpansion(int k, std::int64_t precision) : weight(k), coeffs(precision + 1, 0) {}

  std::int64_t precision() const { return static_cast<std::int64_t>(coeffs.size()) - 1; }
  const Integer &operator[](std::size_t i) const { return coeffs[i]; }
  Integer &operator[](std::size_t i) { return coeffs[i]; }
  bool is_cuspidal() const { return coeffs.empty() || coeffs[0] == 0; }

  friend bool operator==(const QExpansion &, const QExpansion &) = default;
};

/// Truncated product; the result has the smaller of the two precisions.
inline QExpansion multiply(const QExpansion &f, const QExpansion &g) {
  const std::int64_t M = std::min(f.precision(), g.precision());
  QExpansion out(f.weight + g.weight, M);
  for (std::int64_t i = 0; i <= M; ++i) {
    if (f[i] == 0)
      continue;
    for (std::int64_t j = 0; i + j <= M; ++j)
      if (g[j] != 0)
        mpz_addmul(out[i + j].get_mpz_t(), f[i].get_mpz_t(), g[j].get_mpz_t());
  }
  return out;
}

inline Integer divisor_sigma(std::int64_t n, int power) {
  Integer s = 0;
  for (std::int64_t d : divisors(n))
    s += ipow(d, power);
  return s;
}

/// E4 = 1 + 240 Σ σ3(n) qⁿ and E6 = 1 - 504 Σ σ5(n) qⁿ.
inline QExpansion eisenstein_q(int weight, std::int64_t M) {
  if (M < 1)
    throw DomainError("eisenstein_q: precision must be >= 1");
  long scale = 0;
  if (weight == 4)
    scale = 240;
  else if (weight == 6)
    scale = -504;
  else
    throw DomainError("eisenstein_q: only weights 4 and 6 are provided");
  QExpansion out(weight, M);
  out[0] = 1;
  for (std::int64_t n = 1; n <= M; ++n)
    out[n] = scale * divisor_sigma(n, weight - 1);
  return out;
}

/// Δ = (E4³ - E6²)/1728.
inline QExpansion delta_q(std::int64_t M) {
  const auto e4 = eisenstein_q(4, M);
  const auto e6 = eisenstein_q(6, M);
  const auto e4cubed = multiply(multiply(e4, e4), e4);
  const auto e6sq = multiply(e6, e6);
  QExpansion out(12, M);
  for (std::int64_t i = 0; i <= M; ++i) {
    Integer diff = e4cubed[i] - e6sq[i];
    if (!mpz_divisible_ui_p(diff.get_mpz_t(), 1728))
      throw ConsistencyError("delta_q: E4^3 - E6^2 not divisible by 1728 at q^" + std::to_string(i));
    mpz_divexact_ui(out[i].get_mpz_t(), diff.get_mpz_t(), 1728);
  }
  return out;
}

/// q ∏_{n>=1} (1 - qⁿ)^24, multiplied out factor by factor. O(M²); meant for
/// cross-checks at small precision.
inline QExpansion delta_product(std::int64_t M) {
  std::vector<Integer> series(M + 1, 0); // ∏ (1 - qⁿ)^24 to q^{M-1}
  series[0] = 1;
  for (std::int64_t n = 1; n < M; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (std::int64_t i = M - 1; i >= n; --i)
        series[i] -= series[i - n];
  QExpansion out(12, M);
  for (std::int64_t i = 1; i <= M; ++i)
    out[i] = series[i - 1];
  return out;
}

/// Δ via Jacobi's identity ∏(1 - qⁿ)³ = Σ_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}:
/// Δ = q·(that series)^8, built by seven sparse multiplications.
inline QExpansion delta_jacobi(std::int64_t M) {
  std::vector<std::pair<std::int64_t, long>> jacobi;
  for (std::int64_t j = 0; j * (j + 1) / 2 <= M; ++j)
    jacobi.emplace_back(j * (j + 1) / 2, (j % 2 ? -1 : 1) * (2 * j + 1));
  std::vector<Integer> acc(M + 1, 0);
  for (const auto &[e, c] : jacobi)
    if (e <= M)
      acc[e] = c;
  for (int rep = 1; rep < 8; ++rep) {
    std::vector<Integer> next(M + 1, 0);
    for (std::int64_t i = 0; i <= M; ++i) {
      if (acc[i] == 0)
        continue;
      for (const auto &[e, c] : jacobi) {
        if (i + e > M)
          break;
        if (c > 0)
          mpz_addmul_ui(next[i + e].get_mpz_t(), acc[i].get_mpz_t(), static_cast<unsigned long>(c));
        else
          mpz_submul_ui(next[i + e].get_mpz_t(), acc[i].get_mpz_t(), static_cast<unsigned long>(-c));
      }
    }
    acc = std::move(next);
  }
  QExpansion out(12, M);
  for (std::int64_t i = 1; i <= M; ++i)
    out[i] = acc[i - 1];
  return out;
}

/// a_m(T_n f) = Σ_{d | (m, n)} d^{k-1} a_{mn/d²}, for m <= out_precision.
inline QExpansion hecke_action(const QExpansion &f, std::int64_t n, int k, std::int64_t out_precision) {
  if (n < 1)
    throw DomainError("hecke_action: n must be positive");
  if (out_precision < 0 || (out_precision > 0 && n * out_precision > f.precision()) ||
      (out_precision == 0 && f.precision() < 0))
    throw PrecisionError("hecke_action: need precision " + std::to_string(n * out_precision) +
                         ", have " + std::to_string(f.precision()));
  QExpansion out(k, out_precision);
  for (std::int64_t m = 0; m <= out_precision; ++m) {
    if (m == 0) {
      // a_0(T_n f) = σ_{k-1}(n) a_0(f)
      out[0] = divisor_sigma(n, k - 1) * f[0];
      continue;
    }
    Integer s = 0;
    for (std::int64_t d : divisors(gcd(m, n)))
      s += ipow(d, k - 1) * f[m * n / (d * d)];
    out[m] = s;
  }
  return out;
}

inline QExpansion hecke_action(const QExpansion &f, std::int64_t n, int k) {
  return hecke_action(f, n, k, f.precision() / n);
}

namespace detail {

struct Echelon {
  std::vector<std::vector<Rational>> rows; // reduced row echelon, pivot entries 1
  std::vector<std::int64_t> pivots;
};

inline Echelon echelonize(const std::vector<QExpansion> &forms) {
  Echelon out;
  if (forms.empty())
    return out;
  const std::int64_t M = forms.front().precision();
  std::vector<std::vector<Rational>> rows;
  for (const auto &f : forms) {
    std::vector<Rational> row(M + 1);
    for (std::int64_t i = 0; i <= M; ++i)
      row[i] = f[i];
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::int64_t col = 0; col <= M && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0)
      ++pivot;
    if (pivot == rows.size())
      continue;
    std::swap(rows[rank], rows[pivot]);
    const Rational inv = 1 / rows[rank][col];
    for (auto &v : rows[rank])
      v *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0)
        continue;
      const Rational factor = rows[r][col];
      for (std::int64_t i = col; i <= M; ++i)
        rows[r][i] -= factor * rows[rank][i];
    }
    out.pivots.push_back(col);
    ++rank;
  }
  rows.resize(rank);
  out.rows = std::move(rows);
  return out;
}

// Δ·E4^b·E6^c with 4b + 6c = k - 12 are linearly independent and span S_k(1).
inline std::int64_t level_one_cusp_dimension(int k) {
  if (k < 12 || k % 2 != 0)
    return 0;
  std::int64_t count = 0;
  for (int b = 0; 4 * b <= k - 12; ++b)
    if ((k - 12 - 4 * b) % 6 == 0)
      ++count;
  return count;
}

inline std::vector<QExpansion> monomials(int k, std::int64_t M) {
  std::vector<QExpansion> out;
  if (k < 12 || k % 2 != 0)
    return out;
  const auto e4 = eisenstein_q(4, M);
  const auto e6 = eisenstein_q(6, M);
  const auto delta = delta_q(M);
  for (int a = 1; 12 * a <= k; ++a)
    for (int b = 0; 12 * a + 4 * b <= k; ++b) {
      const int rest = k - 12 * a - 4 * b;
      if (rest % 6 != 0)
        continue;
      const int c = rest / 6;
      QExpansion f = delta;
      for (int i = 1; i < a; ++i)
        f = multiply(f, delta);
      for (int i = 0; i < b; ++i)
        f = multiply(f, e4);
      for (int i = 0; i < c; ++i)
        f = multiply(f, e6);
      out.push_back(std::move(f));
    }
  return out;
}

} // namespace detail

/// Echelonized integral basis of S_k(SL2(Z)) to precision M (empty below weight 12).
inline std::vector<QExpansion> basis_sk1(int k, std::int64_t M) {
  if (k < 4 || k % 2 != 0)
    throw DomainError("basis_sk1: k must be even and >= 4");
  const auto ech = detail::echelonize(detail::monomials(k, M));
  std::vector<QExpansion> out;
  for (const auto &row : ech.rows) {
    Integer den = 1;
    for (const auto &v : row)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    QExpansion f(k, M);
    for (std::int64_t i = 0; i <= M; ++i)
      f[i] = row[i].get_num() * (den / row[i].get_den());
    out.push_back(std::move(f));
  }
  return out;
}

/// Trace of T_n on S_k(SL2(Z)) by exact linear algebra on basis coordinates.
inline Integer trace_oracle(std::int64_t n, int k, std::int64_t M = 0) {
  if (n < 1)
    throw DomainError("trace_oracle: n must be positive");
  const std::int64_t dim = detail::level_one_cusp_dimension(k);
  if (dim == 0)
    return 0;
  std::int64_t precision = std::max<std::int64_t>(M, dim + 1);
  for (int attempt = 0; attempt < 8; ++attempt, precision *= 2) {
    const auto ech = detail::echelonize(detail::monomials(k, precision));
    if (static_cast<std::int64_t>(ech.rows.size()) < dim)
      continue; // coordinates not yet separated at this precision
    const std::int64_t top = ech.pivots.back();
    const auto full = detail::echelonize(detail::monomials(k, n * top));
    Rational trace = 0;
    for (std::size_t i = 0; i < full.rows.size(); ++i) {
      // a_{p_i}(T_n f_i) = Σ_{d | (p_i, n)} d^{k-1} a_{p_i n / d²}(f_i)
      const std::int64_t p = full.pivots[i];
      Rational a = 0;
      for (std::int64_t d : divisors(gcd(p, n)))
        a += Rational(ipow(d, k - 1)) * full.rows[i][p * n / (d * d)];
      trace += a;
    }
    if (trace.get_den() != 1)
      throw ConsistencyError("trace_oracle: non-integral trace");
    return trace.get_num();
  }
  throw PrecisionError("trace_oracle: could not separate basis coordinates");
}

/// dim S_k(Γ0(N)) for even k >= 4 from the genus, elliptic point and cusp counts.
inline std::int64_t gamma0_dimension_oracle(std::int64_t N, int k) {
  if (k % 2 != 0)
    throw DomainError("gamma0_dimension_oracle: weight must be even");
  if (k < 4)
    throw DomainError("gamma0_dimension_oracle: weight must be >= 4");
  if (N < 1)
    throw DomainError("gamma0_dimension_oracle: level must be positive");
  const auto fac = factorize(N);
  std::int64_t index = N;
  std::int64_t e2 = (N % 4 == 0) ? 0 : 1;
  std::int64_t e3 = (N % 9 == 0) ? 0 : 1;
  for (const auto &f : fac.factors) {
    const std::int64_t p = f.prime;
    index = index / p * (p + 1);
    // 1 + (-4/p), 1 + (-3/p)
    const std::int64_t leg4 = p == 2 ? 0 : (p % 4 == 1 ? 1 : -1);
    const std::int64_t leg3 = p == 3 ? 0 : (p % 3 == 1 ? 1 : -1);
    e2 *= 1 + leg4;
    e3 *= 1 + leg3;
  }
  std::int64_t cusps = 0;
  for (std::int64_t d : divisors(N))
    cusps += euler_phi(gcd(d, N / d));
  // 12(g - 1) = index - 3 e2 - 4 e3 - 6 cusps
  const std::int64_t twelve_g_minus_1 = index - 3 * e2 - 4 * e3 - 6 * cusps;
  if (twelve_g_minus_1 % 12 != 0)
    throw ConsistencyError("gamma0_dimension_oracle: non-integral genus");
  const std::int64_t g_minus_1 = twelve_g_minus_1 / 12;
  return (k - 1) * g_minus_1 + (k / 4) * e2 + (k / 3) * e3 + (k / 2 - 1) * cusps;
}

} // namespace hecke::oracle
