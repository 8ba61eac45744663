#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hecke/newforms.hpp"
#include "hecke/special_series.hpp"
#include "hecke/trace_formula.hpp"

namespace hecke {

enum class Convention { paper, hadamard_corrected };

inline std::string to_string(Convention c) {
  return c == Convention::paper ? "paper" : "hadamard-corrected";
}

inline Convention parse_convention(const std::string &s) {
  if (s == "paper")
    return Convention::paper;
  if (s == "hadamard-corrected")
    return Convention::hadamard_corrected;
  throw DomainError("unknown convention '" + s + "' (expected paper or hadamard-corrected)");
}

/// One Li coefficient at a fixed prime cutoff.
///
/// tau = level_term + archimedean_term - prime_sum + binomial_tail, evaluated
/// in exactly that order. level_term already contains hadamard_correction.
/// For non-real characters the prime sum can be complex; tau_imag carries
/// the imaginary part and every other field is real.
struct LiReport {
  std::int64_t n = 0;
  double tau = 0.0;
  double tau_imag = 0.0;
  std::int64_t cutoff = 0;
  Convention convention = Convention::paper;
  double level_term = 0.0;
  double hadamard_correction = 0.0;
  double archimedean_term = 0.0;
  double prime_sum = 0.0;
  double binomial_tail = 0.0;
  double oscillation_band = 0.0;

  double assembled() const { return level_term + archimedean_term - prime_sum + binomial_tail; }
};

/// -ln 2π - γ - 2/(k+1) + Σ_l (k+1)/(l(2l+k+1)), the per-unit archimedean part.
inline double archimedean_constant(int k) {
  return -std::log(2.0 * std::numbers::pi) - euler_gamma().value - 2.0 / (k + 1) + archimedean_c1(k).value;
}

/// Σ_{j=2}^n C(n,j) (-1)^j Σ_l (l + (k-1)/2)^{-j}.
inline double binomial_tail(std::int64_t n, int k) {
  CompensatedSum s;
  double binom = n * (n - 1) / 2.0;
  for (std::int64_t j = 2; j <= n; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    s += sign * binom * hurwitz_tail(static_cast<int>(j), k).value;
    binom = binom * static_cast<double>(n - j) / static_cast<double>(j + 1);
  }
  return s.value();
}

/// L^{(1)}_0(x), ..., L^{(1)}_{count-1}(x). The binomial sum
/// Σ_{l=1}^n C(n,l) (-1)^{l-1} x^{l-1}/(l-1)! equals L^{(1)}_{n-1}(x).
inline std::vector<double> laguerre1(std::int64_t count, double x) {
  std::vector<double> out(std::max<std::int64_t>(count, 0));
  if (count > 0)
    out[0] = 1.0;
  if (count > 1)
    out[1] = 2.0 - x;
  for (std::int64_t j = 1; j + 1 < count; ++j)
    out[j + 1] = ((2.0 * j + 2.0 - x) * out[j] - (j + 1.0) * out[j - 1]) / (j + 1.0);
  return out;
}

struct PrimePowerTerm {
  std::int64_t m;
  std::int64_t p;
  std::complex<double> b; // B(m) or b_f(m)
};

struct PrimeSumSeries {
  std::complex<double> total;
  double band = 0.0;
};

namespace detail {

class ComplexSum {
public:
  void add(std::complex<double> z) {
    re_ += z.real();
    im_ += z.imag();
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum re_, im_;
};

} // namespace detail

/// Σ_m Λ(m) b(m) m^{-(k+1)/2} L^{(1)}_{n-1}(ln m) for n = 1..nmax, summed in
/// ascending m (terms must arrive sorted). The band is the largest deviation
/// of the partial sums at X/10, X/5, X/2 from the full sum.
inline std::vector<PrimeSumSeries> prime_sums(const std::vector<PrimePowerTerm> &terms, int k,
                                              std::int64_t nmax, std::int64_t X) {
  std::vector<detail::ComplexSum> sums(nmax);
  const std::int64_t checkpoints[3] = {X / 10, X / 5, X / 2};
  std::vector<std::vector<std::complex<double>>> partial(3, std::vector<std::complex<double>>(nmax));
  int next = 0;
  auto snapshot_until = [&](std::int64_t m) {
    while (next < 3 && m > checkpoints[next]) {
      for (std::int64_t i = 0; i < nmax; ++i)
        partial[next][i] = sums[i].value();
      ++next;
    }
  };
  const double half_weight = (k + 1) / 2.0;
  std::int64_t last = 0;
  for (const auto &term : terms) {
    if (term.m <= last)
      throw ConsistencyError("prime_sums: terms must be strictly ascending");
    last = term.m;
    if (term.m > X)
      break;
    snapshot_until(term.m);
    const double x = std::log(static_cast<double>(term.m));
    const std::complex<double> w =
        term.b * (std::log(static_cast<double>(term.p)) / std::pow(static_cast<double>(term.m), half_weight));
    const auto lag = laguerre1(nmax, x);
    for (std::int64_t i = 0; i < nmax; ++i)
      sums[i].add(w * lag[i]);
  }
  snapshot_until(X + 1);
  std::vector<PrimeSumSeries> out(nmax);
  for (std::int64_t i = 0; i < nmax; ++i) {
    out[i].total = sums[i].value();
    for (int c = 0; c < 3; ++c)
      out[i].band = std::max(out[i].band, std::abs(partial[c][i] - out[i].total));
  }
  return out;
}

/// Prime powers m = p^ℓ <= X in ascending order, skipping p | N.
inline std::vector<std::pair<std::int64_t, int>> prime_powers_upto(std::int64_t X, std::int64_t N,
                                                                   std::vector<std::int64_t> *values = nullptr) {
  std::vector<std::tuple<std::int64_t, std::int64_t, int>> all;
  for (std::int64_t p : sieve_primes(X)) {
    if (N % p == 0)
      continue;
    std::int64_t m = p;
    for (int ell = 1;; ++ell) {
      all.emplace_back(m, p, ell);
      if (m > X / p)
        break;
      m *= p;
    }
  }
  std::sort(all.begin(), all.end());
  std::vector<std::pair<std::int64_t, int>> out;
  for (const auto &[m, p, ell] : all) {
    out.emplace_back(p, ell);
    if (values)
      values->push_back(m);
  }
  return out;
}

namespace detail {

inline std::vector<LiReport> assemble(std::int64_t nmax, std::int64_t X, Convention convention, int k,
                                      std::int64_t g, double level_log, double hadamard_sum,
                                      const std::vector<PrimeSumSeries> &sums) {
  const double arch = archimedean_constant(k);
  std::vector<LiReport> out;
  for (std::int64_t n = 1; n <= nmax; ++n) {
    LiReport r;
    r.n = n;
    r.cutoff = X;
    r.convention = convention;
    if (g != 0) {
      const double half_n = n / 2.0;
      r.hadamard_correction = convention == Convention::hadamard_corrected ? half_n * hadamard_sum : 0.0;
      r.level_term = half_n * level_log + r.hadamard_correction;
      r.archimedean_term = static_cast<double>(n * g) * arch;
      r.prime_sum = sums[n - 1].total.real();
      r.binomial_tail = static_cast<double>(g) * binomial_tail(n, k);
      r.oscillation_band = sums[n - 1].band;
      r.tau_imag = sums[n - 1].total.imag() == 0.0 ? 0.0 : -sums[n - 1].total.imag();
    }
    r.tau = r.assembled();
    out.push_back(r);
  }
  return out;
}

} // namespace detail

struct LiOptions {
  std::int64_t nmax = 1;
  std::int64_t cutoff = 10000;
  Convention convention = Convention::paper;
  unsigned threads = 1;
};

/// τ_N(n) for n = 1..nmax from exact traces on S_k(N, χ).
inline std::vector<LiReport> tau_N(const TraceFormula &tf, const LiOptions &opt) {
  if (opt.nmax < 1)
    throw DomainError("tau_N: nmax must be >= 1");
  if (opt.cutoff < 2)
    throw DomainError("tau_N: cutoff must be >= 2");
  const auto &space = tf.space();
  const int k = space.weight();
  const std::int64_t g = tf.dimension();
  if (g == 0)
    return detail::assemble(opt.nmax, opt.cutoff, opt.convention, k, 0, 0.0, 0.0, {});

  const auto table = nu_table(space, tf.cache());
  if (table.reconstructed_dimension() != g)
    throw ConsistencyError("newform dimensions do not add up to dim S_k(N, chi)");

  std::vector<std::int64_t> ms;
  const auto powers = prime_powers_upto(opt.cutoff, space.level(), &ms);
  // Every B(p^ℓ) needs tr T(p^ℓ) and tr T(p^{ℓ-2}); all are in ms ∪ {1}.
  std::vector<std::int64_t> needed = ms;
  needed.push_back(1);
  tf.precompute(needed, opt.threads);

  std::vector<PrimePowerTerm> terms;
  terms.reserve(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto [p, ell] = powers[i];
    const auto exact = tf.b_exact(p, ell);
    std::complex<double> b;
    if (auto q = exact.rational_value(); q && q->get_den() == 1)
      b = to_double(q->get_num());
    else
      b = exact.embed();
    const double bound = 2.0 * g * std::pow(static_cast<double>(ms[i]), (k - 1) / 2.0) * (1 + 1e-9);
    if (std::abs(b) > bound)
      throw ConsistencyError("B(" + std::to_string(ms[i]) + ") exceeds the Deligne bound");
    terms.push_back({ms[i], p, b});
  }
  const auto sums = prime_sums(terms, k, opt.nmax, opt.cutoff);
  return detail::assemble(opt.nmax, opt.cutoff, opt.convention, k, g, level_log_term(table),
                          hadamard_level_sum(table), sums);
}

// ---------------------------------------------------------------------------
// Eigenvalue data of a single newform

struct EigenData {
  int weight = 0;
  std::int64_t level = 1;
  DirichletCharacter character = DirichletCharacter::trivial(1);
  std::map<std::int64_t, std::complex<double>> eigenvalues;
  std::map<std::int64_t, Integer> integral; // populated only when every λ(p) is an integer
  std::vector<std::string> warnings;

  bool all_integral() const { return !eigenvalues.empty() && integral.size() == eigenvalues.size(); }

  static EigenData parse(std::istream &in, std::optional<DirichletCharacter> chi = std::nullopt) {
    EigenData out;
    std::string line, magic, version;
    if (!std::getline(in, line))
      throw DataError("eigen file: empty input");
    std::istringstream header(line);
    if (!(header >> magic >> version >> out.weight >> out.level) || magic != "EIGEN" || version != "v1")
      throw DataError("eigen file: expected header 'EIGEN v1 k N'");
    if (out.weight < 3 || out.level < 1)
      throw DataError("eigen file: invalid weight or level in header");
    out.character = chi ? *chi : DirichletCharacter::trivial(out.level);
    if (out.character.modulus() != out.level)
      throw DataError("eigen file: character modulus does not match level");
    bool integral = true;
    std::int64_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream row(line);
      std::string p_text, re_text, im_text, extra;
      if (!(row >> p_text))
        continue;
      if (!(row >> re_text))
        throw DataError("eigen file line " + std::to_string(line_no) + ": expected 'p re [im]'");
      row >> im_text;
      if (row >> extra)
        throw DataError("eigen file line " + std::to_string(line_no) + ": trailing fields");
      std::int64_t p = 0;
      double re = 0.0, im = 0.0;
      try {
        std::size_t used = 0;
        p = std::stoll(p_text, &used);
        if (used != p_text.size())
          throw std::invalid_argument("p");
        re = std::stod(re_text, &used);
        if (used != re_text.size())
          throw std::invalid_argument("re");
        if (!im_text.empty()) {
          im = std::stod(im_text, &used);
          if (used != im_text.size())
            throw std::invalid_argument("im");
        }
      } catch (const std::exception &) {
        throw DataError("eigen file line " + std::to_string(line_no) + ": malformed number");
      }
      if (!is_prime(p))
        throw DataError("eigen file line " + std::to_string(line_no) + ": " + p_text + " is not prime");
      if (out.eigenvalues.count(p))
        throw DataError("eigen file: duplicate entry for p=" + p_text);
      out.eigenvalues[p] = {re, im};
      Integer z;
      if (integral && im == 0.0 && z.set_str(re_text, 10) == 0)
        out.integral[p] = z;
      else
        integral = false;
    }
    if (!integral)
      out.integral.clear();
    out.check_bounds();
    return out;
  }

  static EigenData load(const std::string &path, std::optional<DirichletCharacter> chi = std::nullopt) {
    std::ifstream in(path);
    if (!in)
      throw DataError("cannot open eigen file '" + path + "'");
    return parse(in, std::move(chi));
  }

  /// Contiguous prime coverage: the largest X such that λ(p) is known for all p <= X.
  std::int64_t coverage() const {
    std::int64_t covered = 1;
    for (const auto &[p, v] : eigenvalues) {
      if (p != next_prime_after(covered))
        break;
      covered = p;
    }
    if (covered == 1)
      return 1;
    return next_prime_after(covered) - 1;
  }

private:
  static std::int64_t next_prime_after(std::int64_t x) {
    std::int64_t y = x + 1;
    while (!is_prime(y))
      ++y;
    return y;
  }

  void check_bounds() {
    for (const auto &[p, lambda] : eigenvalues) {
      const double mag = std::abs(lambda);
      const double pd = static_cast<double>(p);
      if (level % p != 0) {
        if (mag > 2.0 * std::pow(pd, (weight - 1) / 2.0) * (1 + 1e-9))
          warnings.push_back("lambda(" + std::to_string(p) + ") exceeds the Deligne bound");
      } else {
        const double allowed[3] = {0.0, std::pow(pd, (weight - 2) / 2.0), std::pow(pd, (weight - 1) / 2.0)};
        bool ok = false;
        for (double a : allowed)
          ok = ok || std::abs(mag - a) <= 1e-6 * std::max(1.0, a);
        if (!ok)
          warnings.push_back("|lambda(" + std::to_string(p) + ")| is not 0, p^((k-2)/2) or p^((k-1)/2)");
      }
    }
  }
};

/// b_f(p^m): α_p^m + β_p^m for p ∤ N, λ(p)^m for p | N.
inline std::complex<double> b_f_prime_power(const EigenData &eigen, std::int64_t p, int m) {
  const auto it = eigen.eigenvalues.find(p);
  if (it == eigen.eigenvalues.end())
    throw DataError("missing eigenvalue for p=" + std::to_string(p));
  if (m < 0)
    throw DomainError("b_f_prime_power: exponent must be nonnegative");
  const int k = eigen.weight;
  if (eigen.level % p == 0) {
    if (auto z = eigen.integral.find(p); z != eigen.integral.end())
      return to_double(ipow(z->second, m));
    return std::pow(it->second, m);
  }
  if (eigen.all_integral() && eigen.character.is_real()) {
    const Integer lambda = eigen.integral.at(p);
    const long chi = eigen.character.complex_value(p).real() > 0 ? 1 : -1;
    const Integer twist = chi * ipow(p, k - 1);
    Integer prev = 2, cur = lambda;
    if (m == 0)
      return 2.0;
    for (int j = 2; j <= m; ++j) {
      Integer next = lambda * cur - twist * prev;
      prev = std::move(cur);
      cur = std::move(next);
    }
    return to_double(cur);
  }
  const std::complex<double> lambda = it->second;
  const std::complex<double> twist = eigen.character.complex_value(p) * std::pow(static_cast<double>(p), k - 1);
  std::complex<double> prev = 2.0, cur = lambda;
  if (m == 0)
    return prev;
  for (int j = 2; j <= m; ++j) {
    const std::complex<double> next = lambda * cur - twist * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// τ_f(n) for n = 1..nmax from the eigenvalues of one newform.
inline std::vector<LiReport> tau_f(const EigenData &eigen, std::int64_t nmax, std::int64_t X) {
  if (nmax < 1)
    throw DomainError("tau_f: nmax must be >= 1");
  if (X < 2)
    throw DomainError("tau_f: cutoff must be >= 2");
  if (eigen.coverage() < X)
    throw DataError("eigen data covers primes only up to " + std::to_string(eigen.coverage()) +
                    ", cutoff is " + std::to_string(X));
  std::vector<std::int64_t> ms;
  const auto powers = prime_powers_upto(X, 1, &ms);
  std::vector<PrimePowerTerm> terms;
  terms.reserve(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i)
    terms.push_back({ms[i], powers[i].first, b_f_prime_power(eigen, powers[i].first, powers[i].second)});
  const auto sums = prime_sums(terms, eigen.weight, nmax, X);
  // n ln(√N / 2π) splits into the level part (n/2) ln N and the shared archimedean constant.
  return detail::assemble(nmax, X, Convention::paper, eigen.weight, 1,
                          std::log(static_cast<double>(eigen.level)), 0.0, sums);
}

// ---------------------------------------------------------------------------
// A single Euler factor 1 - α p^{-s}

/// Σ_{j=1}^n C(n,j)(-1)^{j-1}/(j-1)! Σ_{m>=1} (ln p / p^m) α^m (m ln p)^{j-1}.
inline std::complex<double> euler_factor_li_sum(std::complex<double> alpha, std::int64_t p, std::int64_t n) {
  if (!is_prime(p))
    throw DomainError("euler_factor_li_sum: p must be prime");
  if (n < 1)
    throw DomainError("euler_factor_li_sum: n must be >= 1");
  const double pd = static_cast<double>(p);
  if (std::abs(alpha) > std::sqrt(pd) * (1 + 1e-12))
    throw DomainError("euler_factor_li_sum: requires |alpha| <= sqrt(p)");
  if (alpha == 0.0)
    return 0.0;
  const double L = std::log(pd);
  const std::complex<double> ratio = alpha / pd;
  detail::ComplexSum sum;
  std::complex<double> power = 1.0;
  for (std::int64_t m = 1; m < 100000; ++m) {
    power *= ratio;
    const double lag = laguerre1(n, m * L)[n - 1];
    const std::complex<double> term = L * power * lag;
    sum.add(term);
    // Beyond m ≈ n the Laguerre factor grows only polynomially.
    if (m > 2 * n + 10 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum.value())))
      break;
  }
  return sum.value();
}

struct ZeroSum {
  std::complex<double> value;   // partial sum plus tail estimate
  std::complex<double> partial; // zeros with |k| <= K only
  std::complex<double> tail;
  double tail_bound = 0.0;
};

/// Σ_ρ [1 - (1 - 1/ρ)^{-n}] over the zeros ρ_k = i(t + 2πk)/ln p of
/// 1 - α p^{-s}, α = e^{it}, taken over |k| <= K in pairs (k, -k). A zero at
/// ρ = 0 contributes 1. The tail uses the pair asymptotics
/// [n(n+1)L²/(4π²) - i n L t/(2π²)] / k².
inline ZeroSum euler_factor_zero_sum(std::complex<double> alpha, std::int64_t p, std::int64_t n, std::int64_t K) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12)
    throw DomainError("euler_factor_zero_sum: alpha must lie on the unit circle");
  if (!is_prime(p))
    throw DomainError("euler_factor_zero_sum: p must be prime");
  if (n < 1 || K < 1)
    throw DomainError("euler_factor_zero_sum: n and K must be >= 1");
  const double L = std::log(static_cast<double>(p));
  const double t = std::arg(alpha);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto term = [&](std::int64_t k) -> std::complex<double> {
    const double a = t + two_pi * static_cast<double>(k);
    if (a == 0.0)
      return 1.0;
    // 1 - 1/ρ = 1 + i L/a
    const std::complex<double> base(1.0, L / a);
    return 1.0 - std::pow(base, -static_cast<int>(n));
  };
  detail::ComplexSum sum;
  sum.add(term(0));
  for (std::int64_t k = 1; k <= K; ++k)
    sum.add(term(k) + term(-k));
  const double nn = static_cast<double>(n);
  const std::complex<double> coef(nn * (nn + 1) * L * L / (4 * std::numbers::pi * std::numbers::pi),
                                  -nn * L * t / (2 * std::numbers::pi * std::numbers::pi));
  const double Kd = static_cast<double>(K);
  const double inv_sq_tail = 1.0 / Kd - 1.0 / (2 * Kd * Kd) + 1.0 / (6 * Kd * Kd * Kd);
  ZeroSum out;
  out.partial = sum.value();
  out.tail = coef * inv_sq_tail;
  out.value = out.partial + out.tail;
  // The omitted pair terms are O(k^{-4}).
  const double scale = nn * (nn + 1) * (nn + 2) * std::pow(1.0 + L + std::abs(t), 4);
  out.tail_bound = scale / (Kd * Kd * Kd) + std::abs(out.tail) / (Kd * Kd);
  return out;
}

} // namespace hecke
