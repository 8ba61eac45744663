#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <thread>
#include <vector>

#include "hecke/arithmetic.hpp"
#include "hecke/class_number.hpp"
#include "hecke/cyclotomic.hpp"
#include "hecke/dirichlet.hpp"
#include "hecke/trace_cache.hpp"

namespace hecke {

/// The space S_k(N, χ): weight k >= 3, χ a character mod N with χ(-1) = (-1)^k.
class HeckeSpace {
public:
  HeckeSpace(int weight, DirichletCharacter chi) : k_(weight), chi_(std::move(chi)) {
    if (k_ <= 2)
      throw DomainError("weight k=" + std::to_string(k_) +
                        " is not supported: the trace formula here requires k > 2");
    if (!chi_.compatible_with_weight(k_))
      throw DomainError("character parity chi(-1)=" + std::to_string(chi_.parity()) +
                        " is incompatible with weight " + std::to_string(k_));
  }

  static HeckeSpace trivial(int weight, std::int64_t level) {
    return HeckeSpace(weight, DirichletCharacter::trivial(level));
  }

  int weight() const { return k_; }
  std::int64_t level() const { return chi_.modulus(); }
  const DirichletCharacter &character() const { return chi_; }
  std::int64_t conductor() const { return chi_.conductor(); }

private:
  int k_;
  DirichletCharacter chi_;
};

struct TraceValue {
  CyclotomicRational exact;
  std::complex<double> approx;
  std::optional<Integer> snapped; // present when the exact value is a rational integer
  bool outside_validated_range = false; // gcd(n, N) > 1

  static TraceValue from_exact(CyclotomicRational value, bool require_integer) {
    TraceValue out;
    value.canonicalize();
    out.approx = value.embed();
    if (auto q = value.rational_value()) {
      if (q->get_den() == 1)
        out.snapped = q->get_num();
      else if (require_integer)
        throw ConsistencyError("trace is not an integer: " + q->get_str());
    } else if (require_integer) {
      throw ConsistencyError("trace for a real character is not rational: " + value.to_string());
    }
    out.exact = std::move(value);
    return out;
  }
};

/// Exact traces of Hecke operators on S_k(N, χ) via the Eichler–Selberg
/// trace formula, with memoization and an optional persistent cache.
///
/// Internally every term is accumulated as 12× its value in Z[ζ_r]; the
/// denominators 12, 6, 4, 2 of the formula all divide 12.
class TraceFormula {
public:
  explicit TraceFormula(HeckeSpace space, TraceCache *cache = nullptr,
                        ClassNumberTable &classes = ClassNumberTable::shared())
      : space_(std::move(space)), cache_(cache), classes_(&classes),
        psi_N_(psi_index(space_.level())), char_hash_(space_.character().hash()) {}

  const HeckeSpace &space() const { return space_; }
  TraceCache *cache() const { return cache_; }

  CyclotomicRational identity_term(std::int64_t n) const {
    require_positive(n);
    return identity_scaled(n).divided_by(12);
  }

  /// μ(t, n, m) = ψ(N)/ψ(N/(N,m)) Σ χ(x) over x mod N such that some lift
  /// of x solves x² - t x + n ≡ 0 (mod N(N,m)).
  CyclotomicRational mu_factor(std::int64_t t, std::int64_t n, std::int64_t m) const {
    require_positive(n);
    if (m < 1)
      throw DomainError("mu_factor: m must be positive");
    if (t * t >= 4 * n)
      throw DomainError("mu_factor: requires t^2 < 4n");
    const auto counts = mu_counts(t, n, gcd(space_.level(), m));
    const std::int64_t ratio = mu_ratio(m);
    CyclotomicRational out(order());
    for (int e = 0; e < order(); ++e)
      out[e] = Rational(ratio * counts[e]);
    return out.canonicalize();
  }

  /// Σ_t P_{k-2}(t, n) Σ_m h/w · μ(t, n, m), without the leading minus sign.
  CyclotomicRational elliptic_term(std::int64_t n) const {
    require_positive(n);
    ensure_class_numbers(n);
    return elliptic_scaled(n).divided_by(12);
  }

  /// ½ Σ_{d | n} min(d, n/d)^{k-1} Σ_c φ((c, N/c)) χ(y), without the leading minus sign.
  CyclotomicRational divisor_term(std::int64_t n) const {
    require_positive(n);
    return divisor_scaled(n).divided_by(12);
  }

  /// Exact tr T(n) (memoized).
  CyclotomicRational trace_exact(std::int64_t n) const {
    require_positive(n);
    {
      std::shared_lock lock(memo_mutex_);
      if (auto it = memo_.find(n); it != memo_.end())
        return it->second;
    }
    if (cache_) {
      if (auto hit = cache_->lookup(key(n))) {
        if (hit->order() == order()) {
          std::unique_lock lock(memo_mutex_);
          memo_.emplace(n, *hit);
          return *hit;
        }
      }
    }
    ensure_class_numbers(n);
    auto value = compute(n);
    std::unique_lock lock(memo_mutex_);
    memo_.emplace(n, value);
    lock.unlock();
    if (cache_)
      cache_->store(key(n), value);
    return value;
  }

  TraceValue trace(std::int64_t n) const {
    auto out = TraceValue::from_exact(trace_exact(n), space_.character().is_real());
    out.outside_validated_range = gcd(n, space_.level()) != 1;
    return out;
  }

  /// dim S_k(N, χ) = tr T(1).
  std::int64_t dimension() const {
    const auto t = trace(1);
    if (!t.snapped || !t.snapped->fits_slong_p() || *t.snapped < 0)
      throw ConsistencyError("dimension is not a nonnegative integer: " + t.exact.to_string());
    return t.snapped->get_si();
  }

  /// B(p^ℓ) = tr T(p^ℓ) - χ(p) p^{k-1} tr T(p^{ℓ-2}), with tr T(p^{-1}) = 0 and B(1) = 2g.
  TraceValue b_coefficient(std::int64_t p, int ell) const {
    if (!is_prime(p))
      throw DomainError("b_coefficient: " + std::to_string(p) + " is not prime");
    if (space_.level() % p == 0)
      throw DomainError("b_coefficient: p=" + std::to_string(p) + " divides the level");
    if (ell < 0)
      throw DomainError("b_coefficient: exponent must be nonnegative");
    return TraceValue::from_exact(b_exact(p, ell), space_.character().is_real());
  }

  CyclotomicRational b_exact(std::int64_t p, int ell) const {
    if (ell == 0)
      return trace_exact(1) * Rational(2);
    Integer pe = ipow(p, ell);
    if (!pe.fits_slong_p())
      throw DomainError("b_coefficient: p^l too large");
    CyclotomicRational out = trace_exact(pe.get_si());
    if (ell >= 2) {
      const auto e = *space_.character().exponent(p);
      CyclotomicRational twist = CyclotomicRational::root_power(order(), e) *
                                 Rational(ipow(p, space_.weight() - 1));
      out -= twist * trace_exact(ipow(p, ell - 2).get_si());
    }
    return out.canonicalize();
  }

  /// Computes the traces for all ns not yet known, split into contiguous
  /// blocks over `threads` workers; results are merged in input order.
  void precompute(std::vector<std::int64_t> ns, unsigned threads = 1) const {
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::vector<std::int64_t> todo;
    for (std::int64_t n : ns) {
      require_positive(n);
      {
        std::shared_lock lock(memo_mutex_);
        if (memo_.count(n))
          continue;
      }
      if (cache_) {
        if (auto hit = cache_->lookup(key(n)); hit && hit->order() == order()) {
          std::unique_lock lock(memo_mutex_);
          memo_.emplace(n, *hit);
          continue;
        }
      }
      todo.push_back(n);
    }
    if (todo.empty())
      return;
    ensure_class_numbers(todo.back());
    std::vector<CyclotomicRational> results(todo.size(), CyclotomicRational(order()));
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(todo.size())));
    if (threads == 1) {
      for (std::size_t i = 0; i < todo.size(); ++i)
        results[i] = compute(todo[i]);
    } else {
      std::vector<std::thread> workers;
      // Interleaved assignment balances cost, which grows with n.
      for (unsigned w = 0; w < threads; ++w)
        workers.emplace_back([&, w] {
          for (std::size_t i = w; i < todo.size(); i += threads)
            results[i] = compute(todo[i]);
        });
      for (auto &t : workers)
        t.join();
    }
    std::unique_lock lock(memo_mutex_);
    for (std::size_t i = 0; i < todo.size(); ++i)
      memo_.emplace(todo[i], results[i]);
    lock.unlock();
    if (cache_)
      for (std::size_t i = 0; i < todo.size(); ++i)
        cache_->store(key(todo[i]), results[i]);
  }

private:
  int order() const { return space_.character().order(); }

  TraceKey key(std::int64_t n) const { return {space_.weight(), space_.level(), char_hash_, n}; }

  static void require_positive(std::int64_t n) {
    if (n < 1)
      throw DomainError("trace: n must be positive");
  }

  void ensure_class_numbers(std::int64_t n) const {
    const std::int64_t need = 4 * n;
    const std::int64_t have = classes_->filled_limit();
    if (need > have)
      classes_->ensure(std::max<std::int64_t>({need, 2 * have, 1024}));
  }

  CyclotomicRational compute(std::int64_t n) const {
    CyclotomicIntegerSum total = identity_scaled(n);
    total -= elliptic_scaled(n);
    total -= divisor_scaled(n);
    return total.divided_by(12);
  }

  // 12 · n^{k/2-1} χ(√n) (k-1)/12 ψ(N)
  CyclotomicIntegerSum identity_scaled(std::int64_t n) const {
    CyclotomicIntegerSum out(order());
    if (!is_square(n))
      return out;
    const std::int64_t s = isqrt(n);
    const auto e = space_.character().exponent(s);
    if (!e)
      return out;
    out.add(*e, ipow(s, space_.weight() - 2) * (space_.weight() - 1) * psi_N_);
    return out;
  }

  std::int64_t mu_ratio(std::int64_t m) const {
    const std::int64_t N = space_.level();
    return psi_N_ / psi_index(N / gcd(N, m));
  }

  // Per-exponent counts of residues x mod N having a lift x + jN (0 <= j < g)
  // with x² - t x + n ≡ 0 (mod N·g), g = (N, m).
  std::vector<std::int64_t> mu_counts(std::int64_t t, std::int64_t n, std::int64_t g) const {
    const std::int64_t N = space_.level();
    const std::int64_t M = N * g;
    std::vector<std::int64_t> counts(order(), 0);
    const auto &chi = space_.character();
    const __int128 tm = mod(t, M), nm = mod(n, M);
    for (std::int64_t x = 0; x < N; ++x) {
      const int e = chi.raw_exponent(x);
      if (e == DirichletCharacter::kZero)
        continue;
      for (std::int64_t lift = x; lift < M; lift += N) {
        const __int128 v = (static_cast<__int128>(lift) * lift - tm * lift + nm) % M;
        if (v == 0) {
          ++counts[e];
          break;
        }
      }
    }
    return counts;
  }

  // All m >= 1 with m² | v.
  static std::vector<std::int64_t> square_divisors(std::int64_t v) {
    std::vector<std::int64_t> out{1};
    for (const auto &f : factorize(v).factors) {
      const std::size_t base = out.size();
      std::int64_t pk = 1;
      for (int e = 2; e <= f.exponent; e += 2) {
        pk *= f.prime;
        for (std::size_t i = 0; i < base; ++i)
          out.push_back(out[i] * pk);
      }
    }
    return out;
  }

  CyclotomicIntegerSum elliptic_scaled(std::int64_t n) const {
    const int r = order();
    const std::int64_t N = space_.level();
    CyclotomicIntegerSum out(r);
    std::vector<std::int64_t> inner(r);
    std::map<std::int64_t, std::vector<std::int64_t>> mu_memo; // keyed by g, reset per t
    const auto dense = classes_->snapshot();
    auto class_weight = [&](std::int64_t D) -> std::int64_t {
      // 12 h(D) / w(D)
      const std::int64_t h = dense && -D < static_cast<std::int64_t>(dense->size())
                                 ? (*dense)[-D]
                                 : classes_->get(D).h;
      return h * (12 / unit_count(D));
    };
    for (std::int64_t t = -isqrt(4 * n - 1); t * t < 4 * n; ++t) {
      const std::int64_t delta = 4 * n - t * t; // -(t² - 4n) > 0
      std::fill(inner.begin(), inner.end(), 0);
      mu_memo.clear();
      bool any = false;
      for (std::int64_t m : square_divisors(delta)) {
        const std::int64_t D = -(delta / (m * m));
        if (!is_negative_discriminant(D))
          continue;
        const std::int64_t weight12 = class_weight(D);
        if (N == 1) {
          inner[0] += weight12;
        } else {
          const std::int64_t g = gcd(N, m);
          auto it = mu_memo.find(g);
          if (it == mu_memo.end())
            it = mu_memo.emplace(g, mu_counts(t, n, g)).first;
          const std::int64_t ratio = mu_ratio(m);
          for (int e = 0; e < r; ++e)
            inner[e] += weight12 * ratio * it->second[e];
        }
        any = true;
      }
      if (!any)
        continue;
      const Integer P = detail::gegenbauer_fast(t, n, space_.weight());
      for (int e = 0; e < r; ++e)
        if (inner[e] != 0)
          out.add_mul(e, P, static_cast<long>(inner[e]));
    }
    return out;
  }

  CyclotomicIntegerSum divisor_scaled(std::int64_t n) const {
    const int r = order();
    const std::int64_t N = space_.level();
    const std::int64_t f = space_.conductor();
    const auto &chi = space_.character();
    CyclotomicIntegerSum out(r);
    std::vector<std::int64_t> inner(r);
    const auto level_divisors = divisors(N);
    for (std::int64_t d : divisors(n)) {
      const std::int64_t e_div = n / d;
      std::fill(inner.begin(), inner.end(), 0);
      bool any = false;
      const std::int64_t cond = gcd(N / f, e_div - d);
      for (std::int64_t c : level_divisors) {
        const std::int64_t g = gcd(c, N / c);
        if (cond % g != 0)
          continue;
        const auto y = crt_merge(d, c, e_div, N);
        if (!y)
          throw ConsistencyError("divisor term: incompatible congruences");
        const int e = chi.primitive_exponent(y->value);
        if (e == DirichletCharacter::kZero)
          continue;
        inner[e] += 6 * euler_phi(g);
        any = true;
      }
      if (!any)
        continue;
      const Integer weight = ipow(std::min(d, e_div), space_.weight() - 1);
      for (int e = 0; e < r; ++e)
        if (inner[e] != 0)
          out.add_mul(e, weight, static_cast<long>(inner[e]));
    }
    return out;
  }

  HeckeSpace space_;
  TraceCache *cache_;
  ClassNumberTable *classes_;
  std::int64_t psi_N_;
  std::string char_hash_;
  mutable std::shared_mutex memo_mutex_;
  mutable std::map<std::int64_t, CyclotomicRational> memo_;
};

} // namespace hecke
