#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hecke/arithmetic.hpp"

namespace hecke {

namespace detail {

/// Integer coefficients of the r-th cyclotomic polynomial, lowest degree first,
/// from Φ_r(x) = ∏_{d | r} (x^d - 1)^{μ(r/d)}.
inline std::vector<Integer> compute_cyclotomic_polynomial(int r) {
  std::vector<Integer> poly{1};
  std::vector<std::int64_t> denominators;
  for (std::int64_t d : divisors(r)) {
    const auto f = factorize(r / d);
    bool squarefree = true;
    for (const auto &pp : f.factors)
      squarefree = squarefree && pp.exponent == 1;
    if (!squarefree)
      continue;
    if (f.factors.size() % 2 == 1) {
      denominators.push_back(d);
      continue;
    }
    std::vector<Integer> out(poly.size() + d, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] -= poly[i];
      out[i + d] += poly[i];
    }
    poly = std::move(out);
  }
  for (std::int64_t d : denominators) {
    // exact division by x^d - 1
    std::vector<Integer> quot(poly.size() - d, 0);
    for (std::size_t i = poly.size(); i-- > static_cast<std::size_t>(d);) {
      quot[i - d] = poly[i];
      poly[i - d] += poly[i];
    }
    poly = std::move(quot);
  }
  return poly;
}

inline const std::vector<Integer> &cyclotomic_polynomial(int r) {
  static std::mutex lock;
  static std::map<int, std::vector<Integer>> table;
  std::lock_guard guard(lock);
  auto it = table.find(r);
  if (it == table.end())
    it = table.emplace(r, compute_cyclotomic_polynomial(r)).first;
  return it->second;
}

} // namespace detail

/// Exact element Σ c_e ζ_r^e of Q(ζ_r), ζ_r = exp(2πi/r).
///
/// Coefficients are kept as a length-r array. The representation is not
/// unique until canonicalize() reduces it modulo Φ_r; comparison always
/// compares canonical forms.
class CyclotomicRational {
public:
  CyclotomicRational() : CyclotomicRational(1) {}
  explicit CyclotomicRational(int order) : coeffs_(checked_order(order), Rational(0)) {}
  CyclotomicRational(int order, const Rational &value) : CyclotomicRational(order) {
    coeffs_[0] = value;
  }
  CyclotomicRational(int order, std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != checked_order(order))
      throw DomainError("CyclotomicRational: coefficient count must equal the order");
  }

  static CyclotomicRational root_power(int order, std::int64_t e) {
    CyclotomicRational z(order);
    z.coeffs_[mod(e, order)] = 1;
    return z;
  }

  int order() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<Rational> &coefficients() const { return coeffs_; }
  Rational &operator[](std::size_t e) { return coeffs_[e]; }
  const Rational &operator[](std::size_t e) const { return coeffs_[e]; }

  CyclotomicRational &canonicalize() {
    const auto &phi = detail::cyclotomic_polynomial(order());
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = coeffs_.size(); i-- > deg;) {
      if (coeffs_[i] == 0)
        continue;
      const Rational q = coeffs_[i];
      for (std::size_t j = 0; j <= deg; ++j)
        coeffs_[i - deg + j] -= q * phi[j];
    }
    return *this;
  }

  CyclotomicRational canonical() const {
    CyclotomicRational c = *this;
    return c.canonicalize();
  }

  bool is_rational() const {
    const auto c = canonical();
    for (std::size_t i = 1; i < c.coeffs_.size(); ++i)
      if (c.coeffs_[i] != 0)
        return false;
    return true;
  }

  std::optional<Rational> rational_value() const {
    if (!is_rational())
      return std::nullopt;
    return canonical().coeffs_[0];
  }

  std::complex<double> embed() const {
    std::complex<double> sum = 0.0;
    const int r = order();
    for (int e = 0; e < r; ++e) {
      if (coeffs_[e] == 0)
        continue;
      const double angle = 2.0 * std::numbers::pi * e / r;
      sum += coeffs_[e].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return sum;
  }

  CyclotomicRational &operator+=(const CyclotomicRational &o) {
    require_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  CyclotomicRational &operator-=(const CyclotomicRational &o) {
    require_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  CyclotomicRational &operator*=(const Rational &s) {
    for (auto &c : coeffs_)
      c *= s;
    return *this;
  }
  CyclotomicRational &operator*=(const CyclotomicRational &o) {
    require_same_order(o);
    const int r = order();
    std::vector<Rational> out(r, Rational(0));
    for (int i = 0; i < r; ++i) {
      if (coeffs_[i] == 0)
        continue;
      for (int j = 0; j < r; ++j)
        if (o.coeffs_[j] != 0)
          out[(i + j) % r] += coeffs_[i] * o.coeffs_[j];
    }
    coeffs_ = std::move(out);
    return *this;
  }

  friend CyclotomicRational operator+(CyclotomicRational a, const CyclotomicRational &b) { return a += b; }
  friend CyclotomicRational operator-(CyclotomicRational a, const CyclotomicRational &b) { return a -= b; }
  friend CyclotomicRational operator*(CyclotomicRational a, const CyclotomicRational &b) { return a *= b; }
  friend CyclotomicRational operator*(CyclotomicRational a, const Rational &s) { return a *= s; }
  friend CyclotomicRational operator*(const Rational &s, CyclotomicRational a) { return a *= s; }
  friend CyclotomicRational operator-(CyclotomicRational a) { return a *= Rational(-1); }

  friend bool operator==(const CyclotomicRational &a, const CyclotomicRational &b) {
    if (a.order() != b.order())
      return false;
    return a.canonical().coeffs_ == b.canonical().coeffs_;
  }

  /// "r c_0/d_0 ... c_{r-1}/d_{r-1}" (canonical form).
  std::string serialize() const {
    const auto c = canonical();
    std::string out = std::to_string(order());
    for (const auto &q : c.coeffs_) {
      out += ' ';
      out += q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    return out;
  }

  std::string to_string() const {
    const auto c = canonical();
    std::string out;
    for (int e = 0; e < c.order(); ++e) {
      if (c.coeffs_[e] == 0)
        continue;
      if (!out.empty())
        out += " + ";
      out += "(" + c.coeffs_[e].get_str() + ")";
      if (e > 0)
        out += "*z" + std::to_string(c.order()) + "^" + std::to_string(e);
    }
    return out.empty() ? "0" : out;
  }

private:
  static int checked_order(int order) {
    if (order < 1)
      throw DomainError("CyclotomicRational: order must be positive");
    return order;
  }
  void require_same_order(const CyclotomicRational &o) const {
    if (o.order() != order())
      throw DomainError("CyclotomicRational: mismatched orders");
  }

  std::vector<Rational> coeffs_;
};

/// Integer accumulator over Z[ζ_r] used on hot paths; no reduction is done
/// until it is converted.
class CyclotomicIntegerSum {
public:
  explicit CyclotomicIntegerSum(int order) : coeffs_(order, Integer(0)) {}

  int order() const { return static_cast<int>(coeffs_.size()); }
  Integer &operator[](std::size_t e) { return coeffs_[e]; }
  const Integer &operator[](std::size_t e) const { return coeffs_[e]; }

  void add(std::int64_t exponent, const Integer &value) { coeffs_[mod(exponent, order())] += value; }
  void add_mul(std::int64_t exponent, const Integer &a, long b) {
    mpz_ptr target = coeffs_[mod(exponent, order())].get_mpz_t();
    if (b >= 0)
      mpz_addmul_ui(target, a.get_mpz_t(), static_cast<unsigned long>(b));
    else
      mpz_submul_ui(target, a.get_mpz_t(), static_cast<unsigned long>(-b));
  }

  CyclotomicIntegerSum &operator+=(const CyclotomicIntegerSum &o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  CyclotomicIntegerSum &operator-=(const CyclotomicIntegerSum &o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      coeffs_[i] -= o.coeffs_[i];
    return *this;
  }

  CyclotomicRational divided_by(const Integer &denominator) const {
    std::vector<Rational> c(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      c[i] = Rational(coeffs_[i], denominator);
      c[i].canonicalize();
    }
    CyclotomicRational out(order(), std::move(c));
    out.canonicalize();
    return out;
  }

private:
  std::vector<Integer> coeffs_;
};

} // namespace hecke
