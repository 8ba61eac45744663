#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

#include "hecke/errors.hpp"

namespace hecke {

struct SeriesValue {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum &operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Euler–Maclaurin: γ = H_n - ln n - 1/(2n) + Σ B_2j/(2j n^{2j}) at n = 20.
inline SeriesValue euler_gamma() {
  constexpr int n = 20;
  CompensatedSum s;
  for (int j = n; j >= 1; --j)
    s += 1.0 / j;
  const double x = 1.0 / n, x2 = x * x;
  s += -std::log(static_cast<double>(n));
  s += -0.5 * x;
  s += x2 / 12.0;
  s += -x2 * x2 / 120.0;
  s += x2 * x2 * x2 / 252.0;
  s += -x2 * x2 * x2 * x2 / 240.0;
  // next term 1/(132 n^10) ~ 7e-16
  return {s.value(), 1e-15};
}

/// ψ(x) for x > 0: shift to x >= 16, then the asymptotic series.
inline SeriesValue digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("digamma: argument must be positive and finite");
  CompensatedSum shift;
  while (x < 16.0) {
    shift += -1.0 / x;
    x += 1.0;
  }
  const double ix = 1.0 / x, ix2 = ix * ix;
  // ln x - 1/(2x) - Σ B_2j / (2j x^{2j})
  double series = ix2 * (1.0 / 12 - ix2 * (1.0 / 120 - ix2 * (1.0 / 252 - ix2 * (1.0 / 240 - ix2 / 132))));
  CompensatedSum out;
  out += std::log(x);
  out += -0.5 * ix;
  out += -series;
  out += shift.value();
  // first omitted term 691/(32760 x^12) at x >= 16 is below 1e-15
  return {out.value(), 1e-14};
}

inline double archimedean_c1_digamma(int k) {
  return euler_gamma().value + digamma((k + 3) / 2.0).value;
}

/// Σ_{l>=1} (k+1)/(l(2l+k+1)) = Σ (1/l - 1/(l+c)), c = (k+1)/2, summed
/// directly to L with an Euler–Maclaurin tail.
inline SeriesValue archimedean_c1_direct(int k) {
  const double c = (k + 1) / 2.0;
  constexpr int L = 2000;
  CompensatedSum s;
  for (int l = 1; l < L; ++l)
    s += c / (static_cast<double>(l) * (l + c));
  const double a = L;
  auto f = [&](double x) { return c / (x * (x + c)); };
  auto df = [&](double x) { return -1.0 / (x * x) + 1.0 / ((x + c) * (x + c)); };
  auto d3f = [&](double x) { return -6.0 / std::pow(x, 4) + 6.0 / std::pow(x + c, 4); };
  s += std::log1p(c / a); // ∫_a^∞ f
  s += 0.5 * f(a);
  s += -df(a) / 12.0;
  s += d3f(a) / 720.0;
  const double bound = 120.0 * c / std::pow(a, 6) / 30240.0 + 1e-15 * L;
  return {s.value(), bound};
}

/// Σ_{l>=1} (k+1)/(l(2l+k+1)); both evaluation paths must agree to 1e-10.
inline SeriesValue archimedean_c1(int k) {
  if (k < 3)
    throw DomainError("archimedean_c1: k must be >= 3");
  const double closed = archimedean_c1_digamma(k);
  const auto direct = archimedean_c1_direct(k);
  const double gap = std::abs(closed - direct.value);
  if (gap > 1e-10)
    throw ConsistencyError("archimedean_c1: direct and digamma paths differ by " + std::to_string(gap));
  return {closed, std::max(gap, 1e-14)};
}

/// Σ_{l>=1} (l + (k-1)/2)^{-m}, summed to L and closed with Euler–Maclaurin.
inline SeriesValue hurwitz_tail(int m, int k) {
  if (m < 2)
    throw DomainError("hurwitz_tail: m must be >= 2 (the series diverges otherwise)");
  if (k < 3)
    throw DomainError("hurwitz_tail: k must be >= 3");
  const double shift = (k - 1) / 2.0;
  constexpr int L = 64;
  CompensatedSum s;
  for (int l = L - 1; l >= 1; --l)
    s += std::pow(l + shift, -m);
  const double x = L + shift;
  const double fx = std::pow(x, -m);
  const double mm = m;
  // derivatives of x^{-m}
  const double d1 = -mm * fx / x;
  const double d3 = -mm * (mm + 1) * (mm + 2) * fx / (x * x * x);
  const double d5 = -mm * (mm + 1) * (mm + 2) * (mm + 3) * (mm + 4) * fx / std::pow(x, 5);
  s += x * fx / (mm - 1);
  s += 0.5 * fx;
  s += -d1 / 12.0;
  s += d3 / 720.0;
  s += -d5 / 30240.0;
  double d7 = mm;
  for (int i = 1; i < 7; ++i)
    d7 *= mm + i;
  const double bound = d7 * fx / std::pow(x, 7) / 1209600.0 + 1e-16 * s.value();
  return {s.value(), bound};
}

/// F_n(x) = e^{x/2} Σ_{j=1}^n C(n,j) x^{j-1}/(j-1)! for x < 0, n/2 at 0, 0 for x > 0.
inline double f_n_profile(int n, double x) {
  if (n < 1)
    throw DomainError("f_n_profile: n must be >= 1");
  if (x > 0)
    return 0.0;
  if (x == 0)
    return n / 2.0;
  double sum = 0.0, binom = n, power = 1.0; // C(n,j), x^{j-1}/(j-1)!
  for (int j = 1; j <= n; ++j) {
    sum += binom * power;
    binom = binom * (n - j) / (j + 1);
    power *= x / j;
  }
  return std::exp(x / 2) * sum;
}

/// Φ_n(s) = 1 - (1 - 1/s)^n.
inline std::complex<double> phi_n(int n, std::complex<double> s) {
  if (n < 1)
    throw DomainError("phi_n: n must be >= 1");
  if (s == 0.0)
    throw DomainError("phi_n: s must be nonzero");
  return 1.0 - std::pow(1.0 - 1.0 / s, n);
}

} // namespace hecke
