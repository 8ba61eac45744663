#pragma once

#include <complex>
#include <sstream>
#include <utility>
#include <vector>

#include "hecke/hecke.hpp"

namespace test_support {

using hecke::DirichletCharacter;
using hecke::Integer;

/// Character mod N with (Z/N)^* cyclic generated by g and χ(g) = ζ_r^eg, built
/// through the file format so the loader's validation runs.
inline DirichletCharacter cyclic_character(std::int64_t N, std::int64_t g, int r, int eg) {
  std::vector<int> e(N, DirichletCharacter::kZero);
  std::int64_t x = 1;
  int k = 0;
  do {
    e[x] = static_cast<int>(static_cast<long>(k) * eg % r);
    x = x * g % N;
    ++k;
  } while (x != 1);
  std::ostringstream text;
  text << "DIRCHAR v1 " << N << ' ' << r << '\n';
  for (std::int64_t y = 1; y < N; ++y)
    if (e[y] != DirichletCharacter::kZero)
      text << y << ' ' << e[y] << '\n';
  std::istringstream in(text.str());
  return DirichletCharacter::parse(in, "cyclic");
}

/// q-expansion of ∏ η(d z)^{r_d} to q^M, assuming Σ d r_d = 24 (so it starts at q^1).
inline std::vector<Integer> eta_product(const std::vector<std::pair<int, int>> &factors, std::int64_t M) {
  std::int64_t shift = 0;
  for (const auto &[d, r] : factors)
    shift += static_cast<std::int64_t>(d) * r;
  if (shift != 24)
    throw std::invalid_argument("eta_product: expected sum d*r = 24");
  std::vector<Integer> series(M + 1, 0); // ∏ (1 - q^{dn})^{r_d} to q^{M-1}
  series[0] = 1;
  for (const auto &[d, r] : factors)
    for (std::int64_t n = 1; d * n < M; ++n)
      for (int rep = 0; rep < r; ++rep)
        for (std::int64_t i = M - 1; i >= d * n; --i)
          series[i] -= series[i - d * n];
  std::vector<Integer> out(M + 1, 0);
  for (std::int64_t i = 1; i <= M; ++i)
    out[i] = series[i - 1];
  return out;
}

} // namespace test_support

namespace test_support {

/// ∫_{-∞}^0 F_n(x) e^{(s-1/2)x} dx by composite Simpson on [-L, 0]; the
/// integrand decays like |x|^{n-1} e^{Re(s) x}.
inline std::complex<double> profile_transform(int n, std::complex<double> s, double L = 120.0,
                                              std::int64_t panels = 240000) {
  const double h = L / panels;
  auto f = [&](double x) { return hecke::f_n_profile(n, x) * std::exp((s - 0.5) * x); };
  // the value n/2 at 0 is a single point; Simpson needs the left limit F_n(0-) = n
  std::complex<double> acc = f(-L) + static_cast<double>(n);
  for (std::int64_t i = 1; i < panels; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * f(-L + i * h);
  return acc * (h / 3.0);
}

} // namespace test_support
