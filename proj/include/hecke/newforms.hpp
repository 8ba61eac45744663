#pragma once

#include <cmath>
#include <cstdint>
#include <map>

#include "hecke/trace_formula.hpp"

namespace hecke {

/// ν_m = dimension of the newform subspace of S_k(m, χ_m) for each 𝔣 | m | N.
struct NewformDimensionTable {
  int weight = 0;
  std::int64_t level = 1;
  std::int64_t conductor = 1;
  std::map<std::int64_t, std::int64_t> nu;           // m -> ν_m
  std::map<std::int64_t, std::int64_t> dimensions;   // m -> dim S_k(m, χ_m)

  /// Σ ν_m d(N/m): the dimension of S_k(N, χ) rebuilt from newforms.
  std::int64_t reconstructed_dimension() const {
    std::int64_t total = 0;
    for (const auto &[m, v] : nu)
      total += v * divisor_count(level / m);
    return total;
  }
};

/// Inverts dim S_k(m′) = Σ_{𝔣|m|m′} ν_m d(m′/m) over the divisors of N in
/// ascending order.
inline NewformDimensionTable nu_table(const HeckeSpace &space, TraceCache *cache = nullptr) {
  NewformDimensionTable out;
  out.weight = space.weight();
  out.level = space.level();
  out.conductor = space.conductor();
  for (std::int64_t m : divisors(out.level)) {
    if (m % out.conductor != 0)
      continue;
    const HeckeSpace sub(space.weight(), space.character().induce(m));
    const std::int64_t dim = TraceFormula(sub, cache).dimension();
    std::int64_t nu = dim;
    for (const auto &[d, v] : out.nu)
      if (m % d == 0)
        nu -= v * divisor_count(m / d);
    if (nu < 0)
      throw ConsistencyError("negative newform dimension nu_" + std::to_string(m) + " = " +
                             std::to_string(nu));
    out.dimensions[m] = dim;
    out.nu[m] = nu;
  }
  return out;
}

/// Σ_{𝔣|m|N} ν_m d(N/m) ln m, i.e. Σ_j ln N_j over a basis of newforms and
/// their lifts. The caller multiplies by n/2.
inline double level_log_term(const NewformDimensionTable &table) {
  double total = 0.0;
  for (const auto &[m, v] : table.nu)
    if (v != 0 && m > 1)
      total += static_cast<double>(v * divisor_count(table.level / m)) * std::log(static_cast<double>(m));
  return total;
}

/// Number of linear factors of the Euler factor at p | N for a newform of
/// level m with character conductor 𝔣 | m: two when p ∤ m, none when the
/// eigenvalue vanishes (p² | m and 𝔣 | m/p), otherwise one.
inline int local_linear_factors(std::int64_t m, std::int64_t conductor, std::int64_t p) {
  if (m % p != 0)
    return 2;
  if (m % (p * p) == 0 && (m / p) % conductor == 0)
    return 0;
  return 1;
}

/// Σ_j Σ_{p|N} (linear factors of L_{g_j} at p)·ln p over the lifted newform
/// basis; the hadamard-corrected convention adds n/2 times this.
inline double hadamard_level_sum(const NewformDimensionTable &table) {
  const auto primes = factorize(table.level).factors;
  double total = 0.0;
  for (const auto &[m, v] : table.nu) {
    if (v == 0)
      continue;
    double per_form = 0.0;
    for (const auto &f : primes)
      per_form += local_linear_factors(m, table.conductor, f.prime) * std::log(static_cast<double>(f.prime));
    total += static_cast<double>(v * divisor_count(table.level / m)) * per_form;
  }
  return total;
}

} // namespace hecke
