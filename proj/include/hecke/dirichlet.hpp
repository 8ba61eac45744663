#pragma once

#include <complex>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hecke/arithmetic.hpp"
#include "hecke/cyclotomic.hpp"

namespace hecke {

/// Kronecker symbol (D/n) for n >= 1.
inline int kronecker_symbol(std::int64_t D, std::int64_t n) {
  if (n < 1)
    throw DomainError("kronecker_symbol: n must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    const std::int64_t r8 = mod(D, 8);
    if (r8 % 2 == 0)
      return 0;
    if (r8 == 3 || r8 == 5)
      result = -result;
  }
  // Jacobi symbol (D/n), n odd
  std::int64_t a = mod(D, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5)
        result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3)
      result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

inline bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 1)
    return true;
  if (D == 0)
    return false;
  auto squarefree = [](std::int64_t v) {
    for (const auto &f : factorize(v < 0 ? -v : v).factors)
      if (f.exponent > 1)
        return false;
    return true;
  };
  if (mod(D, 4) == 1)
    return squarefree(D);
  if (mod(D, 4) == 0) {
    const std::int64_t m = D / 4;
    return (mod(m, 4) == 2 || mod(m, 4) == 3) && squarefree(m);
  }
  return false;
}

/// A Dirichlet character mod N with values χ(x) = ζ_r^{e(x)}.
///
/// The full exponent table (one entry per residue, -1 where gcd(x, N) > 1)
/// is stored, together with the table of the underlying primitive character
/// modulo the conductor.
class DirichletCharacter {
public:
  static constexpr int kZero = -1;

  /// Builds from a full exponent table indexed by x in [0, N); validates all
  /// invariants and throws DataError on violation.
  DirichletCharacter(std::int64_t modulus, int order, std::vector<int> exponents,
                     std::string label = "table")
      : modulus_(modulus), order_(order), exponents_(std::move(exponents)),
        label_(std::move(label)) {
    validate();
    compute_conductor();
  }

  static DirichletCharacter trivial(std::int64_t N) {
    if (N < 1)
      throw DomainError("trivial_character: modulus must be positive");
    std::vector<int> e(N);
    for (std::int64_t x = 0; x < N; ++x)
      e[x] = gcd(x, N) == 1 ? 0 : kZero;
    return DirichletCharacter(N, 1, std::move(e), "trivial");
  }

  /// Kronecker character (D/·) viewed modulo N; |D| must divide N.
  static DirichletCharacter quadratic(std::int64_t D, std::int64_t N) {
    if (!is_fundamental_discriminant(D))
      throw DomainError("quadratic_character: " + std::to_string(D) +
                        " is not a fundamental discriminant");
    if (N < 1 || N % (D < 0 ? -D : D) != 0)
      throw DomainError("quadratic_character: |D| must divide the modulus");
    const int r = D == 1 ? 1 : 2;
    std::vector<int> e(N);
    for (std::int64_t x = 0; x < N; ++x) {
      if (gcd(x, N) != 1) {
        e[x] = kZero;
        continue;
      }
      // (D/x) depends only on x mod |D|; use a positive representative.
      e[x] = kronecker_symbol(D, x == 0 ? N : x) == 1 ? 0 : 1;
    }
    return DirichletCharacter(N, r, std::move(e), "kronecker:" + std::to_string(D));
  }

  /// Character file: `DIRCHAR v1 N r` then one `x e` line per coprime x in [1, N).
  static DirichletCharacter parse(std::istream &in, std::string label = "table") {
    std::string magic, version;
    std::int64_t N = 0;
    int r = 0;
    if (!(in >> magic >> version >> N >> r) || magic != "DIRCHAR" || version != "v1")
      throw DataError("character file: expected header 'DIRCHAR v1 N r'");
    if (N < 1 || r < 1)
      throw DataError("character file: modulus and order must be positive");
    if (N > 10'000'000)
      throw DataError("character file: modulus too large for a table character");
    std::vector<int> e(N, kZero);
    std::vector<char> seen(N, 0);
    if (N == 1)
      e[0] = 0;
    std::int64_t x = 0;
    long long value = 0;
    while (in >> x >> value) {
      if (x < 1 || x >= N)
        throw DataError("character file: residue " + std::to_string(x) + " out of range");
      if (gcd(x, N) != 1)
        throw DataError("character file: residue " + std::to_string(x) + " is not coprime to N");
      if (value < 0 || value >= r)
        throw DataError("character file: exponent out of range at x=" + std::to_string(x));
      if (seen[x])
        throw DataError("character file: duplicate residue " + std::to_string(x));
      seen[x] = 1;
      e[x] = static_cast<int>(value);
    }
    if (!in.eof())
      throw DataError("character file: malformed record");
    for (std::int64_t y = 1; y < N; ++y)
      if (gcd(y, N) == 1 && !seen[y])
        throw DataError("character file: missing residue " + std::to_string(y));
    return DirichletCharacter(N, r, std::move(e), std::move(label));
  }

  static DirichletCharacter load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw DataError("cannot open character file " + path);
    return parse(in, "file:" + path);
  }

  std::string to_file_string() const {
    std::ostringstream out;
    out << "DIRCHAR v1 " << modulus_ << ' ' << order_ << '\n';
    for (std::int64_t x = 1; x < modulus_; ++x)
      if (exponents_[x] != kZero)
        out << x << ' ' << exponents_[x] << '\n';
    return out.str();
  }

  std::int64_t modulus() const { return modulus_; }
  int order() const { return order_; }
  std::int64_t conductor() const { return conductor_; }
  const std::string &label() const { return label_; }
  bool is_trivial() const { return order_ == 1; }
  bool is_real() const { return order_ <= 2; }
  bool is_primitive() const { return conductor_ == modulus_; }

  /// e(x) with χ(x) = ζ_r^{e(x)}, or nullopt when gcd(x, N) > 1.
  std::optional<int> exponent(std::int64_t x) const {
    const int e = exponents_[mod(x, modulus_)];
    if (e == kZero)
      return std::nullopt;
    return e;
  }
  int raw_exponent(std::int64_t x) const { return exponents_[mod(x, modulus_)]; }
  const std::vector<int> &exponent_table() const { return exponents_; }

  /// Exponent of the primitive character underlying χ at x mod 𝔣.
  int primitive_exponent(std::int64_t x) const { return primitive_[mod(x, conductor_)]; }

  CyclotomicRational value(std::int64_t x) const {
    const int e = raw_exponent(x);
    if (e == kZero)
      return CyclotomicRational(order_);
    return CyclotomicRational::root_power(order_, e);
  }

  std::complex<double> complex_value(std::int64_t x) const {
    const int e = raw_exponent(x);
    if (e == kZero)
      return 0.0;
    return root_of_unity(e);
  }

  std::complex<double> root_of_unity(int e) const {
    if (order_ <= 2)
      return e == 0 ? 1.0 : -1.0;
    if (4 * mod(e, order_) == order_)
      return {0.0, 1.0};
    if (4 * mod(e, order_) == 3 * order_)
      return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * e / order_;
    return {std::cos(angle), std::sin(angle)};
  }

  /// χ(-1) as +1 or -1.
  int parity() const {
    const int e = raw_exponent(modulus_ - 1);
    return (2 * e == order_) ? -1 : 1;
  }

  bool compatible_with_weight(int k) const { return parity() == ((k % 2 == 0) ? 1 : -1); }

  /// The character modulo m induced from the primitive character; 𝔣 | m | N.
  DirichletCharacter induce(std::int64_t m) const {
    if (m < 1 || modulus_ % m != 0)
      throw DomainError("induce: target modulus must divide N");
    if (m % conductor_ != 0)
      throw DomainError("induce: conductor " + std::to_string(conductor_) + " does not divide " +
                        std::to_string(m));
    if (m == modulus_)
      return *this;
    std::vector<int> e(m);
    for (std::int64_t x = 0; x < m; ++x)
      e[x] = gcd(x, m) == 1 ? primitive_exponent(x) : kZero;
    return DirichletCharacter(m, order_, std::move(e), label_);
  }

  /// Σ χ(x) over xs, exactly.
  CyclotomicRational char_sum(const std::vector<std::int64_t> &xs) const {
    CyclotomicRational sum(order_);
    for (std::int64_t x : xs) {
      const int e = raw_exponent(x);
      if (e != kZero)
        sum[e] += 1;
    }
    return sum.canonicalize();
  }

  /// 64-bit FNV-1a over (N, r, exponent table), rendered as 16 hex digits.
  std::string hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::int64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= static_cast<std::uint64_t>((v >> (8 * i)) & 0xff);
        h *= 1099511628211ULL;
      }
    };
    mix(modulus_);
    mix(order_);
    for (int e : exponents_)
      mix(e);
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
  }

  friend bool operator==(const DirichletCharacter &a, const DirichletCharacter &b) {
    return a.modulus_ == b.modulus_ && a.order_ == b.order_ && a.exponents_ == b.exponents_;
  }

private:
  void validate() {
    if (modulus_ < 1 || order_ < 1)
      throw DataError("character: modulus and order must be positive");
    if (static_cast<std::int64_t>(exponents_.size()) != modulus_)
      throw DataError("character: exponent table size must equal the modulus");
    for (std::int64_t x = 0; x < modulus_; ++x) {
      const bool coprime = gcd(x, modulus_) == 1;
      const int e = exponents_[x];
      if (coprime && (e < 0 || e >= order_))
        throw DataError("character: exponent out of range at x=" + std::to_string(x));
      if (!coprime && e != kZero)
        throw DataError("character: nonzero value at non-coprime residue " + std::to_string(x));
    }
    if (exponents_[1 % modulus_] != 0)
      throw DataError("character: chi(1) must be 1");
    // Homomorphism check against a generating set of (Z/N)^*: a map with
    // e(xg) = e(x) + e(g) for every x and every generator g is multiplicative.
    std::vector<char> in_subgroup(modulus_, 0);
    in_subgroup[1 % modulus_] = 1;
    std::vector<std::int64_t> subgroup{1 % modulus_};
    std::vector<std::int64_t> generators;
    for (std::int64_t g = 2; g < modulus_; ++g) {
      if (gcd(g, modulus_) != 1 || in_subgroup[g])
        continue;
      generators.push_back(g);
      // Close the subgroup under multiplication by g.
      for (std::size_t i = 0; i < subgroup.size(); ++i) {
        const std::int64_t y = subgroup[i] * g % modulus_;
        if (!in_subgroup[y]) {
          in_subgroup[y] = 1;
          subgroup.push_back(y);
        }
      }
    }
    for (std::int64_t g : generators)
      for (std::int64_t x = 1; x < modulus_; ++x) {
        if (exponents_[x] == kZero)
          continue;
        if (exponents_[x * g % modulus_] != (exponents_[x] + exponents_[g]) % order_)
          throw DataError("character: table is not multiplicative (x=" + std::to_string(x) +
                          ", g=" + std::to_string(g) + ")");
      }
    std::int64_t common = order_;
    for (int e : exponents_)
      if (e != kZero)
        common = gcd(common, e);
    if (common != 1)
      throw DataError("character: declared order " + std::to_string(order_) +
                      " is not the exact order");
  }

  void compute_conductor() {
    for (std::int64_t f : divisors(modulus_)) {
      std::vector<int> table(f, kZero - 1);
      bool constant = true;
      for (std::int64_t x = 0; x < modulus_ && constant; ++x) {
        const int e = exponents_[x];
        if (e == kZero)
          continue;
        int &slot = table[x % f];
        if (slot == kZero - 1)
          slot = e;
        else if (slot != e)
          constant = false;
      }
      if (!constant)
        continue;
      conductor_ = f;
      primitive_.assign(f, kZero);
      for (std::int64_t x = 0; x < f; ++x)
        if (gcd(x, f) == 1)
          primitive_[x] = table[x];
      return;
    }
    throw ConsistencyError("character: no conductor found");
  }

  std::int64_t modulus_;
  int order_;
  std::vector<int> exponents_;
  std::string label_;
  std::int64_t conductor_ = 1;
  std::vector<int> primitive_;
};

/// Parses a character spec: `trivial`, `kronecker:D`, or `file:PATH`.
inline DirichletCharacter parse_character_spec(const std::string &spec, std::int64_t N) {
  if (spec == "trivial")
    return DirichletCharacter::trivial(N);
  if (spec.rfind("kronecker:", 0) == 0) {
    std::int64_t D = 0;
    try {
      D = std::stoll(spec.substr(10));
    } catch (const std::exception &) {
      throw DomainError("bad kronecker discriminant in '" + spec + "'");
    }
    return DirichletCharacter::quadratic(D, N);
  }
  if (spec.rfind("file:", 0) == 0) {
    auto chi = DirichletCharacter::load(spec.substr(5));
    if (chi.modulus() != N)
      throw DomainError("character file modulus " + std::to_string(chi.modulus()) +
                        " does not match level " + std::to_string(N));
    return chi;
  }
  throw DomainError("unknown character spec '" + spec + "'");
}

} // namespace hecke
