#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "hecke/arithmetic.hpp"

namespace hecke {

struct QuadraticForm {
  std::int64_t a, b, c;
  friend bool operator==(const QuadraticForm &, const QuadraticForm &) = default;
  friend auto operator<=>(const QuadraticForm &, const QuadraticForm &) = default;
};

struct ClassNumberEntry {
  std::int64_t discriminant;
  std::int64_t h;
  int w; // number of units: 6 at -3, 4 at -4, else 2
};

inline bool is_negative_discriminant(std::int64_t D) {
  return D < 0 && (mod(D, 4) == 0 || mod(D, 4) == 1);
}

inline void require_discriminant(std::int64_t D) {
  if (!is_negative_discriminant(D))
    throw DomainError("discriminant " + std::to_string(D) + " must be negative and 0 or 1 mod 4");
}

inline int unit_count(std::int64_t D) { return D == -3 ? 6 : (D == -4 ? 4 : 2); }

namespace detail {
inline bool is_reduced_primitive(std::int64_t a, std::int64_t b, std::int64_t c) {
  const std::int64_t abs_b = b < 0 ? -b : b;
  if (abs_b > a || a > c)
    return false;
  if ((abs_b == a || a == c) && b < 0)
    return false;
  return gcd(gcd(a, abs_b), c) == 1;
}
} // namespace detail

/// Primitive reduced forms (a, b, c) of discriminant D < 0:
/// |b| <= a <= c, b >= 0 whenever |b| = a or a = c. Scans a, then b.
inline std::vector<QuadraticForm> reduced_forms(std::int64_t D) {
  require_discriminant(D);
  const std::int64_t absD = -D;
  std::vector<QuadraticForm> out;
  // 3a² <= |D| for reduced forms.
  for (std::int64_t a = 1; 3 * a * a <= absD; ++a) {
    // b ≡ D (mod 2)
    for (std::int64_t b = -a + (mod(-a - D, 2) == 0 ? 0 : 1); b <= a; b += 2) {
      const std::int64_t num = b * b - D;
      if (num % (4 * a) != 0)
        continue;
      const std::int64_t c = num / (4 * a);
      if (detail::is_reduced_primitive(a, b, c))
        out.push_back({a, b, c});
    }
  }
  return out;
}

/// Same set as reduced_forms, enumerated with b in the outer loop and a over
/// the divisors of (b² - D)/4; used to detect boundary double counting.
inline std::vector<QuadraticForm> reduced_forms_by_b(std::int64_t D) {
  require_discriminant(D);
  const std::int64_t absD = -D;
  std::vector<QuadraticForm> out;
  const std::int64_t bmax = isqrt(absD / 3);
  for (std::int64_t b = -bmax; b <= bmax; ++b) {
    if (mod(b - D, 2) != 0)
      continue;
    const std::int64_t ac = (b * b - D) / 4;
    for (std::int64_t a = 1; a * a <= ac; ++a) {
      if (ac % a != 0)
        continue;
      const std::int64_t c = ac / a;
      if (detail::is_reduced_primitive(a, b, c))
        out.push_back({a, b, c});
    }
  }
  return out;
}

inline ClassNumberEntry class_number(std::int64_t D) {
  return {D, static_cast<std::int64_t>(reduced_forms(D).size()), unit_count(D)};
}

/// Class numbers keyed by discriminant.
///
/// `ensure(limit)` fills every discriminant with |D| <= limit at once by
/// enumerating all reduced forms of bounded discriminant; individual misses
/// above the filled range fall back to class_number(D). Readers share the
/// lock; inserts take it exclusively.
class ClassNumberTable {
public:
  ClassNumberTable() = default;
  ClassNumberTable(const ClassNumberTable &) = delete;
  ClassNumberTable &operator=(const ClassNumberTable &) = delete;

  static ClassNumberTable &shared() {
    static ClassNumberTable table;
    return table;
  }

  std::int64_t filled_limit() const {
    std::shared_lock lock(mutex_);
    return filled_;
  }

  void ensure(std::int64_t limit) {
    {
      std::shared_lock lock(mutex_);
      if (limit <= filled_)
        return;
    }
    std::vector<std::int32_t> counts(static_cast<std::size_t>(limit) + 1, 0);
    for (std::int64_t a = 1; 3 * a * a <= limit; ++a) {
      for (std::int64_t b = -a + 1; b <= a; ++b) {
        // c >= a and 4ac - b² <= limit
        const std::int64_t cmax = (limit + b * b) / (4 * a);
        for (std::int64_t c = a; c <= cmax; ++c) {
          if (a == c && b < 0)
            continue;
          if (gcd(gcd(a, b < 0 ? -b : b), c) != 1)
            continue;
          ++counts[4 * a * c - b * b];
        }
      }
    }
    std::unique_lock lock(mutex_);
    if (limit <= filled_)
      return;
    dense_ = std::make_shared<const std::vector<std::int32_t>>(std::move(counts));
    filled_ = limit;
  }

  /// Immutable snapshot of the densely filled range, indexed by |D|.
  std::shared_ptr<const std::vector<std::int32_t>> snapshot() const {
    std::shared_lock lock(mutex_);
    return dense_;
  }

  ClassNumberEntry get(std::int64_t D) {
    require_discriminant(D);
    {
      std::shared_lock lock(mutex_);
      if (-D <= filled_)
        return {D, (*dense_)[-D], unit_count(D)};
      if (auto it = sparse_.find(D); it != sparse_.end())
        return {D, it->second, unit_count(D)};
    }
    const auto entry = class_number(D);
    std::unique_lock lock(mutex_);
    sparse_.emplace(D, entry.h);
    return entry;
  }

private:
  mutable std::shared_mutex mutex_;
  std::int64_t filled_ = 0;
  std::shared_ptr<const std::vector<std::int32_t>> dense_;
  std::unordered_map<std::int64_t, std::int64_t> sparse_;
};

} // namespace hecke
