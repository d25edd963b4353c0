#pragma once

// Small built-in groups used by tests, the acceptance suite and the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "hstab/group.hpp"

namespace hstab {

namespace detail {

template <typename Mul>
FiniteGroup group_from_rule(std::string name, std::size_t n, Mul mul, std::vector<std::string> labels) {
  std::vector<Elem> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = static_cast<Elem>(mul(i, j));
  return FiniteGroup::from_validated_table(std::move(name), n, std::move(table), std::move(labels));
}

}  // namespace detail

inline FiniteGroup trivial_group() {
  return detail::group_from_rule("1", 1, [](std::size_t, std::size_t) { return 0; }, {"1"});
}

inline FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) throw InvalidInput("cyclic group of order 0");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return detail::group_from_rule("Z" + std::to_string(n), n, [n](std::size_t a, std::size_t b) { return (a + b) % n; },
                                 std::move(labels));
}

/// (a, b) has index a * |H| + b.
inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t m = h.order();
  std::vector<std::string> labels;
  for (Elem a = 0; a < g.order(); ++a)
    for (Elem b = 0; b < m; ++b) labels.push_back("(" + g.label(a) + "," + h.label(b) + ")");
  return detail::group_from_rule(
      g.name() + "x" + h.name(), g.order() * m,
      [&](std::size_t x, std::size_t y) {
        return g.mul(static_cast<Elem>(x / m), static_cast<Elem>(y / m)) * m +
               h.mul(static_cast<Elem>(x % m), static_cast<Elem>(y % m));
      },
      std::move(labels));
}

/// Product of cyclic groups of the given orders.
inline FiniteGroup abelian_group(const std::vector<std::size_t>& orders) {
  if (orders.empty()) return trivial_group();
  FiniteGroup g = cyclic_group(orders.front());
  for (std::size_t i = 1; i < orders.size(); ++i) g = direct_product(g, cyclic_group(orders[i]));
  return g;
}

/// Dihedral group of order 2m; r^i s^e has index i + m e.
inline FiniteGroup dihedral_group(std::size_t m) {
  if (m < 1) throw InvalidInput("dihedral group needs m >= 1");
  std::vector<std::string> labels;
  for (std::size_t e = 0; e < 2; ++e)
    for (std::size_t i = 0; i < m; ++i) labels.push_back("r" + std::to_string(i) + (e ? "s" : ""));
  return detail::group_from_rule(
      "D" + std::to_string(2 * m), 2 * m,
      [m](std::size_t x, std::size_t y) {
        const std::size_t i = x % m, e = x / m, j = y % m, f = y / m;
        const std::size_t k = e ? (i + m - j) % m : (i + j) % m;
        return k + m * ((e + f) % 2);
      },
      std::move(labels));
}

/// Dicyclic group of order 4m: <a, x | a^2m, x^2 = a^m, x a x^-1 = a^-1>; a^i x^e has index i + 2m e.
inline FiniteGroup dicyclic_group(std::size_t m) {
  if (m < 1) throw InvalidInput("dicyclic group needs m >= 1");
  const std::size_t k = 2 * m;
  std::vector<std::string> labels;
  for (std::size_t e = 0; e < 2; ++e)
    for (std::size_t i = 0; i < k; ++i) labels.push_back("a" + std::to_string(i) + (e ? "x" : ""));
  return detail::group_from_rule(
      m == 2 ? "Q8" : "Dic" + std::to_string(m), 2 * k,
      [m, k](std::size_t x, std::size_t y) {
        const std::size_t i = x % k, e = x / k, j = y % k, f = y / k;
        if (e == 0) return (i + j) % k + k * f;
        if (f == 0) return (i + k - j) % k + k;
        return (i + k - j + m) % k;
      },
      std::move(labels));
}

inline FiniteGroup symmetric_group(std::size_t degree) {
  if (degree < 2) return trivial_group();
  std::vector<std::int64_t> cycle(degree), swap(degree);
  for (std::size_t i = 0; i < degree; ++i) {
    cycle[i] = static_cast<std::int64_t>((i + 1) % degree);
    swap[i] = static_cast<std::int64_t>(i);
  }
  std::swap(swap[0], swap[1]);
  return group_from_permutations("S" + std::to_string(degree), degree, {cycle, swap});
}

inline FiniteGroup alternating_group_4() {
  return group_from_permutations("A4", 4, {{1, 2, 0, 3}, {1, 0, 3, 2}});
}

/// Every abelian group of order n, as lists of cyclic factor orders (prime-power form).
inline std::vector<std::vector<std::size_t>> abelian_group_types(std::size_t n) {
  // partitions of each prime exponent
  std::vector<std::pair<std::size_t, std::size_t>> primes;
  std::size_t m = n;
  for (std::size_t p = 2; p * p <= m; ++p) {
    std::size_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) primes.emplace_back(p, e);
  }
  if (m > 1) primes.emplace_back(m, 1);
  auto partitions = [](std::size_t e) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t left, std::size_t maxpart) -> void {
      if (left == 0) {
        out.push_back(cur);
        return;
      }
      for (std::size_t k = std::min(left, maxpart); k >= 1; --k) {
        cur.push_back(k);
        self(self, left - k, k);
        cur.pop_back();
      }
    };
    rec(rec, e, e);
    return out;
  };
  std::vector<std::vector<std::size_t>> result{{}};
  for (const auto& [p, e] : primes) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& base : result)
      for (const auto& part : partitions(e)) {
        auto t = base;
        for (std::size_t k : part) {
          std::size_t q = 1;
          for (std::size_t i = 0; i < k; ++i) q *= p;
          t.push_back(q);
        }
        next.push_back(std::move(t));
      }
    result = std::move(next);
  }
  return result;
}

}  // namespace hstab
