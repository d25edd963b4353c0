#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hstab/errors.hpp"
#include "hstab/lattice.hpp"

namespace hstab {

using Elem = std::uint32_t;
inline constexpr Elem kIdentity = 0;

/// Finite group given by its full multiplication table. Index 0 is the identity.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  std::size_t order() const { return n_; }
  const std::string& name() const { return name_; }
  const std::string& label(Elem g) const { return labels_[g]; }
  const std::vector<std::string>& labels() const { return labels_; }

  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  /// u x u^-1
  Elem conj(Elem u, Elem x) const { return mul(mul(u, x), inv_[u]); }
  /// a b a^-1 b^-1
  Elem commutator(Elem a, Elem b) const { return mul(mul(a, b), mul(inv_[a], inv_[b])); }
  std::size_t element_order(Elem a) const { return orders_[a]; }
  bool is_abelian() const {
    for (Elem a = 0; a < n_; ++a)
      for (Elem b = a + 1; b < n_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  std::span<const Elem> table() const { return table_; }

  static FiniteGroup from_validated_table(std::string name, std::size_t n, std::vector<Elem> table,
                                          std::vector<std::string> labels) {
    FiniteGroup g;
    g.name_ = std::move(name);
    g.n_ = n;
    g.table_ = std::move(table);
    g.labels_ = std::move(labels);
    if (g.labels_.empty()) {
      for (std::size_t i = 0; i < n; ++i) g.labels_.push_back(std::to_string(i));
    }
    g.inv_.assign(n, 0);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (g.mul(a, b) == kIdentity) g.inv_[a] = b;
    g.orders_.assign(n, 1);
    for (Elem a = 0; a < n; ++a) {
      Elem x = a;
      std::size_t k = 1;
      while (x != kIdentity) {
        x = g.mul(x, a);
        ++k;
      }
      g.orders_[a] = k;
    }
    return g;
  }

 private:
  std::string name_;
  std::size_t n_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inv_;
  std::vector<std::size_t> orders_;
  std::vector<std::string> labels_;
};

struct GroupLimits {
  std::size_t max_order = 4096;
  std::size_t full_associativity_limit = 64;
  std::size_t associativity_samples = 200000;
};

/// Validates the table (shape, permutation rows and columns, identity at 0, associativity).
inline FiniteGroup group_from_table(std::string name, const std::vector<std::vector<std::int64_t>>& rows,
                                    std::vector<std::string> labels = {}, const GroupLimits& limits = {}) {
  const std::size_t n = rows.size();
  if (n == 0) throw InvalidInput("multiplication table is empty");
  if (n > limits.max_order) throw BudgetExceeded("group order " + std::to_string(n) + " exceeds cap " +
                                                 std::to_string(limits.max_order));
  if (!labels.empty() && labels.size() != n) throw InvalidInput("label count does not match group order");
  std::vector<Elem> table(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidInput("multiplication table is not square");
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t x = rows[i][j];
      if (x < 0 || static_cast<std::size_t>(x) >= n)
        throw InvalidInput("table entry out of range at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      table[i * n + j] = static_cast<Elem>(x);
    }
  }
  std::vector<char> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[table[i * n + j]]) throw InvalidInput("row not a permutation: row " + std::to_string(i));
      seen[table[i * n + j]] = 1;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[table[i * n + j]]) throw InvalidInput("column not a permutation: column " + std::to_string(j));
      seen[table[i * n + j]] = 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (table[i] != i || table[i * n] != i) throw InvalidInput("index 0 is not the identity");
  auto m = [&](std::size_t a, std::size_t b) { return static_cast<std::size_t>(table[a * n + b]); };
  if (n <= limits.full_associativity_limit) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (m(m(i, j), k) != m(i, m(j, k)))
            throw InvalidInput("table is not associative at (" + std::to_string(i) + "," + std::to_string(j) +
                               "," + std::to_string(k) + ")");
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < limits.associativity_samples; ++s) {
      const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
      if (m(m(i, j), k) != m(i, m(j, k))) throw InvalidInput("table is not associative (sampled)");
    }
  }
  return FiniteGroup::from_validated_table(std::move(name), n, std::move(table), std::move(labels));
}

inline std::string cycle_notation(const std::vector<std::uint32_t>& perm) {
  std::string out;
  std::vector<char> done(perm.size());
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (done[start] || perm[start] == start) continue;
    out += "(";
    std::size_t x = start;
    bool first = true;
    while (!done[x]) {
      done[x] = 1;
      if (!first) out += " ";
      out += std::to_string(x);
      first = false;
      x = perm[x];
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

/// Closure of permutation generators. Product convention: (p*q)(x) = p(q(x)).
inline FiniteGroup group_from_permutations(std::string name, std::size_t degree,
                                           const std::vector<std::vector<std::int64_t>>& generators,
                                           const GroupLimits& limits = {}) {
  using Perm = std::vector<std::uint32_t>;
  std::vector<Perm> gens;
  for (const auto& g : generators) {
    if (g.size() != degree) throw InvalidInput("generator length does not match degree");
    Perm p(degree);
    std::vector<char> seen(degree);
    for (std::size_t i = 0; i < degree; ++i) {
      if (g[i] < 0 || static_cast<std::size_t>(g[i]) >= degree) throw InvalidInput("generator image out of range");
      p[i] = static_cast<std::uint32_t>(g[i]);
      if (seen[p[i]]) throw InvalidInput("generator is not a permutation");
      seen[p[i]] = 1;
    }
    gens.push_back(std::move(p));
  }
  auto compose = [degree](const Perm& p, const Perm& q) {
    Perm r(degree);
    for (std::size_t x = 0; x < degree; ++x) r[x] = p[q[x]];
    return r;
  };
  Perm id(degree);
  std::iota(id.begin(), id.end(), 0u);
  std::vector<Perm> elems{id};
  std::map<Perm, Elem> index{{id, 0}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& s : gens) {
      Perm y = compose(elems[head], s);
      if (index.count(y)) continue;
      if (elems.size() >= limits.max_order)
        throw BudgetExceeded("permutation closure exceeds size cap " + std::to_string(limits.max_order));
      index.emplace(y, static_cast<Elem>(elems.size()));
      elems.push_back(std::move(y));
    }
  }
  const std::size_t n = elems.size();
  std::vector<Elem> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = index.at(compose(elems[i], elems[j]));
  std::vector<std::string> labels;
  for (const auto& p : elems) labels.push_back(cycle_notation(p));
  return FiniteGroup::from_validated_table(std::move(name), n, std::move(table), std::move(labels));
}

/// Conjugacy classes with ids ordered by minimal element; class 0 is {identity}.
struct ConjugacyClassTable {
  std::vector<std::size_t> class_of;
  std::vector<std::vector<Elem>> classes;

  std::size_t size() const { return classes.size(); }
  std::vector<std::size_t> nontrivial_ids() const {
    std::vector<std::size_t> ids;
    for (std::size_t c = 1; c < classes.size(); ++c) ids.push_back(c);
    return ids;
  }
};

inline ConjugacyClassTable conjugacy_classes(const FiniteGroup& g) {
  const std::size_t n = g.order();
  ConjugacyClassTable t;
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  t.class_of.assign(n, unset);
  for (Elem x = 0; x < n; ++x) {
    if (t.class_of[x] != unset) continue;
    const std::size_t id = t.classes.size();
    std::vector<Elem> cls;
    for (Elem u = 0; u < n; ++u) {
      const Elem y = g.conj(u, x);
      if (t.class_of[y] == unset) {
        t.class_of[y] = id;
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    t.classes.push_back(std::move(cls));
  }
  return t;
}

/// Sorted elements of the subgroup generated by s.
inline std::vector<Elem> subgroup_generated(const FiniteGroup& g, std::span<const Elem> s) {
  std::vector<char> in(g.order());
  std::vector<Elem> out{kIdentity};
  in[kIdentity] = 1;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (Elem x : s) {
      const Elem y = g.mul(out[head], x);
      if (!in[y]) {
        in[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool generates(const FiniteGroup& g, std::span<const Elem> s) {
  return subgroup_generated(g, s).size() == g.order();
}

inline std::vector<Elem> normal_closure(const FiniteGroup& g, std::span<const Elem> s) {
  std::vector<Elem> conjugates;
  for (Elem x : s)
    for (Elem u = 0; u < g.order(); ++u) conjugates.push_back(g.conj(u, x));
  std::sort(conjugates.begin(), conjugates.end());
  conjugates.erase(std::unique(conjugates.begin(), conjugates.end()), conjugates.end());
  return subgroup_generated(g, conjugates);
}

struct QuotientGroup {
  FiniteGroup group;
  std::vector<Elem> projection;
};

/// G / N for a normal subgroup N (given as an element list). Cosets are indexed
/// in order of their minimal element, so the identity coset is 0.
inline QuotientGroup quotient_by_normal(const FiniteGroup& g, std::span<const Elem> normal, std::string name) {
  const std::size_t n = g.order();
  constexpr Elem unset = static_cast<Elem>(-1);
  std::vector<Elem> proj(n, unset);
  std::vector<Elem> reps;
  for (Elem x = 0; x < n; ++x) {
    if (proj[x] != unset) continue;
    const Elem id = static_cast<Elem>(reps.size());
    reps.push_back(x);
    for (Elem k : normal) proj[g.mul(x, k)] = id;
  }
  const std::size_t q = reps.size();
  if (q * normal.size() != n) throw InvalidInput("quotient by a set that is not a subgroup");
  std::vector<Elem> table(q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) table[i * q + j] = proj[g.mul(reps[i], reps[j])];
  std::vector<std::string> labels;
  for (Elem r : reps) labels.push_back(g.label(r) + "N");
  return QuotientGroup{FiniteGroup::from_validated_table(std::move(name), q, std::move(table), std::move(labels)),
                       std::move(proj)};
}

/// Finitely generated abelian group in invariant-factor form; elements are
/// coordinate vectors (torsion coordinates first, then free ones).
struct FiniteAbelianGroup {
  std::vector<std::int64_t> factors;
  std::size_t free_rank = 0;

  std::size_t rank() const { return factors.size() + free_rank; }

  void normalize(std::vector<std::int64_t>& v) const {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      v[i] %= factors[i];
      if (v[i] < 0) v[i] += factors[i];
    }
  }
  bool is_zero(const std::vector<std::int64_t>& v) const {
    std::vector<std::int64_t> w = v;
    normalize(w);
    return std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x == 0; });
  }
  std::string to_string() const {
    std::string s;
    for (auto d : factors) s += (s.empty() ? "" : " x ") + ("Z/" + std::to_string(d));
    for (std::size_t i = 0; i < free_rank; ++i) s += (s.empty() ? "" : " x ") + std::string("Z");
    return s.empty() ? "0" : s;
  }
};

inline FiniteAbelianGroup abelian_group_from_shape(const AbelianShape& shape) {
  FiniteAbelianGroup a;
  for (const auto& d : shape.torsion) a.factors.push_back(detail::to_int64(d));
  a.free_rank = shape.free_rank;
  return a;
}

struct Abelianization {
  FiniteAbelianGroup group;
  std::vector<std::vector<std::int64_t>> projection;
};

inline Abelianization abelianization(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<Elem> comms;
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) comms.push_back(g.commutator(a, b));
  std::sort(comms.begin(), comms.end());
  comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
  const std::vector<Elem> derived = subgroup_generated(g, comms);
  const QuotientGroup q = quotient_by_normal(g, derived, g.name() + "^ab");
  const std::size_t m = q.group.order();
  // Z^Q / <e_a + e_b - e_ab> is Q itself
  IntMatrix rel(m * m, m);
  for (Elem a = 0; a < m; ++a)
    for (Elem b = 0; b < m; ++b) {
      const std::size_t r = static_cast<std::size_t>(a) * m + b;
      rel(r, a) += 1;
      rel(r, b) += 1;
      rel(r, q.group.mul(a, b)) -= 1;
    }
  const QuotientPresentation pres = quotient_presentation(m, rel);
  Abelianization out;
  out.group = abelian_group_from_shape(pres.shape());
  std::vector<std::vector<std::int64_t>> coset_coords(m);
  for (std::size_t c = 0; c < m; ++c)
    for (const auto& x : pres.coordinates_of_basis(c)) coset_coords[c].push_back(detail::to_int64(x));
  for (Elem x = 0; x < n; ++x) out.projection.push_back(coset_coords[q.projection[x]]);
  return out;
}

/// Automorphism as a permutation of element indices.
struct Automorphism {
  std::vector<Elem> perm;

  Elem operator()(Elem x) const { return perm[x]; }
  /// (this after other)(x) = this(other(x))
  Automorphism after(const Automorphism& other) const {
    Automorphism r{std::vector<Elem>(perm.size())};
    for (std::size_t x = 0; x < perm.size(); ++x) r.perm[x] = perm[other.perm[x]];
    return r;
  }
  Automorphism inverse() const {
    Automorphism r{std::vector<Elem>(perm.size())};
    for (std::size_t x = 0; x < perm.size(); ++x) r.perm[perm[x]] = static_cast<Elem>(x);
    return r;
  }
  friend bool operator==(const Automorphism&, const Automorphism&) = default;
  friend auto operator<=>(const Automorphism&, const Automorphism&) = default;
};

inline Automorphism identity_automorphism(std::size_t n) {
  Automorphism a{std::vector<Elem>(n)};
  std::iota(a.perm.begin(), a.perm.end(), 0u);
  return a;
}

inline bool is_automorphism(const FiniteGroup& g, const Automorphism& f) {
  const std::size_t n = g.order();
  if (f.perm.size() != n || f.perm[0] != kIdentity) return false;
  std::vector<char> seen(n);
  for (Elem x : f.perm) {
    if (x >= n || seen[x]) return false;
    seen[x] = 1;
  }
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (f(g.mul(a, b)) != g.mul(f(a), f(b))) return false;
  return true;
}

/// Lexicographically first generating tuple of minimal length.
inline std::vector<Elem> minimal_generating_tuple(const FiniteGroup& g) {
  const std::size_t n = g.order();
  if (n == 1) return {};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Elem> t(k);
    std::iota(t.begin(), t.end(), 1u);
    while (true) {
      if (t.back() < n && generates(g, t)) return t;
      // next increasing tuple over 1..n-1
      std::size_t i = k;
      while (i > 0 && t[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++t[i - 1];
      for (std::size_t j = i; j < k; ++j) t[j] = t[j - 1] + 1;
    }
  }
  throw InvariantViolation("no generating tuple found");
}

namespace detail {

// Extend generator images along the right Cayley graph; empty result if
// inconsistent or not bijective.
inline std::vector<Elem> extend_images(const FiniteGroup& g, std::span<const Elem> gens,
                                       std::span<const Elem> images) {
  const std::size_t n = g.order();
  constexpr Elem unset = static_cast<Elem>(-1);
  std::vector<Elem> map(n, unset);
  std::vector<char> hit(n);
  map[kIdentity] = kIdentity;
  hit[kIdentity] = 1;
  std::vector<Elem> queue{kIdentity};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Elem x = queue[head];
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const Elem y = g.mul(x, gens[s]);
      const Elem fy = g.mul(map[x], images[s]);
      if (map[y] == unset) {
        if (hit[fy]) return {};
        map[y] = fy;
        hit[fy] = 1;
        queue.push_back(y);
      } else if (map[y] != fy) {
        return {};
      }
    }
  }
  return map;
}

}  // namespace detail

/// All automorphisms, sorted, found by backtracking over images of a minimal
/// generating tuple that preserve element orders.
inline std::vector<Automorphism> automorphism_group(const FiniteGroup& g, std::size_t cap = 24) {
  const std::size_t n = g.order();
  if (n > cap)
    throw BudgetExceeded("automorphism search: group order " + std::to_string(n) + " exceeds cap " +
                         std::to_string(cap));
  const std::vector<Elem> gens = minimal_generating_tuple(g);
  std::vector<Automorphism> out;
  std::vector<Elem> images(gens.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == gens.size()) {
      auto map = detail::extend_images(g, gens, images);
      if (!map.empty()) out.push_back(Automorphism{std::move(map)});
      return;
    }
    for (Elem y = 0; y < n; ++y) {
      if (g.element_order(y) != g.element_order(gens[i])) continue;
      images[i] = y;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline Automorphism inner_automorphism(const FiniteGroup& g, Elem u) {
  Automorphism a{std::vector<Elem>(g.order())};
  for (Elem x = 0; x < g.order(); ++x) a.perm[x] = g.conj(u, x);
  return a;
}

}  // namespace hstab
