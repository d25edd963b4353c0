#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "hstab/bar_homology.hpp"
#include "hstab/fold.hpp"
#include "hstab/group.hpp"

namespace hstab {

/// (c_1..c_d; a_1, b_1, .., a_g, b_g), branch entries first.
struct HurwitzVector {
  std::size_t d = 0;
  std::size_t genus = 0;
  std::vector<Elem> entries;

  HurwitzVector() = default;
  HurwitzVector(std::size_t d_, std::size_t genus_, std::vector<Elem> e) : d(d_), genus(genus_), entries(std::move(e)) {
    if (entries.size() != d + 2 * genus)
      throw InvalidInput("Hurwitz vector length " + std::to_string(entries.size()) + " != d + 2g = " +
                         std::to_string(d + 2 * genus));
  }

  std::size_t size() const { return entries.size(); }
  Elem c(std::size_t i) const { return entries[i]; }
  Elem a(std::size_t j) const { return entries[d + 2 * j]; }
  Elem b(std::size_t j) const { return entries[d + 2 * j + 1]; }
  std::span<const Elem> branch() const { return {entries.data(), d}; }

  friend bool operator==(const HurwitzVector&, const HurwitzVector&) = default;
  friend auto operator<=>(const HurwitzVector&, const HurwitzVector&) = default;
};

inline void check_entries(const FiniteGroup& g, const HurwitzVector& v) {
  for (Elem x : v.entries)
    if (x >= g.order()) throw InvalidInput("entry " + std::to_string(x) + " is not a group element");
}

/// prod c_i * prod [a_j, b_j], left to right.
inline Elem evaluate(const FiniteGroup& g, const HurwitzVector& v) {
  Elem p = kIdentity;
  for (std::size_t i = 0; i < v.d; ++i) p = g.mul(p, v.c(i));
  for (std::size_t j = 0; j < v.genus; ++j) p = g.mul(p, g.commutator(v.a(j), v.b(j)));
  return p;
}

inline bool is_hurwitz_generating_system(const FiniteGroup& g, const HurwitzVector& v) {
  for (std::size_t i = 0; i < v.d; ++i)
    if (v.c(i) == kIdentity) return false;
  if (evaluate(g, v) != kIdentity) return false;
  return generates(g, v.entries);
}

/// Counts per conjugacy class id; entry 0 (identity class) is always 0.
using NuType = std::vector<std::int64_t>;

inline NuType nu_type(const ConjugacyClassTable& classes, const HurwitzVector& v) {
  NuType nu(classes.size());
  for (Elem c : v.branch()) {
    if (c == kIdentity) throw PreconditionError("nu-type needs nontrivial branch entries");
    ++nu[classes.class_of[c]];
  }
  return nu;
}

inline std::int64_t nu_total(const NuType& nu) {
  std::int64_t s = 0;
  for (auto x : nu) s += x;
  return s;
}

/// Class sum of the nu-type vanishes in G^ab.
inline bool is_admissible(const NuType& nu, const ConjugacyClassTable& classes, const Abelianization& ab) {
  std::vector<std::int64_t> sum(ab.group.rank());
  for (std::size_t c = 1; c < nu.size(); ++c) {
    if (nu[c] < 0) return false;
    const auto& proj = ab.projection[classes.classes[c].front()];
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += nu[c] * proj[k];
  }
  return ab.group.is_zero(sum);
}

inline ClassMask nu_support(const NuType& nu) {
  ClassMask m = 0;
  for (std::size_t c = 1; c < nu.size(); ++c)
    if (nu[c] > 0) m |= ClassMask{1} << c;
  return m;
}

/// c_1^ .. c_d^ [a_1^, b_1^] .. as a letter sequence.
inline std::vector<Letter> tautological_word(const HurwitzVector& v) {
  std::vector<Letter> w;
  w.reserve(v.d + 4 * v.genus);
  for (std::size_t i = 0; i < v.d; ++i) w.push_back({v.c(i), 1});
  for (std::size_t j = 0; j < v.genus; ++j) {
    w.push_back({v.a(j), 1});
    w.push_back({v.b(j), 1});
    w.push_back({v.a(j), -1});
    w.push_back({v.b(j), -1});
  }
  return w;
}

/// Element of K_Gamma stored by canonical coordinates. Classes for
/// different Gamma are never equal.
struct EpsilonClass {
  ClassMask gamma = 0;
  std::vector<std::int64_t> coords;

  friend bool operator==(const EpsilonClass&, const EpsilonClass&) = default;
  friend auto operator<=>(const EpsilonClass&, const EpsilonClass&) = default;
};

namespace detail {

struct CoordinateSink {
  const CoordinateTable* table;
  std::int64_t* acc;
  void add(std::size_t i, std::int64_t c) {
    const std::int64_t* r = table->row(i);
    for (std::size_t k = 0; k < table->dim; ++k) acc[k] += c * r[k];
  }
};

}  // namespace detail

/// Coordinates in K_gamma of the relation class of v's tautological word.
inline std::vector<std::int64_t> epsilon_coordinates(const KGammaGroup& k, const FiniteGroup& g,
                                                     const HurwitzVector& v) {
  std::vector<std::int64_t> acc(k.dimension());
  detail::CoordinateSink sink{&k.table(), acc.data()};
  // start -[1|1] and finish +[1|1] cancel
  Elem p = kIdentity;
  for (std::size_t i = 0; i < v.d; ++i) {
    const Letter l{v.c(i), 1};
    p = fold_letters(g, std::span<const Letter>(&l, 1), p, sink);
  }
  for (std::size_t j = 0; j < v.genus; ++j) {
    const Letter w[4] = {{v.a(j), 1}, {v.b(j), 1}, {v.a(j), -1}, {v.b(j), -1}};
    p = fold_letters(g, std::span<const Letter>(w, 4), p, sink);
  }
  if (p != kIdentity) throw PreconditionError("epsilon needs evaluation equal to the identity");
  k.normalize(acc);
  return acc;
}

inline EpsilonClass epsilon(const HomologyEngine& engine, const HurwitzVector& v) {
  for (Elem c : v.branch())
    if (c == kIdentity) throw PreconditionError("epsilon needs nontrivial branch entries");
  const ClassMask gamma = engine.mask_of(v.branch());
  return EpsilonClass{gamma, epsilon_coordinates(engine.k_gamma(gamma), engine.group(), v)};
}

/// nu recovered from the image of epsilon in G_Gamma^ab.
inline NuType nu_from_epsilon(const HomologyEngine& engine, const EpsilonClass& e) {
  const KGammaGroup& k = engine.k_gamma(e.gamma);
  const auto img = k.abelianization_image(e.coords);
  NuType nu(engine.classes().size());
  const auto& basis = k.abelianization_basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i].second) nu[basis[i].first] = img[i];
  return nu;
}

/// True if the image of e in G_Gamma^ab has zero components outside the classes of Gamma.
inline bool epsilon_image_is_pure(const HomologyEngine& engine, const EpsilonClass& e) {
  const KGammaGroup& k = engine.k_gamma(e.gamma);
  const auto img = k.abelianization_image(e.coords);
  const auto& basis = k.abelianization_basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!basis[i].second && img[i] != 0) return false;
  return true;
}

/// Appends h trivial handles (1, 1).
inline HurwitzVector stabilize(const HurwitzVector& v, std::size_t h) {
  HurwitzVector w = v;
  w.genus += h;
  w.entries.resize(w.entries.size() + 2 * h, kIdentity);
  return w;
}

struct EnumerationLimits {
  std::uint64_t max_states = 100000000;
  double max_seconds = 0;  // 0: unlimited
};

namespace detail {

// Reusable generation test without per-call allocation.
class GenerationChecker {
 public:
  explicit GenerationChecker(const FiniteGroup& g) : g_(&g), in_(g.order()), list_(g.order()) {}

  bool operator()(std::span<const Elem> s) {
    const std::size_t n = g_->order();
    ++stamp_;
    if (stamp_ == 0) {
      std::fill(in_.begin(), in_.end(), 0);
      stamp_ = 1;
    }
    std::size_t size = 1;
    list_[0] = kIdentity;
    in_[kIdentity] = stamp_;
    for (std::size_t head = 0; head < size; ++head)
      for (Elem x : s) {
        const Elem y = g_->mul(list_[head], x);
        if (in_[y] != stamp_) {
          in_[y] = stamp_;
          list_[size++] = y;
          if (size == n) return true;
        }
      }
    return size == n;
  }

 private:
  const FiniteGroup* g_;
  std::vector<std::uint32_t> in_;
  std::vector<Elem> list_;
  std::uint32_t stamp_ = 0;
};

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap, const std::string& what) {
  if (a != 0 && b > cap / a) throw BudgetExceeded(what + " exceeds state budget " + std::to_string(cap));
  return a * b;
}

}  // namespace detail

/// Number of raw tuples the enumerator visits.
inline std::uint64_t enumeration_size(std::size_t branch_choices, std::size_t n, std::size_t genus, std::size_t d,
                                      std::uint64_t cap) {
  std::uint64_t total = 1;
  const std::string what = "raw tuple count";
  for (std::size_t i = 0; i < d; ++i) total = detail::checked_mul(total, branch_choices, cap, what);
  for (std::size_t j = 0; j < 2 * genus; ++j) total = detail::checked_mul(total, n, cap, what);
  if (total > cap) throw BudgetExceeded(what + " " + std::to_string(total) + " exceeds state budget " + std::to_string(cap));
  return total;
}

/// Calls f(const HurwitzVector&) for every element of HS(G; genus, d), in
/// lexicographic order of entries. An optional nu filter fixes the class counts.
template <typename F>
void enumerate_hs(const FiniteGroup& g, const ConjugacyClassTable& classes, std::size_t genus, std::size_t d,
                  const std::optional<NuType>& filter, const EnumerationLimits& limits, F&& f) {
  const std::size_t n = g.order();
  std::vector<Elem> branch_range;
  if (filter) {
    if (filter->size() != classes.size()) throw InvalidInput("nu filter has wrong length");
    if ((*filter)[0] != 0) throw InvalidInput("nu filter assigns the identity class");
    if (nu_total(*filter) != static_cast<std::int64_t>(d)) throw InvalidInput("nu filter does not sum to d");
    for (Elem x = 1; x < n; ++x)
      if ((*filter)[classes.class_of[x]] > 0) branch_range.push_back(x);
  } else {
    for (Elem x = 1; x < n; ++x) branch_range.push_back(x);
  }
  const std::size_t len = d + 2 * genus;
  if (d > 0 && branch_range.empty()) return;
  enumeration_size(branch_range.size(), n, genus, d, limits.max_states);

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::size_t> digit(len, 0);
  HurwitzVector v(d, genus, std::vector<Elem>(len));
  for (std::size_t i = 0; i < d; ++i) v.entries[i] = branch_range[0];
  detail::GenerationChecker gen(g);
  std::vector<std::int64_t> counts(classes.size());
  std::uint64_t ticks = 0;
  while (true) {
    if (limits.max_seconds > 0 && (++ticks & 0xffff) == 0) {
      const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (el > limits.max_seconds) throw BudgetExceeded("enumeration exceeded time budget");
    }
    if (evaluate(g, v) == kIdentity) {
      bool ok = true;
      if (filter) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < d; ++i) ++counts[classes.class_of[v.entries[i]]];
        ok = counts == *filter;
      }
      if (ok && gen(v.entries)) f(std::as_const(v));
    }
    std::size_t pos = len;
    while (pos > 0) {
      --pos;
      const std::size_t limit = pos < d ? branch_range.size() : n;
      if (++digit[pos] < limit) {
        v.entries[pos] = pos < d ? branch_range[digit[pos]] : static_cast<Elem>(digit[pos]);
        break;
      }
      digit[pos] = 0;
      v.entries[pos] = pos < d ? branch_range[0] : kIdentity;
      if (pos == 0) return;
    }
    if (len == 0) return;
  }
}

inline std::vector<HurwitzVector> enumerate_hs_list(const FiniteGroup& g, const ConjugacyClassTable& classes,
                                                    std::size_t genus, std::size_t d,
                                                    const std::optional<NuType>& filter = std::nullopt,
                                                    const EnumerationLimits& limits = {}) {
  std::vector<HurwitzVector> out;
  enumerate_hs(g, classes, genus, d, filter, limits, [&](const HurwitzVector& v) { out.push_back(v); });
  return out;
}

/// h(v) in H2(G'', Z) with G'' = G / <<c_1..c_d>>.
struct ClassicalInvariantValue {
  std::vector<Elem> normal_subgroup;
  AbelianShape h2;
  std::vector<std::int64_t> coords;  // torsion coordinates in H2(G'')
};

class ClassicalInvariant {
 public:
  struct Quotient {
    QuotientGroup quotient;
    std::unique_ptr<RelationClassGroup> homology;
  };

  explicit ClassicalInvariant(const FiniteGroup& g, std::size_t cap = 16) : g_(&g), cap_(cap) {}

  const Quotient& quotient_for(std::span<const Elem> branch) const {
    std::vector<Elem> normal = normal_closure(*g_, branch);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(normal);
    if (it == cache_.end()) {
      auto q = std::make_unique<Quotient>();
      q->quotient = quotient_by_normal(*g_, normal, g_->name() + "''");
      q->homology = std::make_unique<RelationClassGroup>(q->quotient.group, cap_);
      it = cache_.emplace(normal, std::move(q)).first;
    }
    return *it->second;
  }

  ClassicalInvariantValue operator()(const HurwitzVector& v) const {
    const Quotient& q = quotient_for(v.branch());
    const FiniteGroup& gq = q.quotient.group;
    std::vector<Letter> word;
    for (std::size_t j = 0; j < v.genus; ++j)
      for (Letter l : commutator_word(v.a(j), v.b(j))) {
        const Elem x = q.quotient.projection[l.g];
        if (x != kIdentity) word.push_back({x, l.exp});
      }
    const auto rel = relation_vector(gq, word);
    auto coords = q.homology->coordinates(rel);
    const std::size_t t = q.homology->presentation().torsion_rank();
    for (std::size_t k = t; k < coords.size(); ++k)
      if (coords[k] != 0) throw InvariantViolation("classical invariant has a free component");
    coords.resize(t);
    return {normal_closure(*g_, v.branch()), q.homology->h2_shape(), std::move(coords)};
  }

 private:
  const FiniteGroup* g_;
  std::size_t cap_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<Elem>, std::unique_ptr<Quotient>> cache_;
};

}  // namespace hstab
