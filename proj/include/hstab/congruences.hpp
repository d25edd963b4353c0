#pragma once

// Fold identities modulo [F,R]: basic soundness of the fold and the four
// congruences between conjugation relators used to rewrite products of them.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hstab/bar_homology.hpp"
#include "hstab/fold.hpp"

namespace hstab {

struct IdentityTally {
  IdentityTally(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0; }
  void record(bool ok, const std::string& where) {
    ++checked;
    if (!ok && failures++ == 0) first_failure = where;
  }
};

inline std::vector<std::int64_t> relation_class(const RelationClassGroup& rel, std::span<const Letter> word) {
  return rel.coordinates(relation_vector(rel.group(), word));
}

namespace detail {

inline Letter hat(Elem g) { return {g, 1}; }
inline Letter hat_inv(Elem g) { return {g, -1}; }

inline std::string triple(Elem x, Elem y, Elem y1) {
  return "x=" + std::to_string(x) + " y=" + std::to_string(y) + " y1=" + std::to_string(y1);
}

}  // namespace detail

/// Empty word, g^ g^-1 and g^ h^ (gh)^-1 against the bar symbol [g|h].
inline std::vector<IdentityTally> check_fold_basics(const RelationClassGroup& rel) {
  using detail::hat;
  using detail::hat_inv;
  const FiniteGroup& g = rel.group();
  const std::size_t n = g.order();
  IdentityTally empty{"empty_word"}, cancel{"cancellation"}, product{"product_relator"};
  const std::vector<std::int64_t> zero(rel.table().dim, 0);
  empty.record(relation_class(rel, {}) == zero, "empty");
  for (Elem a = 0; a < n; ++a) {
    const Letter w[] = {hat(a), hat_inv(a)};
    cancel.record(relation_class(rel, w) == zero, "g=" + std::to_string(a));
    for (Elem b = 0; b < n; ++b) {
      const Letter r[] = {hat(a), hat(b), hat_inv(g.mul(a, b))};
      std::vector<std::int64_t> sym(n * n);
      sym[bar_index(n, a, b)] = 1;
      product.record(relation_class(rel, r) == rel.coordinates(sym), "g=" + std::to_string(a) + " h=" + std::to_string(b));
    }
  }
  return {empty, cancel, product};
}

class CongruenceChecker {
 public:
  explicit CongruenceChecker(const RelationClassGroup& rel)
      : rel_(&rel), tallies_{{"i"}, {"ii"}, {"iii"}, {"iv"}, {"conjugation"}} {}

  const std::vector<IdentityTally>& tallies() const { return tallies_; }
  bool passed() const {
    for (const auto& t : tallies_)
      if (!t.passed()) return false;
    return true;
  }

  /// All identities for one choice of (x, y, y1); z and z1 are forced by the relations.
  void check(Elem x, Elem y, Elem y1, Elem u) {
    using detail::hat;
    using detail::hat_inv;
    const FiniteGroup& g = rel_->group();
    const Elem z = g.conj(g.inv(y), x);
    const Elem z1 = g.conj(g.inv(y1), z);
    const std::string where = detail::triple(x, y, y1);

    const Letter r[] = {hat(x), hat(y), hat_inv(z), hat_inv(y)};
    const auto cr = cls(r);

    const Letter r_i[] = {hat_inv(y), hat(x), hat(y), hat_inv(z)};
    tallies_[0].record(cls(r_i) == cr, where);

    const Letter inv_a[] = {hat(y), hat(z), hat_inv(y), hat_inv(x)};
    const Letter inv_b[] = {hat(z), hat_inv(y), hat_inv(x), hat(y)};
    const auto ca = cls(inv_a);
    tallies_[1].record(ca == cls(inv_b) && ca == negated(cr), where);

    const Elem yy1 = g.mul(y, y1);
    const Letter lhs[] = {hat(x), hat(y), hat_inv(z), hat_inv(y), hat(z), hat(y1), hat_inv(z1), hat_inv(y1)};
    const Letter rhs[] = {hat(x), hat(yy1), hat_inv(z1), hat_inv(yy1)};
    tallies_[2].record(cls(lhs) == cls(rhs), where);

    // sigma = -1; the sigma = +1 case is literally the same word.
    const Elem yi = g.inv(y);
    const Elem zs = g.conj(y, x);
    const Letter s_word[] = {hat(x), hat_inv(y), hat_inv(zs), hat(y)};
    const Letter s_hat[] = {hat(x), hat(yi), hat_inv(zs), hat_inv(yi)};
    tallies_[3].record(cls(s_word) == cls(s_hat), where);

    const Letter conj[] = {hat(u), hat(x), hat(y), hat_inv(z), hat_inv(y), hat_inv(u)};
    tallies_[4].record(cls(conj) == cr, where + " u=" + std::to_string(u));
  }

  void check_exhaustive() {
    const std::size_t n = rel_->group().order();
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        for (Elem y1 = 0; y1 < n; ++y1) check(x, y, y1, static_cast<Elem>((x + y + y1) % n));
  }

  void check_sampled(std::uint64_t count, std::mt19937_64& rng) {
    std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(rel_->group().order() - 1));
    for (std::uint64_t i = 0; i < count; ++i) {
      const Elem x = pick(rng), y = pick(rng), y1 = pick(rng), u = pick(rng);
      check(x, y, y1, u);
    }
  }

 private:
  std::vector<std::int64_t> cls(std::span<const Letter> w) const { return relation_class(*rel_, w); }
  std::vector<std::int64_t> negated(std::vector<std::int64_t> v) const {
    for (auto& x : v) x = -x;
    rel_->table().normalize(v);
    return v;
  }

  const RelationClassGroup* rel_;
  std::vector<IdentityTally> tallies_;
};

}  // namespace hstab
