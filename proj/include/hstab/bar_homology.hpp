#pragma once

// Second homology from the bar resolution. C2 / im D3 models R/[F,R] for the
// free group F on all group elements; its torsion is H2(G, Z). Quotienting
// further by the conjugation relators of a class set gives K_Gamma, and the
// kernel of the induced abelianization map gives H_{2,Gamma}.

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <utility>
#include <vector>

#include "hstab/fold.hpp"
#include "hstab/group.hpp"
#include "hstab/lattice.hpp"

namespace hstab {

/// Bitmask of conjugacy class ids.
using ClassMask = std::uint64_t;

using SparseColumn = std::vector<std::pair<std::size_t, std::int64_t>>;

class BarComplex {
 public:
  explicit BarComplex(const FiniteGroup& g) : g_(&g), n_(g.order()) {}

  const FiniteGroup& group() const { return *g_; }
  std::size_t c1_rank() const { return n_; }
  std::size_t c2_rank() const { return n_ * n_; }
  std::size_t c3_rank() const { return n_ * n_ * n_; }

  /// [g|h] -> [g] + [h] - [gh]
  SparseColumn d2_column(Elem g, Elem h) const { return {{g, 1}, {h, 1}, {g_->mul(g, h), -1}}; }

  /// [g|h|k] -> [h|k] - [gh|k] + [g|hk] - [g|h]
  SparseColumn d3_column(Elem g, Elem h, Elem k) const {
    return {{bar_index(n_, h, k), 1},
            {bar_index(n_, g_->mul(g, h), k), -1},
            {bar_index(n_, g, g_->mul(h, k)), 1},
            {bar_index(n_, g, h), -1}};
  }

  IntMatrix d2_matrix() const {
    IntMatrix m(n_, n_ * n_);
    for (Elem g = 0; g < n_; ++g)
      for (Elem h = 0; h < n_; ++h)
        for (auto [r, c] : d2_column(g, h)) m(r, bar_index(n_, g, h)) += static_cast<long>(c);
    return m;
  }

  IntMatrix d3_matrix() const {
    IntMatrix m(n_ * n_, n_ * n_ * n_);
    for (Elem g = 0; g < n_; ++g)
      for (Elem h = 0; h < n_; ++h)
        for (Elem k = 0; k < n_; ++k)
          for (auto [r, c] : d3_column(g, h, k)) m(r, (bar_index(n_, g, h)) * n_ + k) += static_cast<long>(c);
    return m;
  }

  std::vector<std::int64_t> apply_d2(std::span<const std::int64_t> c2) const {
    std::vector<std::int64_t> out(n_);
    for (Elem g = 0; g < n_; ++g)
      for (Elem h = 0; h < n_; ++h) {
        const std::int64_t x = c2[bar_index(n_, g, h)];
        if (x == 0) continue;
        out[g] += x;
        out[h] += x;
        out[g_->mul(g, h)] -= x;
      }
    return out;
  }

  /// D2 * D3 = 0, checked column by column.
  bool boundary_squared_zero() const {
    std::vector<std::int64_t> c2(n_ * n_);
    for (Elem g = 0; g < n_; ++g)
      for (Elem h = 0; h < n_; ++h)
        for (Elem k = 0; k < n_; ++k) {
          const auto col = d3_column(g, h, k);
          for (auto [i, c] : col) c2[i] += c;
          const auto img = apply_d2(c2);
          for (auto [i, c] : col) c2[i] -= c;
          for (auto x : img)
            if (x != 0) return false;
        }
    return true;
  }

 private:
  const FiniteGroup* g_;
  std::size_t n_;
};

namespace detail {

inline BigVector to_big(std::span<const std::int64_t> v) {
  BigVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<long>(v[i]);
  return out;
}

inline std::vector<std::int64_t> to_small(const BigVector& v) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_int64(v[i]);
  return out;
}

// Integer coordinate table of a presentation for every ambient basis vector.
struct CoordinateTable {
  std::size_t dim = 0;
  std::vector<std::int64_t> moduli;   // 0 for free coordinates
  std::vector<std::int64_t> entries;  // ambient_rank x dim

  explicit CoordinateTable(const QuotientPresentation& p) : dim(p.dimension()) {
    for (std::size_t k = 0; k < dim; ++k) moduli.push_back(to_int64(p.modulus(k)));
    entries.resize(p.ambient_rank() * dim);
    for (std::size_t j = 0; j < p.ambient_rank(); ++j) {
      const BigVector c = p.coordinates_of_basis(j);
      for (std::size_t k = 0; k < dim; ++k) entries[j * dim + k] = to_int64(c[k]);
    }
  }

  const std::int64_t* row(std::size_t j) const { return entries.data() + j * dim; }

  void normalize(std::vector<std::int64_t>& w) const {
    for (std::size_t k = 0; k < dim; ++k)
      if (moduli[k] != 0) {
        w[k] %= moduli[k];
        if (w[k] < 0) w[k] += moduli[k];
      }
  }

  std::vector<std::int64_t> coordinates(std::span<const std::int64_t> raw) const {
    std::vector<std::int64_t> w(dim);
    for (std::size_t j = 0; j < raw.size(); ++j) {
      if (raw[j] == 0) continue;
      const std::int64_t* r = row(j);
      for (std::size_t k = 0; k < dim; ++k) w[k] += raw[j] * r[k];
    }
    normalize(w);
    return w;
  }
};

}  // namespace detail

/// Z^{G x G} / im D3, a model of R/[F,R].
class RelationClassGroup {
 public:
  RelationClassGroup(const FiniteGroup& g, std::size_t cap = 16)
      : g_(&g), complex_(g), presentation_(build(g, cap)), table_(presentation_) {}
  RelationClassGroup(const RelationClassGroup&) = delete;
  RelationClassGroup& operator=(const RelationClassGroup&) = delete;

  const FiniteGroup& group() const { return *g_; }
  const BarComplex& complex() const { return complex_; }
  const QuotientPresentation& presentation() const { return presentation_; }
  const detail::CoordinateTable& table() const { return table_; }

  /// H2(G, Z): the torsion subgroup.
  AbelianShape h2_shape() const {
    AbelianShape s = presentation_.shape();
    s.free_rank = 0;
    return s;
  }

  std::vector<std::int64_t> coordinates(std::span<const std::int64_t> raw) const { return table_.coordinates(raw); }

  /// Raw lifts of the torsion unit coordinates (generators of H2).
  std::vector<BigVector> h2_generators() const {
    std::vector<BigVector> out;
    for (std::size_t k = 0; k < presentation_.torsion_rank(); ++k) {
      BigVector e(presentation_.dimension());
      e[k] = 1;
      out.push_back(presentation_.lift(e));
    }
    return out;
  }

 private:
  static QuotientPresentation build(const FiniteGroup& g, std::size_t cap) {
    const std::size_t n = g.order();
    if (n > cap)
      throw BudgetExceeded("bar complex: group order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
    BarComplex bc(g);
    if (!bc.boundary_squared_zero()) throw InvariantViolation("D2 * D3 != 0");
    LatticeBasis basis(n * n);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c) basis.insert_sparse(bc.d3_column(a, b, c));
    return QuotientPresentation(std::move(basis));
  }

  const FiniteGroup* g_;
  BarComplex complex_;
  QuotientPresentation presentation_;
  detail::CoordinateTable table_;
};

/// K_Gamma = R / R_Gamma, presented on Z^{G x G}.
class KGammaGroup {
 public:
  KGammaGroup(const RelationClassGroup& rel, const ConjugacyClassTable& classes, ClassMask gamma)
      : rel_(&rel), gamma_(gamma), presentation_(build(rel, classes, gamma, relators_)), table_(presentation_) {
    const FiniteGroup& g = rel.group();
    const std::size_t n = g.order();
    // image of each coordinate in Z^G under D2
    for (std::size_t k = 0; k < table_.dim; ++k) {
      BigVector e(table_.dim);
      e[k] = 1;
      const auto raw = detail::to_small(presentation_.lift(e));
      d2_of_coord_.push_back(rel.complex().apply_d2(raw));
    }
    // basis of the abelianization Z^G / L_Gamma: classes inside Gamma, then remaining elements
    ab_index_.assign(n, 0);
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (gamma >> c & 1) {
        for (Elem x : classes.classes[c]) ab_index_[x] = ab_labels_.size();
        ab_labels_.push_back({c, true});
      }
    for (Elem x = 0; x < n; ++x)
      if (!(gamma >> classes.class_of[x] & 1)) {
        ab_index_[x] = ab_labels_.size();
        ab_labels_.push_back({x, false});
      }
    build_h2_gamma(classes);
  }
  KGammaGroup(const KGammaGroup&) = delete;
  KGammaGroup& operator=(const KGammaGroup&) = delete;

  ClassMask gamma() const { return gamma_; }
  const RelationClassGroup& relation_classes() const { return *rel_; }
  const QuotientPresentation& presentation() const { return presentation_; }
  const detail::CoordinateTable& table() const { return table_; }
  std::size_t dimension() const { return table_.dim; }
  const std::vector<std::int64_t>& moduli() const { return table_.moduli; }
  AbelianShape shape() const { return presentation_.shape(); }
  AbelianShape torsion_shape() const {
    AbelianShape s = presentation_.shape();
    s.free_rank = 0;
    return s;
  }
  const std::vector<std::vector<std::int64_t>>& relators() const { return relators_; }

  std::vector<std::int64_t> coordinates(std::span<const std::int64_t> raw) const { return table_.coordinates(raw); }
  std::vector<std::int64_t> coordinates_exact(std::span<const std::int64_t> raw) const {
    return detail::to_small(presentation_.coordinates(detail::to_big(raw)));
  }
  void normalize(std::vector<std::int64_t>& w) const { table_.normalize(w); }
  std::vector<std::int64_t> lift(std::span<const std::int64_t> coords) const {
    return detail::to_small(presentation_.lift(detail::to_big(coords)));
  }

  /// D2 of a lift, in Z^G (well defined modulo L_Gamma).
  std::vector<std::int64_t> d2_image(std::span<const std::int64_t> coords) const {
    std::vector<std::int64_t> out(rel_->group().order());
    for (std::size_t k = 0; k < coords.size(); ++k)
      if (coords[k] != 0)
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += coords[k] * d2_of_coord_[k][x];
    return out;
  }

  /// Image in G_Gamma^ab = Z^G / L_Gamma, in the basis described by abelianization_basis().
  std::vector<std::int64_t> abelianization_image(std::span<const std::int64_t> coords) const {
    const auto img = d2_image(coords);
    std::vector<std::int64_t> out(ab_labels_.size());
    for (std::size_t x = 0; x < img.size(); ++x) out[ab_index_[x]] += img[x];
    return out;
  }

  /// (id, is_class): a class id for classes in Gamma, an element index otherwise.
  const std::vector<std::pair<std::size_t, bool>>& abelianization_basis() const { return ab_labels_; }

  AbelianShape h2_gamma_shape() const { return h2_gamma_shape_; }
  /// Generators of H_{2,Gamma} as K_Gamma coordinates.
  const std::vector<std::vector<std::int64_t>>& h2_gamma_generators() const { return h2_gamma_gens_; }

  /// All elements of the subgroup generated by `gens` (finite), sorted.
  std::vector<std::vector<std::int64_t>> subgroup_elements(const std::vector<std::vector<std::int64_t>>& gens,
                                                           std::size_t limit = 1u << 20) const {
    std::set<std::vector<std::int64_t>> seen;
    std::vector<std::vector<std::int64_t>> queue{std::vector<std::int64_t>(dimension())};
    seen.insert(queue.front());
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (const auto& s : gens) {
        std::vector<std::int64_t> y = queue[head];
        for (std::size_t k = 0; k < y.size(); ++k) y[k] += s[k];
        normalize(y);
        if (seen.insert(y).second) {
          if (seen.size() > limit) throw BudgetExceeded("subgroup enumeration exceeds limit");
          queue.push_back(std::move(y));
        }
      }
    return {seen.begin(), seen.end()};
  }

  std::vector<std::vector<std::int64_t>> h2_gamma_elements() const { return subgroup_elements(h2_gamma_gens_); }

  /// Images of the H2 generators (torsion of C2 / im D3) in K_Gamma.
  std::vector<std::vector<std::int64_t>> h2_image_generators() const {
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& raw : rel_->h2_generators())
      out.push_back(detail::to_small(presentation_.coordinates(raw)));
    return out;
  }

 private:
  static QuotientPresentation build(const RelationClassGroup& rel, const ConjugacyClassTable& classes,
                                    ClassMask gamma, std::vector<std::vector<std::int64_t>>& relators) {
    const FiniteGroup& g = rel.group();
    if (gamma & 1) throw InvalidInput("class set contains the identity class");
    if (classes.size() < 64 && (gamma >> classes.size()) != 0) throw InvalidInput("class set references unknown class");
    LatticeBasis basis = rel.presentation().lattice();
    for (std::size_t c = 1; c < classes.size(); ++c) {
      if (!(gamma >> c & 1)) continue;
      for (Elem a : classes.classes[c])
        for (Elem b = 0; b < g.order(); ++b) {
          const Elem cc = g.mul(g.mul(g.inv(b), a), b);
          const std::vector<Letter> w{{a, 1}, {b, 1}, {cc, -1}, {b, -1}};
          auto r = relation_vector(g, w);
          basis.insert(detail::to_big(r));
          relators.push_back(std::move(r));
        }
    }
    return QuotientPresentation(std::move(basis));
  }

  void build_h2_gamma(const ConjugacyClassTable& classes) {
    const FiniteGroup& g = rel_->group();
    const std::size_t n = g.order();
    const std::size_t k = table_.dim;
    IntMatrix m(n, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t x = 0; x < n; ++x) m(x, j) = static_cast<long>(d2_of_coord_[j][x]);
    std::vector<std::vector<std::int64_t>> lrows;
    for (std::size_t c = 1; c < classes.size(); ++c) {
      if (!(gamma_ >> c & 1)) continue;
      for (Elem a : classes.classes[c])
        for (Elem b = 0; b < n; ++b) {
          const Elem cc = g.mul(g.mul(g.inv(b), a), b);
          if (cc == a) continue;
          std::vector<std::int64_t> r(n);
          r[a] += 1;
          r[cc] -= 1;
          lrows.push_back(std::move(r));
        }
    }
    const LatticeBasis pre = preimage_lattice(m, IntMatrix::from_rows(lrows, n));
    std::vector<BigVector> relations;
    for (std::size_t j = 0; j < k; ++j)
      if (table_.moduli[j] != 0) {
        BigVector e(k);
        e[j] = static_cast<long>(table_.moduli[j]);
        relations.push_back(std::move(e));
      }
    h2_gamma_shape_ = quotient_shape(pre, relations);
    if (h2_gamma_shape_.free_rank != 0) throw InvariantViolation("H_{2,Gamma} is not finite");
    const IntMatrix pm = pre.matrix();
    for (std::size_t i = 0; i < pm.rows(); ++i) {
      auto v = detail::to_small(pm.row(i));
      normalize(v);
      if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) h2_gamma_gens_.push_back(v);
    }
  }

  const RelationClassGroup* rel_;
  ClassMask gamma_;
  std::vector<std::vector<std::int64_t>> relators_;
  QuotientPresentation presentation_;
  detail::CoordinateTable table_;
  std::vector<std::vector<std::int64_t>> d2_of_coord_;
  std::vector<std::size_t> ab_index_;
  std::vector<std::pair<std::size_t, bool>> ab_labels_;
  AbelianShape h2_gamma_shape_;
  std::vector<std::vector<std::int64_t>> h2_gamma_gens_;
};

/// Owns a group together with its class table, relation class group and a
/// thread-safe cache of K_Gamma groups.
class HomologyEngine {
 public:
  explicit HomologyEngine(FiniteGroup g, std::size_t cap = 16)
      : group_(std::move(g)), classes_(conjugacy_classes(group_)), rel_(group_, cap) {
    if (classes_.size() > 64) throw BudgetExceeded("more than 64 conjugacy classes");
  }
  HomologyEngine(const HomologyEngine&) = delete;
  HomologyEngine& operator=(const HomologyEngine&) = delete;

  const FiniteGroup& group() const { return group_; }
  const ConjugacyClassTable& classes() const { return classes_; }
  const RelationClassGroup& relation_classes() const { return rel_; }
  AbelianShape h2_shape() const { return rel_.h2_shape(); }

  const KGammaGroup& k_gamma(ClassMask gamma) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(gamma);
    if (it == cache_.end()) it = cache_.emplace(gamma, std::make_unique<KGammaGroup>(rel_, classes_, gamma)).first;
    return *it->second;
  }

  ClassMask mask_of(std::span<const Elem> elems) const {
    ClassMask m = 0;
    for (Elem x : elems) m |= ClassMask{1} << classes_.class_of[x];
    return m;
  }

  ClassMask mask_of_classes(std::span<const std::size_t> ids) const {
    ClassMask m = 0;
    for (std::size_t c : ids) {
      if (c == 0 || c >= classes_.size()) throw InvalidInput("class id " + std::to_string(c) + " is not a nontrivial class");
      m |= ClassMask{1} << c;
    }
    return m;
  }

  /// Class permutation induced by an automorphism.
  std::vector<std::size_t> class_permutation(const Automorphism& f) const {
    std::vector<std::size_t> p(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) p[c] = classes_.class_of[f(classes_.classes[c].front())];
    return p;
  }

  ClassMask transport_mask(const Automorphism& f, ClassMask gamma) const {
    const auto p = class_permutation(f);
    ClassMask out = 0;
    for (std::size_t c = 0; c < classes_.size(); ++c)
      if (gamma >> c & 1) out |= ClassMask{1} << p[c];
    return out;
  }

  /// f_Gamma : K_Gamma -> K_{f(Gamma)} induced by [g|h] -> [f g | f h], applied to coordinates.
  std::vector<std::int64_t> transport(const Automorphism& f, ClassMask gamma, std::span<const std::int64_t> coords) const {
    const KGammaGroup& src = k_gamma(gamma);
    const KGammaGroup& dst = k_gamma(transport_mask(f, gamma));
    const auto raw = src.lift(coords);
    return dst.coordinates(permute_bar(f, raw));
  }

  std::vector<std::int64_t> permute_bar(const Automorphism& f, std::span<const std::int64_t> raw) const {
    const std::size_t n = group_.order();
    std::vector<std::int64_t> out(raw.size());
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) out[bar_index(n, f(a), f(b))] += raw[bar_index(n, a, b)];
    return out;
  }

 private:
  FiniteGroup group_;
  ConjugacyClassTable classes_;
  RelationClassGroup rel_;
  mutable std::mutex mutex_;
  mutable std::map<ClassMask, std::unique_ptr<KGammaGroup>> cache_;
};

}  // namespace hstab
