#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "hstab/bar_homology.hpp"
#include "hstab/hurwitz.hpp"
#include "hstab/moves.hpp"

namespace hstab {

/// Packs a vector into 64 bits, first entry most significant, so integer
/// order is lexicographic order of entries.
class StatePacking {
 public:
  StatePacking(std::size_t group_order, std::size_t length) : length_(length) {
    while ((std::size_t{1} << bits_) < group_order) ++bits_;
    if (length * bits_ > 64)
      throw BudgetExceeded("state of length " + std::to_string(length) + " needs " + std::to_string(length * bits_) +
                           " bits, more than 64");
  }

  std::size_t length() const { return length_; }
  unsigned bits() const { return bits_; }

  std::uint64_t pack(std::span<const Elem> e) const {
    std::uint64_t s = 0;
    for (Elem x : e) s = (s << bits_) | x;
    return s;
  }

  void unpack(std::uint64_t s, std::span<Elem> out) const {
    const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
    for (std::size_t i = length_; i > 0; --i) {
      out[i - 1] = static_cast<Elem>(s & mask);
      s >>= bits_;
    }
  }

 private:
  std::size_t length_;
  unsigned bits_ = 1;
};

/// Lexicographic minimum over all automorphisms applied entrywise.
class Canonicalizer {
 public:
  Canonicalizer(const std::vector<Automorphism>& auts, StatePacking packing) : auts_(&auts), packing_(packing) {}

  const StatePacking& packing() const { return packing_; }

  std::uint64_t canonical(std::span<const Elem> e) const {
    std::uint64_t best = packing_.pack(e);
    const unsigned bits = packing_.bits();
    for (const Automorphism& f : *auts_) {
      std::uint64_t s = 0;
      for (Elem x : e) s = (s << bits) | f(x);
      best = std::min(best, s);
    }
    return best;
  }

 private:
  const std::vector<Automorphism>* auts_;
  StatePacking packing_;
};

inline HurwitzVector canonical_form_state(const std::vector<Automorphism>& auts, std::size_t group_order,
                                          const HurwitzVector& v) {
  Canonicalizer canon(auts, StatePacking(group_order, v.size()));
  HurwitzVector w = v;
  canon.packing().unpack(canon.canonical(v.entries), w.entries);
  return w;
}

struct OrbitOptions {
  MoveSet moves = move_family::all;
  std::size_t threads = 1;
  EnumerationLimits limits;
  bool check_invariants = true;
};

/// Move-closure orbits on Aut-canonical states. Orbit ids are ordered by their
/// minimal state, which is also the representative.
struct OrbitPartition {
  std::size_t d = 0;
  std::size_t genus = 0;
  StatePacking packing{1, 0};
  std::vector<std::uint64_t> states;
  std::vector<std::uint32_t> orbit_of;
  std::vector<std::uint64_t> representatives;
  std::vector<std::uint64_t> orbit_sizes;

  std::size_t orbit_count() const { return representatives.size(); }

  HurwitzVector unpack(std::uint64_t s) const {
    HurwitzVector v(d, genus, std::vector<Elem>(d + 2 * genus));
    packing.unpack(s, v.entries);
    return v;
  }

  std::optional<std::size_t> index_of(std::uint64_t s) const {
    auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
  }

  std::optional<std::uint32_t> orbit_of_state(std::uint64_t s) const {
    auto i = index_of(s);
    if (!i) return std::nullopt;
    return orbit_of[*i];
  }
};

namespace detail {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      parent[b] = a;
    else
      parent[a] = b;
  }
};

inline void check_deadline(const std::chrono::steady_clock::time_point& start, double max_seconds) {
  if (max_seconds <= 0) return;
  if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > max_seconds)
    throw BudgetExceeded("time budget of " + std::to_string(max_seconds) + " s exceeded");
}

template <typename F>
void parallel_for(std::size_t lo, std::size_t hi, std::size_t threads, F&& f) {
  if (threads <= 1 || hi - lo < 2) {
    f(std::size_t{0}, lo, hi);
    return;
  }
  threads = std::min(threads, hi - lo);
  std::vector<std::thread> pool;
  const std::size_t chunk = (hi - lo + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t a = lo + t * chunk, b = std::min(hi, a + chunk);
    if (a >= b) break;
    pool.emplace_back([&f, t, a, b] { f(t, a, b); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline OrbitPartition orbit_decompose(const HomologyEngine& engine, const std::vector<Automorphism>& auts,
                                      std::size_t genus, std::size_t d, const OrbitOptions& opt,
                                      const std::optional<NuType>& filter = std::nullopt) {
  const auto start = std::chrono::steady_clock::now();
  const FiniteGroup& g = engine.group();
  OrbitPartition part;
  part.d = d;
  part.genus = genus;
  part.packing = StatePacking(g.order(), d + 2 * genus);
  const Canonicalizer canon(auts, part.packing);

  enumerate_hs(g, engine.classes(), genus, d, filter, opt.limits, [&](const HurwitzVector& v) {
    const std::uint64_t s = part.packing.pack(v.entries);
    if (canon.canonical(v.entries) == s) part.states.push_back(s);
  });
  if (!std::is_sorted(part.states.begin(), part.states.end()))
    throw InvariantViolation("enumeration order is not lexicographic");
  if (part.states.size() >= std::numeric_limits<std::uint32_t>::max())
    throw BudgetExceeded("too many canonical states");

  const std::vector<Move> moves = candidate_moves(g, d, genus, opt.moves);
  detail::UnionFind uf(part.states.size());
  const std::size_t threads = std::max<std::size_t>(1, opt.threads);
  constexpr std::size_t block = 1 << 14;

  struct Violation {
    std::size_t state = std::numeric_limits<std::size_t>::max();
    std::string message;
  };

  for (std::size_t lo = 0; lo < part.states.size(); lo += block) {
    detail::check_deadline(start, opt.limits.max_seconds);
    const std::size_t hi = std::min(part.states.size(), lo + block);
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges(threads);
    std::vector<Violation> violations(threads);
    detail::parallel_for(lo, hi, threads, [&](std::size_t t, std::size_t a, std::size_t b) {
      auto& out = edges[t];
      HurwitzVector v(d, genus, std::vector<Elem>(d + 2 * genus));
      for (std::size_t i = a; i < b; ++i) {
        part.packing.unpack(part.states[i], v.entries);
        NuType nu;
        std::vector<std::int64_t> eps;
        const KGammaGroup* k = nullptr;
        if (opt.check_invariants) {
          nu = nu_type(engine.classes(), v);
          k = &engine.k_gamma(engine.mask_of(v.branch()));
          eps = epsilon_coordinates(*k, g, v);
        }
        for (const Move& m : moves) {
          if (!move_applicable(g, v, m)) continue;
          const HurwitzVector w = apply_move(g, v, m);
          if (opt.check_invariants) {
            std::string err;
            if (!is_hurwitz_generating_system(g, w))
              err = "leaves HS";
            else if (nu_type(engine.classes(), w) != nu)
              err = "changes nu";
            else if (epsilon_coordinates(*k, g, w) != eps)
              err = "changes epsilon";
            if (!err.empty()) {
              if (i < violations[t].state) violations[t] = {i, "move " + m.tag() + " " + err};
              break;
            }
          }
          const auto j = part.index_of(canon.canonical(w.entries));
          if (!j) {
            if (i < violations[t].state) violations[t] = {i, "move " + m.tag() + " leads outside the state set"};
            break;
          }
          out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(*j));
        }
      }
    });
    const Violation* worst = nullptr;
    for (const auto& vi : violations)
      if (!vi.message.empty() && (!worst || vi.state < worst->state)) worst = &vi;
    if (worst) {
      const HurwitzVector v = part.unpack(part.states[worst->state]);
      std::string entries;
      for (Elem x : v.entries) entries += (entries.empty() ? "" : ",") + std::to_string(x);
      throw InvariantViolation(worst->message + " at state (" + entries + ")");
    }
    for (const auto& es : edges)
      for (auto [a, b] : es) uf.unite(a, b);
  }

  part.orbit_of.assign(part.states.size(), 0);
  std::vector<std::uint32_t> id_of_root(part.states.size(), 0);
  for (std::size_t i = 0; i < part.states.size(); ++i) {
    const std::uint32_t r = uf.find(static_cast<std::uint32_t>(i));
    if (r == i) {
      id_of_root[i] = static_cast<std::uint32_t>(part.representatives.size());
      part.representatives.push_back(part.states[i]);
      part.orbit_sizes.push_back(0);
    }
    part.orbit_of[i] = id_of_root[r];
    ++part.orbit_sizes[part.orbit_of[i]];
  }
  return part;
}

/// Lexicographically least image of nu under the class permutations of Aut(G).
inline NuType canonical_nu(const HomologyEngine& engine, const std::vector<Automorphism>& auts, const NuType& nu) {
  NuType best = nu;
  for (const Automorphism& f : auts) {
    const auto p = engine.class_permutation(f);
    NuType img(nu.size());
    for (std::size_t c = 0; c < nu.size(); ++c) img[p[c]] += nu[c];
    best = std::min(best, img);
  }
  return best;
}

inline std::string nu_label(const NuType& nu) {
  std::string s;
  for (std::size_t c = 1; c < nu.size(); ++c)
    if (nu[c] != 0) s += (s.empty() ? "" : ",") + ("C" + std::to_string(c) + ":" + std::to_string(nu[c]));
  return s.empty() ? "-" : s;
}

inline std::string epsilon_label(const EpsilonClass& e) {
  std::string s = "{";
  bool first = true;
  for (std::size_t c = 0; c < 64; ++c)
    if (e.gamma >> c & 1) {
      s += (first ? "C" : ",C") + std::to_string(c);
      first = false;
    }
  s += "}[";
  for (std::size_t k = 0; k < e.coords.size(); ++k) s += (k ? "," : "") + std::to_string(e.coords[k]);
  return s + "]";
}

/// Least (f(Gamma), f_Gamma(e)) over Aut(G), computed by transport.
inline EpsilonClass canonical_epsilon(const HomologyEngine& engine, const std::vector<Automorphism>& auts,
                                      const EpsilonClass& e) {
  EpsilonClass best = e;
  for (const Automorphism& f : auts) {
    EpsilonClass img{engine.transport_mask(f, e.gamma), engine.transport(f, e.gamma, e.coords)};
    best = std::min(best, img);
  }
  return best;
}

/// Least epsilon of f(v) over Aut(G), computed by folding.
inline EpsilonClass canonical_epsilon_of(const HomologyEngine& engine, const std::vector<Automorphism>& auts,
                                         const HurwitzVector& v) {
  EpsilonClass best = epsilon(engine, v);
  for (const Automorphism& f : auts) best = std::min(best, epsilon(engine, apply_automorphism(f, v)));
  return best;
}

/// A Hurwitz vector (not necessarily generating) with the given admissible
/// nu-type and trivial evaluation: branch entries are class minima, handles
/// are commutators cancelling their product.
inline HurwitzVector base_vector(const HomologyEngine& engine, const NuType& nu) {
  const FiniteGroup& g = engine.group();
  const auto& classes = engine.classes();
  std::vector<Elem> branch;
  for (std::size_t c = 1; c < nu.size(); ++c)
    for (std::int64_t k = 0; k < nu[c]; ++k) branch.push_back(classes.classes[c].front());
  Elem p = kIdentity;
  for (Elem x : branch) p = g.mul(p, x);
  const Elem target = g.inv(p);
  // shortest product of commutators reaching target
  const std::size_t n = g.order();
  std::vector<std::pair<Elem, Elem>> comm_pair(n, {kIdentity, kIdentity});
  std::vector<char> is_comm(n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      const Elem c = g.commutator(a, b);
      if (!is_comm[c]) {
        is_comm[c] = 1;
        comm_pair[c] = {a, b};
      }
    }
  constexpr Elem unset = static_cast<Elem>(-1);
  std::vector<Elem> parent(n, unset), via(n, unset);
  parent[kIdentity] = kIdentity;
  std::vector<Elem> queue{kIdentity};
  for (std::size_t head = 0; head < queue.size() && parent[target] == unset; ++head)
    for (Elem c = 0; c < n; ++c) {
      if (!is_comm[c]) continue;
      const Elem y = g.mul(queue[head], c);
      if (parent[y] == unset) {
        parent[y] = queue[head];
        via[y] = c;
        queue.push_back(y);
      }
    }
  if (parent[target] == unset) throw PreconditionError("nu-type is not admissible");
  std::vector<Elem> comms;
  for (Elem x = target; x != kIdentity; x = parent[x]) comms.push_back(via[x]);
  std::reverse(comms.begin(), comms.end());
  std::vector<Elem> entries = branch;
  for (Elem c : comms) {
    entries.push_back(comm_pair[c].first);
    entries.push_back(comm_pair[c].second);
  }
  return HurwitzVector(branch.size(), comms.size(), std::move(entries));
}

/// Canonical epsilon classes over an admissible nu: the Aut-classes of the
/// coset epsilon(v0) + H_{2,Gamma} in K_Gamma.
inline std::set<EpsilonClass> expected_epsilon_classes(const HomologyEngine& engine,
                                                       const std::vector<Automorphism>& auts, const NuType& nu) {
  const ClassMask gamma = nu_support(nu);
  const KGammaGroup& k = engine.k_gamma(gamma);
  const HurwitzVector v0 = base_vector(engine, nu);
  const auto x0 = epsilon_coordinates(k, engine.group(), v0);
  std::set<EpsilonClass> out;
  for (const auto& h : k.h2_gamma_elements()) {
    std::vector<std::int64_t> x = x0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h[i];
    k.normalize(x);
    out.insert(canonical_epsilon(engine, auts, EpsilonClass{gamma, std::move(x)}));
  }
  return out;
}

/// Nonzero nu-types of total d on nontrivial classes, canonical under Aut, sorted.
inline std::vector<NuType> canonical_nu_types(const HomologyEngine& engine, const std::vector<Automorphism>& auts,
                                              std::size_t d) {
  const std::size_t k = engine.classes().size();
  std::set<NuType> out;
  NuType cur(k);
  auto rec = [&](auto&& self, std::size_t c, std::int64_t left) -> void {
    if (c == k) {
      if (left == 0) out.insert(canonical_nu(engine, auts, cur));
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      cur[c] = x;
      self(self, c + 1, left - x);
    }
    cur[c] = 0;
  };
  if (k == 1) {
    if (d == 0) out.insert(cur);
  } else {
    rec(rec, 1, static_cast<std::int64_t>(d));
  }
  return {out.begin(), out.end()};
}

struct NuSummary {
  NuType nu;  // canonical representative
  bool admissible = false;
  std::size_t orbits = 0;
  std::size_t epsilon_classes = 0;  // distinct canonical epsilon among the orbits
  std::size_t expected = 0;         // admissible epsilon classes over nu (0 if not admissible)
  bool matches_expected = false;    // observed epsilon set equals expected set
};

struct StabilizationCheck {
  std::size_t from_genus = 0;
  bool surjective = false;
  bool well_defined = false;
  std::size_t orbits_hit = 0;
};

struct GenusRow {
  std::size_t genus = 0;
  std::size_t states = 0;
  std::size_t orbits = 0;
  std::vector<NuSummary> nus;
  std::map<std::string, std::size_t> per_epsilon;
  std::size_t admissible = 0;
  bool injective = false;
  bool bijection = false;
  std::optional<StabilizationCheck> stabilization;
};

struct ClassificationReport {
  std::string group;
  std::size_t d = 0;
  std::vector<std::string> moves;
  std::optional<NuType> nu_filter;
  std::vector<GenusRow> rows;
  std::optional<std::size_t> stable_from;
  std::vector<std::string> diagnosis;
};

namespace detail {

inline StabilizationCheck stabilization_check(const OrbitPartition& low, const OrbitPartition& high) {
  StabilizationCheck s;
  s.from_genus = low.genus;
  s.well_defined = true;
  const unsigned shift = static_cast<unsigned>(2 * high.packing.bits());
  std::vector<char> hit(high.orbit_count());
  std::vector<std::int64_t> image_of_orbit(low.orbit_count(), -1);
  for (std::size_t i = 0; i < low.states.size(); ++i) {
    const auto o = high.orbit_of_state(low.states[i] << shift);
    if (!o) throw InvariantViolation("stabilized state is not a canonical generating system");
    hit[*o] = 1;
    auto& img = image_of_orbit[low.orbit_of[i]];
    if (img < 0)
      img = *o;
    else if (img != static_cast<std::int64_t>(*o))
      s.well_defined = false;
  }
  s.orbits_hit = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  s.surjective = s.orbits_hit == high.orbit_count();
  return s;
}

}  // namespace detail

/// Statistics of one partition against the expected admissible classes.
inline GenusRow summarize_partition(const HomologyEngine& engine, const std::vector<Automorphism>& auts,
                                    const OrbitPartition& part, const std::vector<NuType>& nu_types,
                                    const std::map<NuType, std::set<EpsilonClass>>& expected) {
  const Abelianization ab = abelianization(engine.group());
  GenusRow row;
  row.genus = part.genus;
  row.states = part.states.size();
  row.orbits = part.orbit_count();
  std::map<NuType, std::vector<EpsilonClass>> observed;
  for (std::uint64_t rep : part.representatives) {
    const HurwitzVector v = part.unpack(rep);
    const NuType nu = canonical_nu(engine, auts, nu_type(engine.classes(), v));
    const EpsilonClass e = canonical_epsilon_of(engine, auts, v);
    observed[nu].push_back(e);
    ++row.per_epsilon[nu_label(nu) + "|" + epsilon_label(e)];
  }
  std::set<NuType> all(nu_types.begin(), nu_types.end());
  for (const auto& [nu, _] : observed) all.insert(nu);
  row.injective = true;
  row.bijection = true;
  for (const NuType& nu : all) {
    NuSummary s;
    s.nu = nu;
    s.admissible = is_admissible(nu, engine.classes(), ab);
    const auto it = observed.find(nu);
    std::set<EpsilonClass> seen;
    if (it != observed.end()) {
      s.orbits = it->second.size();
      seen.insert(it->second.begin(), it->second.end());
    }
    s.epsilon_classes = seen.size();
    if (s.epsilon_classes != s.orbits) row.injective = false;
    const auto ex = expected.find(nu);
    if (s.admissible && ex != expected.end()) {
      s.expected = ex->second.size();
      s.matches_expected = seen == ex->second;
      row.admissible += s.expected;
    }
    const bool ok = s.admissible ? (s.matches_expected && s.orbits == s.expected) : s.orbits == 0;
    if (!ok) row.bijection = false;
    row.nus.push_back(std::move(s));
  }
  return row;
}

/// Orbit partitions and statistics for genus_lo..genus_hi.
inline ClassificationReport classification_report(const HomologyEngine& engine, const std::vector<Automorphism>& auts,
                                                  std::size_t d, std::size_t genus_lo, std::size_t genus_hi,
                                                  const OrbitOptions& opt,
                                                  const std::optional<NuType>& filter = std::nullopt) {
  if (genus_lo > genus_hi) throw InvalidInput("empty genus range");
  ClassificationReport rep;
  rep.group = engine.group().name();
  rep.d = d;
  rep.moves = move_set_tags(opt.moves);
  rep.nu_filter = filter;

  const Abelianization ab = abelianization(engine.group());
  std::vector<NuType> nu_types;
  if (filter)
    nu_types.push_back(canonical_nu(engine, auts, *filter));
  else
    nu_types = canonical_nu_types(engine, auts, d);
  std::map<NuType, std::set<EpsilonClass>> expected;
  for (const NuType& nu : nu_types)
    if (is_admissible(nu, engine.classes(), ab)) expected[nu] = expected_epsilon_classes(engine, auts, nu);

  std::optional<OrbitPartition> prev;
  for (std::size_t gen = genus_lo; gen <= genus_hi; ++gen) {
    OrbitPartition part = orbit_decompose(engine, auts, gen, d, opt, filter);
    GenusRow row = summarize_partition(engine, auts, part, nu_types, expected);
    if (prev) row.stabilization = detail::stabilization_check(*prev, part);
    rep.rows.push_back(std::move(row));
    prev = std::move(part);
  }

  // smallest genus from which the bijection holds with constant per-nu counts
  for (std::size_t i = rep.rows.size(); i > 0; --i) {
    const GenusRow& r = rep.rows[i - 1];
    if (!r.bijection) break;
    if (i < rep.rows.size()) {
      const GenusRow& next = rep.rows[i];
      bool same = r.nus.size() == next.nus.size();
      for (std::size_t k = 0; same && k < r.nus.size(); ++k)
        same = r.nus[k].nu == next.nus[k].nu && r.nus[k].orbits == next.nus[k].orbits;
      if (!same) break;
    }
    rep.stable_from = r.genus;
  }
  const GenusRow& top = rep.rows.back();
  if (!top.bijection) {
    rep.diagnosis.push_back("hypothesis: genus " + std::to_string(top.genus) + " is not yet in the stable range");
    rep.diagnosis.push_back("hypothesis: the move set does not generate the full mapping class group action");
    for (const NuSummary& s : top.nus) {
      if (!s.admissible && s.orbits == 0) continue;
      if (s.admissible && s.matches_expected && s.orbits == s.expected) continue;
      rep.diagnosis.push_back("gap at nu " + nu_label(s.nu) + ": orbits " + std::to_string(s.orbits) +
                              ", distinct epsilon " + std::to_string(s.epsilon_classes) + ", expected " +
                              std::to_string(s.expected));
    }
  }
  return rep;
}

struct StabilizationVerdict {
  ClassificationReport report;
  std::optional<bool> surjectivity;  // over consecutive genera g -> g+1 with g >= |G|; empty if none in range
  bool well_defined = true;
  bool injective = false;
  bool bijection = false;

  bool passed() const { return surjectivity.value_or(true) && well_defined && injective && bijection; }
};

inline StabilizationVerdict verify_genus_stabilization(const HomologyEngine& engine,
                                                       const std::vector<Automorphism>& auts, std::size_t d,
                                                       std::size_t max_genus, const OrbitOptions& opt,
                                                       std::size_t genus_lo = 0) {
  StabilizationVerdict v;
  v.report = classification_report(engine, auts, d, genus_lo, max_genus, opt);
  const std::size_t n = engine.group().order();
  for (const GenusRow& r : v.report.rows) {
    if (!r.stabilization) continue;
    v.well_defined = v.well_defined && r.stabilization->well_defined;
    if (r.stabilization->from_genus >= n) v.surjectivity = v.surjectivity.value_or(true) && r.stabilization->surjective;
  }
  const GenusRow& top = v.report.rows.back();
  v.injective = top.injective;
  v.bijection = top.bijection;
  return v;
}

}  // namespace hstab
