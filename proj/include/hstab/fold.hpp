#pragma once

// Words in the free group on symbols g^ (one per group element) are folded
// into a pair (kappa, p): kappa is an integer combination of bar symbols
// [g|h], p is the image of the word in G. A word representing a relation
// (p = 1) has relation class kappa + [1|1].

#include <cstdint>
#include <span>
#include <vector>

#include "hstab/group.hpp"

namespace hstab {

struct Letter {
  Elem g = kIdentity;
  int exp = 1;  // +1 or -1
};

inline std::size_t bar_index(std::size_t n, Elem g, Elem h) { return static_cast<std::size_t>(g) * n + h; }

/// Adds the fold contributions of `word` to `sink`, starting from element p.
/// Sink needs add(std::size_t bar_index, std::int64_t coeff). Returns the final p.
template <typename Sink>
Elem fold_letters(const FiniteGroup& g, std::span<const Letter> word, Elem p, Sink& sink) {
  const std::size_t n = g.order();
  for (const Letter& l : word) {
    if (l.exp > 0) {
      sink.add(bar_index(n, p, l.g), 1);
      p = g.mul(p, l.g);
    } else {
      const Elem gi = g.inv(l.g);
      sink.add(bar_index(n, p, gi), 1);
      sink.add(bar_index(n, l.g, gi), -1);
      sink.add(0, -1);
      p = g.mul(p, gi);
    }
  }
  return p;
}

struct DenseSink {
  std::vector<std::int64_t> v;
  void add(std::size_t i, std::int64_t c) { v[i] += c; }
};

struct FoldState {
  std::vector<std::int64_t> kappa;  // raw vector in Z^{G x G}
  Elem p = kIdentity;
};

inline FoldState fold_word(const FiniteGroup& g, std::span<const Letter> word) {
  const std::size_t n = g.order();
  DenseSink sink{std::vector<std::int64_t>(n * n)};
  sink.v[0] = -1;
  const Elem p = fold_letters(g, word, kIdentity, sink);
  return FoldState{std::move(sink.v), p};
}

/// kappa + [1|1] for a word that evaluates to the identity.
inline std::vector<std::int64_t> relation_vector(const FiniteGroup& g, std::span<const Letter> word) {
  FoldState s = fold_word(g, word);
  if (s.p != kIdentity) throw PreconditionError("word does not evaluate to the identity");
  s.kappa[0] += 1;
  return std::move(s.kappa);
}

inline std::vector<Letter> commutator_word(Elem a, Elem b) { return {{a, 1}, {b, 1}, {a, -1}, {b, -1}}; }

}  // namespace hstab
