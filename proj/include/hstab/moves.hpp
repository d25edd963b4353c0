#pragma once

#include <string>
#include <vector>

#include "hstab/group.hpp"
#include "hstab/hurwitz.hpp"

namespace hstab {

enum class MoveKind {
  BraidTwist,
  BraidTwistInv,
  HandleT1,
  HandleT1Inv,
  HandleT2,
  HandleT2Inv,
  HandleSwap,
  HandleSwapInv,
  HandleMix,
  HandleMixInv,
  MixedCLP,
  MixedCLPInv,
  TrivialHandleSet,
  TrivialHandleUnset,
  GlobalConj,
};

/// Indices are 0-based: braid twists act on (c_i, c_{i+1}), handle moves on
/// handle j (and j+1 for swaps). elem is the element of TrivialHandleSet and GlobalConj.
struct Move {
  MoveKind kind = MoveKind::BraidTwist;
  std::size_t index = 0;
  Elem elem = kIdentity;

  std::string tag() const {
    const std::string i = std::to_string(index);
    const std::string e = std::to_string(elem);
    switch (kind) {
      case MoveKind::BraidTwist: return "braid(" + i + ")";
      case MoveKind::BraidTwistInv: return "braid_inv(" + i + ")";
      case MoveKind::HandleT1: return "t1(" + i + ")";
      case MoveKind::HandleT1Inv: return "t1_inv(" + i + ")";
      case MoveKind::HandleT2: return "t2(" + i + ")";
      case MoveKind::HandleT2Inv: return "t2_inv(" + i + ")";
      case MoveKind::HandleSwap: return "swap(" + i + ")";
      case MoveKind::HandleSwapInv: return "swap_inv(" + i + ")";
      case MoveKind::HandleMix: return "mix(" + i + ")";
      case MoveKind::HandleMixInv: return "mix_inv(" + i + ")";
      case MoveKind::MixedCLP: return "clp";
      case MoveKind::MixedCLPInv: return "clp_inv";
      case MoveKind::TrivialHandleSet: return "trivial_set(" + e + ")";
      case MoveKind::TrivialHandleUnset: return "trivial_unset";
      case MoveKind::GlobalConj: return "conj(" + e + ")";
    }
    return "?";
  }

  friend bool operator==(const Move&, const Move&) = default;
};

/// Bitmask of move families selectable with --moves.
using MoveSet = unsigned;
namespace move_family {
inline constexpr MoveSet braid = 1;
inline constexpr MoveSet handle = 2;
inline constexpr MoveSet swap = 4;
inline constexpr MoveSet clp = 8;
inline constexpr MoveSet trivial = 16;
inline constexpr MoveSet conj = 32;
inline constexpr MoveSet mix = 64;
inline constexpr MoveSet all = 127;
}  // namespace move_family

inline const std::vector<std::pair<std::string, MoveSet>>& move_family_tags() {
  static const std::vector<std::pair<std::string, MoveSet>> tags{
      {"braid", move_family::braid}, {"handle", move_family::handle}, {"swap", move_family::swap},
      {"clp", move_family::clp},     {"trivial", move_family::trivial}, {"conj", move_family::conj},
      {"mix", move_family::mix}};
  return tags;
}

inline MoveSet parse_move_set(const std::string& list) {
  MoveSet set = 0;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    const std::string tag = list.substr(pos, comma - pos);
    pos = comma + 1;
    if (tag.empty()) continue;
    if (tag == "all") {
      set |= move_family::all;
      continue;
    }
    bool found = false;
    for (const auto& [name, bit] : move_family_tags())
      if (name == tag) {
        set |= bit;
        found = true;
      }
    if (!found) throw InvalidInput("unknown move family '" + tag + "'");
  }
  if (set == 0) throw InvalidInput("empty move set");
  return set;
}

inline std::vector<std::string> move_set_tags(MoveSet set) {
  std::vector<std::string> out;
  for (const auto& [name, bit] : move_family_tags())
    if (set & bit) out.push_back(name);
  return out;
}

inline bool move_applicable(const FiniteGroup& g, const HurwitzVector& v, const Move& m) {
  switch (m.kind) {
    case MoveKind::BraidTwist:
    case MoveKind::BraidTwistInv: return v.d >= 2 && m.index + 1 < v.d;
    case MoveKind::HandleT1:
    case MoveKind::HandleT1Inv:
    case MoveKind::HandleT2:
    case MoveKind::HandleT2Inv: return m.index < v.genus;
    case MoveKind::HandleSwap:
    case MoveKind::HandleSwapInv:
    case MoveKind::HandleMix:
    case MoveKind::HandleMixInv: return m.index + 1 < v.genus;
    case MoveKind::MixedCLP:
    case MoveKind::MixedCLPInv: return v.d >= 1 && v.genus >= 1;
    case MoveKind::TrivialHandleSet:
      return v.genus >= 1 && m.elem < g.order() && v.a(0) == kIdentity && v.b(0) == kIdentity;
    case MoveKind::TrivialHandleUnset: {
      if (v.genus == 0 || v.b(0) != kIdentity || v.a(0) == kIdentity) return false;
      HurwitzVector w = v;
      w.entries[v.d] = kIdentity;
      return generates(g, w.entries);
    }
    case MoveKind::GlobalConj: return m.elem < g.order();
  }
  return false;
}

inline HurwitzVector apply_move(const FiniteGroup& g, const HurwitzVector& v, const Move& m) {
  if (!move_applicable(g, v, m)) throw PreconditionError("move " + m.tag() + " not applicable");
  HurwitzVector w = v;
  auto& e = w.entries;
  const std::size_t d = v.d;
  switch (m.kind) {
    case MoveKind::BraidTwist: {
      const Elem x = e[m.index], y = e[m.index + 1];
      e[m.index] = y;
      e[m.index + 1] = g.mul(g.mul(g.inv(y), x), y);
      break;
    }
    case MoveKind::BraidTwistInv: {
      const Elem x = e[m.index], y = e[m.index + 1];
      e[m.index] = g.conj(x, y);
      e[m.index + 1] = x;
      break;
    }
    case MoveKind::HandleT1: {
      const std::size_t p = d + 2 * m.index;
      e[p] = g.mul(e[p], e[p + 1]);
      break;
    }
    case MoveKind::HandleT1Inv: {
      const std::size_t p = d + 2 * m.index;
      e[p] = g.mul(e[p], g.inv(e[p + 1]));
      break;
    }
    case MoveKind::HandleT2: {
      const std::size_t p = d + 2 * m.index;
      e[p + 1] = g.mul(e[p + 1], e[p]);
      break;
    }
    case MoveKind::HandleT2Inv: {
      const std::size_t p = d + 2 * m.index;
      e[p + 1] = g.mul(e[p + 1], g.inv(e[p]));
      break;
    }
    case MoveKind::HandleSwap: {
      const std::size_t p = d + 2 * m.index;
      const Elem a = e[p], b = e[p + 1], a2 = e[p + 2], b2 = e[p + 3];
      const Elem c = g.commutator(a, b);
      e[p] = g.conj(c, a2);
      e[p + 1] = g.conj(c, b2);
      e[p + 2] = a;
      e[p + 3] = b;
      break;
    }
    case MoveKind::HandleSwapInv: {
      const std::size_t p = d + 2 * m.index;
      const Elem a = e[p], b = e[p + 1], a2 = e[p + 2], b2 = e[p + 3];
      const Elem ci = g.inv(g.commutator(a2, b2));
      e[p] = a2;
      e[p + 1] = b2;
      e[p + 2] = g.conj(ci, a);
      e[p + 3] = g.conj(ci, b);
      break;
    }
    case MoveKind::HandleMix: {
      // (a, b, A, B) -> (a, u B A^-1 b, u, B) with u = b a^-1 b^-1 A
      const std::size_t p = d + 2 * m.index;
      const Elem a = e[p], b = e[p + 1], a2 = e[p + 2], b2 = e[p + 3];
      const Elem u = g.mul(g.mul(b, g.inv(a)), g.mul(g.inv(b), a2));
      e[p + 1] = g.mul(g.mul(u, b2), g.mul(g.inv(a2), b));
      e[p + 2] = u;
      break;
    }
    case MoveKind::HandleMixInv: {
      const std::size_t p = d + 2 * m.index;
      const Elem a = e[p], b = e[p + 1], a2 = e[p + 2], b2 = e[p + 3];
      const Elem w = g.mul(g.mul(g.inv(b2), g.inv(a2)), b);
      e[p + 1] = g.mul(g.mul(a2, w), a);
      e[p + 2] = g.mul(g.mul(a2, w), g.mul(a, g.inv(w)));
      break;
    }
    case MoveKind::MixedCLP: {
      const Elem c = e[d - 1], a = e[d], b = e[d + 1];
      const Elem k = g.mul(g.mul(c, a), g.mul(b, g.inv(a)));
      e[d - 1] = g.conj(k, c);
      e[d] = g.mul(c, a);
      break;
    }
    case MoveKind::MixedCLPInv: {
      const Elem c2 = e[d - 1], a2 = e[d], b = e[d + 1];
      const Elem h = g.conj(a2, b);
      const Elem c = g.conj(g.inv(h), c2);
      e[d - 1] = c;
      e[d] = g.mul(g.inv(c), a2);
      break;
    }
    case MoveKind::TrivialHandleSet: e[d] = m.elem; break;
    case MoveKind::TrivialHandleUnset: e[d] = kIdentity; break;
    case MoveKind::GlobalConj:
      for (auto& x : e) x = g.conj(m.elem, x);
      break;
  }
  return w;
}

/// Every move of the selected families for vectors of shape (d, genus), in a fixed order.
inline std::vector<Move> candidate_moves(const FiniteGroup& g, std::size_t d, std::size_t genus, MoveSet set) {
  std::vector<Move> out;
  if (set & move_family::braid)
    for (std::size_t i = 0; i + 1 < d; ++i) {
      out.push_back({MoveKind::BraidTwist, i, kIdentity});
      out.push_back({MoveKind::BraidTwistInv, i, kIdentity});
    }
  if (set & move_family::handle)
    for (std::size_t j = 0; j < genus; ++j)
      for (MoveKind k : {MoveKind::HandleT1, MoveKind::HandleT1Inv, MoveKind::HandleT2, MoveKind::HandleT2Inv})
        out.push_back({k, j, kIdentity});
  if (set & move_family::swap)
    for (std::size_t j = 0; j + 1 < genus; ++j) {
      out.push_back({MoveKind::HandleSwap, j, kIdentity});
      out.push_back({MoveKind::HandleSwapInv, j, kIdentity});
    }
  if (set & move_family::mix)
    for (std::size_t j = 0; j + 1 < genus; ++j) {
      out.push_back({MoveKind::HandleMix, j, kIdentity});
      out.push_back({MoveKind::HandleMixInv, j, kIdentity});
    }
  if ((set & move_family::clp) && d >= 1 && genus >= 1) {
    out.push_back({MoveKind::MixedCLP, 0, kIdentity});
    out.push_back({MoveKind::MixedCLPInv, 0, kIdentity});
  }
  if ((set & move_family::trivial) && genus >= 1) {
    for (Elem x = 1; x < g.order(); ++x) out.push_back({MoveKind::TrivialHandleSet, 0, x});
    out.push_back({MoveKind::TrivialHandleUnset, 0, kIdentity});
  }
  if (set & move_family::conj)
    for (Elem u = 1; u < g.order(); ++u) out.push_back({MoveKind::GlobalConj, 0, u});
  return out;
}

inline std::vector<HurwitzVector> neighbor_states(const FiniteGroup& g, const HurwitzVector& v, MoveSet set) {
  std::vector<HurwitzVector> out;
  for (const Move& m : candidate_moves(g, v.d, v.genus, set))
    if (move_applicable(g, v, m)) out.push_back(apply_move(g, v, m));
  return out;
}

/// The move m' with f(apply(v, m)) = apply(f(v), m').
inline Move transform_move(const Move& m, const Automorphism& f) {
  Move r = m;
  if (m.kind == MoveKind::GlobalConj || m.kind == MoveKind::TrivialHandleSet) r.elem = f(m.elem);
  return r;
}

inline HurwitzVector apply_automorphism(const Automorphism& f, const HurwitzVector& v) {
  HurwitzVector w = v;
  for (auto& x : w.entries) x = f(x);
  return w;
}

}  // namespace hstab
