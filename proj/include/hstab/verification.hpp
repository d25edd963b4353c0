#pragma once

// Property checks over enumerated and randomly walked generating systems:
// moves preserve epsilon and nu, nu is recovered from epsilon, nu is admissible.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hstab/congruences.hpp"
#include "hstab/moves.hpp"
#include "hstab/orbits.hpp"

namespace hstab {

inline std::string vector_string(const HurwitzVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += i == v.d ? "; " : ",";
    s += std::to_string(v.entries[i]);
  }
  if (v.d == 0 && v.size() == 0) s += ";";
  return s + ")";
}

/// Checks of one move applied to one generating system.
inline std::string move_violation(const HomologyEngine& engine, const HurwitzVector& v, const EpsilonClass& e,
                                  const NuType& nu, const Move& m) {
  const FiniteGroup& g = engine.group();
  const HurwitzVector w = apply_move(g, v, m);
  if (!is_hurwitz_generating_system(g, w)) return "leaves HS";
  if (nu_type(engine.classes(), w) != nu) return "changes nu";
  if (epsilon(engine, w) != e) return "changes epsilon";
  return {};
}

/// Every applicable move of `set` on every generating system of shape (d, genus).
inline IdentityTally check_moves_exhaustive(const HomologyEngine& engine, std::size_t genus, std::size_t d,
                                            MoveSet set, const EnumerationLimits& limits = {}) {
  const FiniteGroup& g = engine.group();
  IdentityTally t{"moves g'=" + std::to_string(genus) + " d=" + std::to_string(d)};
  const std::vector<Move> moves = candidate_moves(g, d, genus, set);
  enumerate_hs(g, engine.classes(), genus, d, std::nullopt, limits, [&](const HurwitzVector& v) {
    const EpsilonClass e = epsilon(engine, v);
    const NuType nu = nu_type(engine.classes(), v);
    for (const Move& m : moves) {
      if (!move_applicable(g, v, m)) continue;
      const std::string err = move_violation(engine, v, e, nu, m);
      t.record(err.empty(), m.tag() + " on " + vector_string(v) + ": " + err);
    }
  });
  return t;
}

/// A generating system over an admissible nu: the commutator-completed base
/// vector followed by one handle (x, 1) per generator x.
inline HurwitzVector generating_base_vector(const HomologyEngine& engine, const NuType& nu) {
  HurwitzVector v = base_vector(engine, nu);
  for (Elem x : minimal_generating_tuple(engine.group())) {
    v.entries.push_back(x);
    v.entries.push_back(kIdentity);
    ++v.genus;
  }
  return v;
}

/// Random walks of `length` uniformly chosen applicable moves from generating
/// base vectors over random admissible nu-types with at most max_d branch points.
inline IdentityTally check_moves_random(const HomologyEngine& engine, std::uint64_t walks, std::size_t length,
                                        std::size_t max_d, std::mt19937_64& rng, MoveSet set = move_family::all) {
  const FiniteGroup& g = engine.group();
  const Abelianization ab = abelianization(g);
  std::vector<NuType> admissible;
  const std::vector<Automorphism> none{identity_automorphism(g.order())};
  for (std::size_t d = 0; d <= max_d; ++d)
    for (const NuType& nu : canonical_nu_types(engine, none, d))
      if (is_admissible(nu, engine.classes(), ab)) admissible.push_back(nu);
  IdentityTally t{"random walks"};
  std::uniform_int_distribution<std::size_t> pick_nu(0, admissible.size() - 1);
  for (std::uint64_t k = 0; k < walks; ++k) {
    HurwitzVector v = generating_base_vector(engine, admissible[pick_nu(rng)]);
    const std::vector<Move> moves = candidate_moves(g, v.d, v.genus, set);
    EpsilonClass e = epsilon(engine, v);
    const NuType nu = nu_type(engine.classes(), v);
    for (std::size_t step = 0; step < length; ++step) {
      std::vector<const Move*> ok;
      for (const Move& m : moves)
        if (move_applicable(g, v, m)) ok.push_back(&m);
      if (ok.empty()) break;
      const Move& m = *ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
      const std::string err = move_violation(engine, v, e, nu, m);
      t.record(err.empty(), m.tag() + " on " + vector_string(v) + ": " + err);
      if (!err.empty()) break;
      v = apply_move(g, v, m);
    }
  }
  return t;
}

/// nu recovered from epsilon through the abelianization of G_Gamma, and admissibility.
inline std::vector<IdentityTally> check_nu_epsilon(const HomologyEngine& engine, std::size_t genus, std::size_t d,
                                                   const EnumerationLimits& limits = {}) {
  const FiniteGroup& g = engine.group();
  const Abelianization ab = abelianization(g);
  const std::string shape = " g'=" + std::to_string(genus) + " d=" + std::to_string(d);
  IdentityTally recovered{"nu from epsilon" + shape}, admissible{"admissible" + shape};
  enumerate_hs(g, engine.classes(), genus, d, std::nullopt, limits, [&](const HurwitzVector& v) {
    const EpsilonClass e = epsilon(engine, v);
    const NuType nu = nu_type(engine.classes(), v);
    recovered.record(epsilon_image_is_pure(engine, e) && nu_from_epsilon(engine, e) == nu, vector_string(v));
    admissible.record(is_admissible(nu, engine.classes(), ab), vector_string(v));
  });
  return {recovered, admissible};
}

}  // namespace hstab
