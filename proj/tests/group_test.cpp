#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hstab/group_spec.hpp"
#include "hstab/groups.hpp"
#include "support/oracles.hpp"

using namespace hstab;

namespace {

std::vector<FiniteGroup> small_groups() {
  return {cyclic_group(1), cyclic_group(2), cyclic_group(4), abelian_group({2, 2}), symmetric_group(3),
          cyclic_group(6), dihedral_group(4), dicyclic_group(2), abelian_group({2, 4}), alternating_group_4(),
          dihedral_group(6), dicyclic_group(3)};
}

}  // namespace

TEST_CASE("table of Z/2 is a group of order 2") {
  const FiniteGroup g = group_from_table("Z2", {{0, 1}, {1, 0}});
  CHECK(g.order() == 2);
  CHECK(g.mul(1, 1) == 0);
  CHECK(g.inv(1) == 1);
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS_WITH(group_from_table("bad", {{0, 1}, {1, 1}}), Catch::Matchers::ContainsSubstring("row not a permutation"));
  CHECK_THROWS_AS(group_from_table("bad", {{0, 1}}), InvalidInput);
  CHECK_THROWS_AS(group_from_table("bad", {{0, 2}, {1, 0}}), InvalidInput);
  CHECK_THROWS_WITH(group_from_table("bad", {{1, 0}, {0, 1}}), Catch::Matchers::ContainsSubstring("identity"));
  // Latin square with identity row and column that is not associative
  const std::vector<std::vector<std::int64_t>> loop{
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  CHECK_THROWS_WITH(group_from_table("loop", loop), Catch::Matchers::ContainsSubstring("associative"));
}

TEST_CASE("permutation closure") {
  const FiniteGroup s3 = group_from_permutations("S3", 3, {{1, 2, 0}, {1, 0, 2}});
  CHECK(s3.order() == 6);
  CHECK(oracle::class_sizes(s3) == std::vector<std::size_t>{1, 2, 3});
  CHECK(s3.label(0) == "()");
  CHECK_THROWS_AS(group_from_permutations("bad", 3, {{0, 0, 1}}), InvalidInput);
  CHECK_THROWS_AS(group_from_permutations("bad", 3, {{0, 1}}), InvalidInput);
  GroupLimits tiny;
  tiny.max_order = 5;
  CHECK_THROWS_AS(group_from_permutations("S3", 3, {{1, 2, 0}, {1, 0, 2}}, tiny), BudgetExceeded);
}

TEST_CASE("group invariants hold for the library groups") {
  for (const FiniteGroup& g : small_groups()) {
    INFO(g.name());
    const std::size_t n = g.order();
    for (Elem i = 0; i < n; ++i) {
      CHECK(g.mul(0, i) == i);
      CHECK(g.mul(i, 0) == i);
      CHECK(g.mul(i, g.inv(i)) == 0);
      for (Elem j = 0; j < n; ++j)
        for (Elem k = 0; k < n; ++k) REQUIRE(g.mul(g.mul(i, j), k) == g.mul(i, g.mul(j, k)));
    }
  }
}

TEST_CASE("conjugacy classes") {
  CHECK(conjugacy_classes(cyclic_group(4)).size() == 4);
  for (const FiniteGroup& g : small_groups()) {
    INFO(g.name());
    const ConjugacyClassTable t = conjugacy_classes(g);
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    for (const auto& c : t.classes) {
      sizes.push_back(c.size());
      total += c.size();
      CHECK(g.order() % c.size() == 0);
      CHECK(std::is_sorted(c.begin(), c.end()));
    }
    CHECK(total == g.order());
    CHECK(t.classes[0] == std::vector<Elem>{0});
    for (std::size_t c = 1; c < t.size(); ++c) CHECK(t.classes[c - 1].front() < t.classes[c].front());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == oracle::class_sizes(g));
    for (Elem x = 0; x < g.order(); ++x)
      for (Elem u = 0; u < g.order(); ++u) CHECK(t.class_of[g.conj(u, x)] == t.class_of[x]);
  }
  const auto q8 = conjugacy_classes(dicyclic_group(2));
  std::vector<std::size_t> sizes;
  for (const auto& c : q8.classes) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 1, 2, 2, 2});
}

TEST_CASE("generated subgroups") {
  const FiniteGroup s3 = symmetric_group(3);
  CHECK(subgroup_generated(s3, {}) == std::vector<Elem>{0});
  Elem transposition = 0, three_cycle = 0;
  for (Elem x = 1; x < 6; ++x) (s3.element_order(x) == 2 ? transposition : three_cycle) = x;
  const Elem t[] = {transposition};
  CHECK(subgroup_generated(s3, t).size() == 2);
  const Elem both[] = {transposition, three_cycle};
  CHECK(subgroup_generated(s3, both).size() == 6);
  CHECK(generates(s3, both));
  CHECK_FALSE(generates(s3, t));

  std::mt19937_64 rng(7);
  for (const FiniteGroup& g : small_groups()) {
    std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(g.order() - 1));
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Elem> s{pick(rng), pick(rng)};
      const auto sub = subgroup_generated(g, s);
      const auto ref = oracle::closure(g, {s.begin(), s.end()});
      CHECK(std::vector<Elem>(ref.begin(), ref.end()) == sub);
    }
  }
}

TEST_CASE("normal closure and quotients") {
  const FiniteGroup s3 = symmetric_group(3);
  Elem transposition = 1;
  while (s3.element_order(transposition) != 2) ++transposition;
  const Elem t[] = {transposition};
  CHECK(normal_closure(s3, t).size() == 6);
  const FiniteGroup d8 = dihedral_group(4);
  const Elem r2[] = {2};
  const auto n = normal_closure(d8, r2);
  CHECK(n.size() == 2);
  const QuotientGroup q = quotient_by_normal(d8, n, "D8/Z");
  CHECK(q.group.order() == 4);
  CHECK(q.group.is_abelian());
  for (Elem a = 0; a < 8; ++a)
    for (Elem b = 0; b < 8; ++b) CHECK(q.projection[d8.mul(a, b)] == q.group.mul(q.projection[a], q.projection[b]));
}

TEST_CASE("abelianization") {
  const Abelianization z6 = abelianization(cyclic_group(6));
  CHECK(z6.group.factors == std::vector<std::int64_t>{6});
  std::set<std::vector<std::int64_t>> images(z6.projection.begin(), z6.projection.end());
  CHECK(images.size() == 6);

  const FiniteGroup s3 = symmetric_group(3);
  const Abelianization s3ab = abelianization(s3);
  CHECK(s3ab.group.to_string() == "Z/2");
  for (Elem x = 0; x < 6; ++x) CHECK(s3ab.projection[x][0] == (s3.element_order(x) == 2 ? 1 : 0));

  CHECK(abelianization(dicyclic_group(2)).group.to_string() == "Z/2 x Z/2");
  CHECK(abelianization(alternating_group_4()).group.to_string() == "Z/3");

  for (const FiniteGroup& g : small_groups()) {
    INFO(g.name());
    const Abelianization ab = abelianization(g);
    std::int64_t order = 1;
    for (auto f : ab.group.factors) order *= f;
    CHECK(ab.group.free_rank == 0);
    CHECK(static_cast<std::size_t>(order) * oracle::derived_subgroup_order(g) == g.order());
    for (Elem a = 0; a < g.order(); ++a)
      for (Elem b = 0; b < g.order(); ++b) {
        CHECK(ab.group.is_zero(ab.projection[g.commutator(a, b)]));
        std::vector<std::int64_t> s(ab.group.rank());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = ab.projection[a][i] + ab.projection[b][i] - ab.projection[g.mul(a, b)][i];
        CHECK(ab.group.is_zero(s));
      }
  }
}

TEST_CASE("automorphism groups") {
  CHECK(automorphism_group(cyclic_group(2)).size() == 1);
  CHECK(automorphism_group(abelian_group({2, 2})).size() == 6);
  const FiniteGroup s3 = symmetric_group(3);
  const auto s3aut = automorphism_group(s3);
  CHECK(s3aut.size() == 6);
  std::set<Automorphism> inner;
  for (Elem u = 0; u < 6; ++u) inner.insert(inner_automorphism(s3, u));
  CHECK(std::set<Automorphism>(s3aut.begin(), s3aut.end()) == inner);
  CHECK_THROWS_AS(automorphism_group(cyclic_group(25)), BudgetExceeded);

  for (const FiniteGroup& g : small_groups()) {
    INFO(g.name());
    const auto auts = automorphism_group(g);
    CHECK(std::is_sorted(auts.begin(), auts.end()));
    CHECK(std::binary_search(auts.begin(), auts.end(), identity_automorphism(g.order())));
    for (const auto& f : auts) CHECK(is_automorphism(g, f));
    if (g.order() <= 8) CHECK(auts.size() == oracle::automorphism_count(g));
    if (g.order() <= 16)
      for (const auto& f : auts) {
        CHECK(std::binary_search(auts.begin(), auts.end(), f.inverse()));
        for (const auto& h : auts) REQUIRE(std::binary_search(auts.begin(), auts.end(), f.after(h)));
      }
  }
}

TEST_CASE("group specs in JSON") {
  const FiniteGroup z3 = group_from_json_text(R"({"name":"Z3","table":[[0,1,2],[1,2,0],[2,0,1]],"labels":["1","r","r2"]})");
  CHECK(z3.order() == 3);
  CHECK(z3.label(2) == "r2");
  const FiniteGroup s3 = group_from_json_text(R"({"name":"S3","degree":3,"generators":[[1,2,0],[1,0,2]]})");
  CHECK(s3.order() == 6);
  CHECK_THROWS_AS(group_from_json_text("{"), InvalidInput);
  CHECK_THROWS_AS(group_from_json_text(R"({"name":"x"})"), InvalidInput);
  CHECK_THROWS_AS(group_from_json_text(R"({"table":"no"})"), InvalidInput);
  CHECK_THROWS_AS(group_from_json_text(R"({"generators":[[0]]})"), InvalidInput);
  const FiniteGroup back = group_from_json(group_to_json(s3));
  CHECK(std::equal(back.table().begin(), back.table().end(), s3.table().begin(), s3.table().end()));
  CHECK(back.labels() == s3.labels());
}

TEST_CASE("abelian group types") {
  CHECK(abelian_group_types(8).size() == 3);
  CHECK(abelian_group_types(16).size() == 5);
  CHECK(abelian_group_types(12).size() == 2);
  CHECK(abelian_group_types(1).size() == 1);
  for (std::size_t n = 1; n <= 16; ++n)
    for (const auto& t : abelian_group_types(n)) CHECK(abelian_group(t).order() == n);
}
