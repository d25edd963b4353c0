#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "hstab/lattice.hpp"

using namespace hstab;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> pick(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = pick(rng);
  return m;
}

void check_smith(const IntMatrix& m) {
  const SmithForm s = smith_normal_form(m);
  REQUIRE(s.U * m * s.V == s.D);
  CHECK(s.V * s.V_inverse == IntMatrix::identity(m.cols()));
  if (m.rows() <= 12) CHECK(abs(determinant(s.U)) == 1);
  if (m.cols() <= 12) CHECK(abs(determinant(s.V)) == 1);
  const BigVector d = s.diagonal();
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) CHECK(s.D(i, j) == 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d[i] >= 0);
    if (i + 1 < d.size() && d[i] != 0) CHECK(d[i + 1] % d[i] == 0);
    if (d[i] == 0 && i + 1 < d.size()) CHECK(d[i + 1] == 0);
  }
  std::size_t nonzero = 0;
  for (const auto& x : d) nonzero += x != 0;
  CHECK(s.rank == nonzero);
}

// Number of cosets of the lattice in Z^n meeting the box [0, b)^n, assuming
// b is a multiple of the exponent so the box covers every coset.
std::size_t box_coset_count(const QuotientPresentation& p, int b) {
  const std::size_t n = p.ambient_rank();
  std::set<BigVector> seen;
  std::vector<int> v(n, 0);
  while (true) {
    BigVector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = v[i];
    seen.insert(p.coordinates(w));
    std::size_t pos = n;
    while (pos > 0 && v[pos - 1] == b - 1) v[--pos] = 0;
    if (pos == 0) break;
    ++v[pos - 1];
  }
  return seen.size();
}

}  // namespace

TEST_CASE("smith normal form examples") {
  const SmithForm one = smith_normal_form(IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{1}}, 1));
  CHECK(one.diagonal() == BigVector{1});
  const SmithForm s = smith_normal_form(IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2, 4}, {6, 8}}, 2));
  CHECK(s.diagonal() == BigVector{2, 4});
  check_smith(IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2, 4}, {6, 8}}, 2));
  const SmithForm z = smith_normal_form(IntMatrix(2, 3));
  CHECK(z.D.is_zero());
  CHECK(z.rank == 0);
  CHECK(smith_normal_form(IntMatrix(0, 3)).rank == 0);
}

TEST_CASE("smith normal form on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    check_smith(random_matrix(rng, dim(rng), dim(rng), trial % 2 ? 3 : 40));
  }
  // rank-deficient products
  for (int trial = 0; trial < 50; ++trial) check_smith(random_matrix(rng, 6, 2, 5) * random_matrix(rng, 2, 6, 5));
}

TEST_CASE("determinant") {
  CHECK(determinant(IntMatrix::identity(4)) == 1);
  CHECK(determinant(IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2, 4}, {6, 8}}, 2)) == -8);
  CHECK(determinant(IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{0, 1, 2}, {1, 0, 3}, {4, -3, 8}}, 3)) == -2);
}

TEST_CASE("quotient presentations") {
  using Rows = std::vector<std::vector<std::int64_t>>;
  const QuotientPresentation a = quotient_presentation(2, IntMatrix::from_rows(Rows{{2, 0}, {0, 2}}, 2));
  CHECK(a.shape().torsion == BigVector{2, 2});
  CHECK(a.shape().free_rank == 0);
  const QuotientPresentation b = quotient_presentation(2, IntMatrix::from_rows(Rows{{1, 0}}, 2));
  CHECK(b.shape().torsion.empty());
  CHECK(b.shape().free_rank == 1);
  CHECK_THROWS_AS(quotient_presentation(3, IntMatrix::from_rows(Rows{{1, 0}}, 2)), InvalidInput);

  const IntMatrix rel = IntMatrix::from_rows(Rows{{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}}, 3);
  const QuotientPresentation c = quotient_presentation(3, rel);
  CHECK(c.shape().free_rank == 0);
  BigInt order = 1;
  for (const auto& t : c.shape().torsion) order *= t;
  CHECK(order == abs(determinant(rel)));
  const SmithForm s = smith_normal_form(rel);
  BigVector expected;
  for (const auto& x : s.diagonal())
    if (x > 1) expected.push_back(x);
  CHECK(c.shape().torsion == expected);
  // exponent divides the last invariant factor, so a box of that side meets every coset
  CHECK(BigInt(box_coset_count(c, static_cast<int>(c.shape().torsion.back().get_si()))) == order);
}

TEST_CASE("reduce_class is canonical and a homomorphism") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const IntMatrix gens = random_matrix(rng, 1 + trial % 5, n, 6);
    const QuotientPresentation p = quotient_presentation(n, gens);
    CHECK(reduce_class(p, BigVector(n)).coords == BigVector(p.dimension()));
    for (std::size_t i = 0; i < gens.rows(); ++i) CHECK(reduce_class(p, gens.row(i)).coords == BigVector(p.dimension()));
    std::uniform_int_distribution<int> small(-20, 20);
    for (int k = 0; k < 250; ++k) {
      BigVector v(n), w(n);
      for (auto& x : v) x = small(rng);
      for (auto& x : w) x = small(rng);
      BigVector shifted = v;
      for (std::size_t i = 0; i < gens.rows(); ++i) {
        const int q = small(rng);
        for (std::size_t j = 0; j < n; ++j) shifted[j] += q * gens(i, j);
      }
      const AbelianClass cv = reduce_class(p, v);
      REQUIRE(reduce_class(p, shifted) == cv);
      BigVector sum(n);
      for (std::size_t j = 0; j < n; ++j) sum[j] = v[j] + w[j];
      BigVector csum(p.dimension());
      const BigVector cw = reduce_class(p, w).coords;
      for (std::size_t k2 = 0; k2 < csum.size(); ++k2) csum[k2] = cv.coords[k2] + cw[k2];
      p.normalize(csum);
      CHECK(reduce_class(p, sum).coords == csum);
      CHECK(p.coordinates(p.lift(cv.coords)) == cv.coords);
      CHECK(p.lattice().contains(
          [&] {
            BigVector d = p.canonical_representative(v);
            for (std::size_t j = 0; j < n; ++j) d[j] -= v[j];
            return d;
          }()));
    }
  }
  CHECK_THROWS_AS(reduce_class(quotient_presentation(2, IntMatrix(0, 2)), BigVector(3)), InvalidInput);
}

TEST_CASE("lattice basis membership") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const IntMatrix gens = random_matrix(rng, 3, 4, 5);
    LatticeBasis basis(4);
    for (std::size_t i = 0; i < 3; ++i) basis.insert(gens.row(i));
    std::uniform_int_distribution<int> small(-5, 5);
    BigVector v(4);
    for (std::size_t i = 0; i < 3; ++i) {
      const int q = small(rng);
      for (std::size_t j = 0; j < 4; ++j) v[j] += q * gens(i, j);
    }
    CHECK(basis.contains(v));
    const auto coords = basis.coordinates_of(v);
    REQUIRE(coords);
    BigVector back(4);
    const IntMatrix m = basis.matrix();
    for (std::size_t i = 0; i < coords->size(); ++i)
      for (std::size_t j = 0; j < 4; ++j) back[j] += (*coords)[i] * m(i, j);
    CHECK(back == v);
  }
}

TEST_CASE("preimage lattices") {
  using Rows = std::vector<std::vector<std::int64_t>>;
  const IntMatrix id = IntMatrix::identity(3);
  const IntMatrix two = IntMatrix::from_rows(Rows{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}, 3);
  const LatticeBasis p = preimage_lattice(id, two);
  CHECK(p.rank() == 3);
  CHECK(p.matrix() == two);
  const LatticeBasis all = preimage_lattice(IntMatrix(2, 3), IntMatrix(0, 2));
  CHECK(all.matrix() == id);
  CHECK_THROWS_AS(preimage_lattice(id, IntMatrix(1, 2)), InvalidInput);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMatrix m = random_matrix(rng, 3, 4, 3);
    const IntMatrix other = random_matrix(rng, 2, 3, 3);
    const IntMatrix l = integer_kernel(other);  // rows span {y : other y = 0}
    CHECK((other * l.transposed()).is_zero());
    LatticeBasis target(3);
    for (std::size_t i = 0; i < l.rows(); ++i) target.insert(l.row(i));
    const LatticeBasis pre = preimage_lattice(m, l);
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        for (int c = -2; c <= 2; ++c)
          for (int d = -2; d <= 2; ++d) {
            BigVector v{a, b, c, d};
            BigVector img(3);
            for (std::size_t i = 0; i < 3; ++i)
              for (std::size_t j = 0; j < 4; ++j) img[i] += m(i, j) * v[j];
            REQUIRE(pre.contains(v) == target.contains(img));
          }
  }
}

TEST_CASE("quotient shape of nested lattices") {
  LatticeBasis outer(2);
  outer.insert(BigVector{1, 0});
  outer.insert(BigVector{0, 1});
  const AbelianShape s = quotient_shape(outer, {BigVector{2, 0}, BigVector{0, 6}});
  CHECK(s.torsion == BigVector{2, 6});
  LatticeBasis half(2);
  half.insert(BigVector{2, 0});
  CHECK_THROWS_AS(quotient_shape(half, {BigVector{1, 0}}), InvalidInput);
}
