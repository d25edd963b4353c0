#pragma once

// Exact integer linear algebra: Smith and Hermite normal forms, quotient
// presentations Z^n / L with canonical coset coordinates, integer kernels and
// lattice preimages. Everything is computed with GMP integers; there is no
// floating point anywhere in this header.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hstab/errors.hpp"

namespace hstab {

using BigInt = mpz_class;
using BigVector = std::vector<BigInt>;

namespace detail {

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline BigInt trunc_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// v[from..] -= q * r[from..]
inline void sub_mul(BigVector& v, const BigInt& q, const BigVector& r, std::size_t from = 0) {
  for (std::size_t j = from; j < r.size(); ++j) {
    if (sgn(r[j]) != 0) mpz_submul(v[j].get_mpz_t(), q.get_mpz_t(), r[j].get_mpz_t());
  }
}

inline std::size_t first_nonzero(const BigVector& v, std::size_t from = 0) {
  for (std::size_t j = from; j < v.size(); ++j) {
    if (sgn(v[j]) != 0) return j;
  }
  return v.size();
}

inline int cmpabs(const BigInt& a, const BigInt& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

inline bool is_zero(const BigVector& v) { return first_nonzero(v) == v.size(); }

inline std::int64_t to_int64(const BigInt& x) {
  if (!x.fits_slong_p()) throw BudgetExceeded("integer coefficient exceeds 64-bit range: " + x.get_str());
  return static_cast<std::int64_t>(x.get_si());
}

}  // namespace detail

/// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InvalidInput("matrix row has inconsistent length");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
    }
    return m;
  }

  static IntMatrix from_rows(const std::vector<BigVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InvalidInput("matrix row has inconsistent length");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  BigVector row(std::size_t i) const {
    return BigVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return sgn(x) == 0; });
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("matrix product dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const BigInt& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), b(k, j).get_mpz_t());
      }
    return c;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += q * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& q) {
    if (sgn(q) == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      mpz_addmul((*this)(dst, j).get_mpz_t(), q.get_mpz_t(), (*this)(src, j).get_mpz_t());
  }
  // col[dst] += q * col[src]
  void add_col(std::size_t dst, std::size_t src, const BigInt& q) {
    if (sgn(q) == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      mpz_addmul((*this)(i, dst).get_mpz_t(), q.get_mpz_t(), (*this)(i, src).get_mpz_t());
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline BigInt determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw InvalidInput("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... , d_i >= 0.
/// V_inverse is tracked alongside so coordinates can be mapped back exactly.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix V_inverse;
  std::size_t rank = 0;

  BigVector diagonal() const {
    BigVector d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

inline SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SmithForm s{IntMatrix::identity(rows), m, IntMatrix::identity(cols), IntMatrix::identity(cols), 0};
  IntMatrix& a = s.D;

  // Column operations must be mirrored on V (columns) and V^-1 (rows).
  auto col_add = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    a.add_col(dst, src, q);
    s.V.add_col(dst, src, q);
    s.V_inverse.add_row(src, dst, -q);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    s.V.swap_cols(x, y);
    s.V_inverse.swap_rows(x, y);
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    a.add_row(dst, src, q);
    s.U.add_row(dst, src, q);
  };
  auto row_swap = [&](std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    s.U.swap_rows(x, y);
  };

  const std::size_t limit = std::min(rows, cols);
  std::size_t t = 0;
  for (; t < limit; ++t) {
    // smallest nonzero entry of the trailing block
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (sgn(a(i, j)) != 0 && (pi == rows || detail::cmpabs(a(i, j), a(pi, pj)) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    row_swap(t, pi);
    col_swap(t, pj);

    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(a(i, t)) == 0) continue;
        row_add(i, t, -detail::floor_div(a(i, t), a(t, t)));
        if (sgn(a(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(a(t, j)) == 0) continue;
        col_add(j, t, -detail::floor_div(a(t, j), a(t, t)));
        if (sgn(a(t, j)) != 0) clean = false;
      }
      if (!clean) {
        // move the smallest remainder onto the diagonal and repeat
        std::size_t best_i = t, best_j = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (sgn(a(i, t)) != 0 && detail::cmpabs(a(i, t), a(best_i, best_j)) < 0) best_i = i, best_j = t;
        for (std::size_t j = t + 1; j < cols; ++j)
          if (sgn(a(t, j)) != 0 && detail::cmpabs(a(t, j), a(best_i, best_j)) < 0) best_i = t, best_j = j;
        row_swap(t, best_i);
        col_swap(t, best_j);
        continue;
      }
      // divisibility of the trailing block by the pivot
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      row_add(t, bad, BigInt(1));
    }
    if (sgn(a(t, t)) < 0) {
      a.negate_row(t);
      s.U.negate_row(t);
    }
  }
  s.rank = t;
  return s;
}

/// Row lattice kept in fully reduced Hermite normal form: pivots positive,
/// entries in later pivot columns reduced into [0, pivot).
class LatticeBasis {
 public:
  explicit LatticeBasis(std::size_t dim = 0) : dim_(dim), row_at_col_(dim, npos) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return pivots_.size(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const BigVector& row_for_pivot(std::size_t col) const { return rows_[row_at_col_[col]]; }
  bool has_pivot(std::size_t col) const { return row_at_col_[col] != npos; }

  void insert(BigVector v) {
    if (v.size() != dim_) throw InvalidInput("lattice vector has wrong length");
    std::size_t c = 0;
    while (true) {
      c = detail::first_nonzero(v, c);
      if (c == dim_) return;
      if (row_at_col_[c] == npos) {
        if (sgn(v[c]) < 0)
          for (auto& x : v) x = -x;
        reduce_after(v, c);
        add_row(std::move(v), c);
        fix_earlier(c);
        return;
      }
      BigVector& r = rows_[row_at_col_[c]];
      if (mpz_divisible_p(v[c].get_mpz_t(), r[c].get_mpz_t())) {
        BigInt q = v[c] / r[c];
        detail::sub_mul(v, q, r, c);
        continue;
      }
      BigInt g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), r[c].get_mpz_t(), v[c].get_mpz_t());
      BigInt a = r[c] / g;
      BigInt b = v[c] / g;
      BigVector nr(dim_), nv(dim_);
      for (std::size_t j = c; j < dim_; ++j) {
        nr[j] = s * r[j] + t * v[j];
        nv[j] = b * r[j] - a * v[j];
      }
      if (sgn(nr[c]) < 0)
        for (auto& x : nr) x = -x;
      reduce_after(nr, c);
      r = std::move(nr);
      fix_earlier(c);
      v = std::move(nv);
    }
  }

  void insert_sparse(std::span<const std::pair<std::size_t, std::int64_t>> entries) {
    BigVector v(dim_);
    for (const auto& [j, x] : entries) {
      if (j >= dim_) throw InvalidInput("sparse lattice vector index out of range");
      v[j] += static_cast<long>(x);
    }
    insert(std::move(v));
  }

  /// Canonical representative of v + L: every pivot coordinate lands in [0, pivot).
  BigVector reduce(BigVector v) const {
    if (v.size() != dim_) throw InvalidInput("vector has wrong length for reduction");
    for (std::size_t c : pivots_) {
      const BigVector& r = rows_[row_at_col_[c]];
      if (sgn(v[c]) < 0 || v[c] >= r[c]) detail::sub_mul(v, detail::floor_div(v[c], r[c]), r, c);
    }
    return v;
  }

  bool contains(const BigVector& v) const { return detail::is_zero(reduce(v)); }

  /// Coefficients of v in the basis rows (pivot order), if v lies in the lattice.
  std::optional<BigVector> coordinates_of(BigVector v) const {
    if (v.size() != dim_) throw InvalidInput("vector has wrong length");
    BigVector lambda;
    lambda.reserve(pivots_.size());
    for (std::size_t c : pivots_) {
      const BigVector& r = rows_[row_at_col_[c]];
      if (!mpz_divisible_p(v[c].get_mpz_t(), r[c].get_mpz_t())) return std::nullopt;
      BigInt q = v[c] / r[c];
      detail::sub_mul(v, q, r, c);
      lambda.push_back(q);
    }
    if (!detail::is_zero(v)) return std::nullopt;
    return lambda;
  }

  IntMatrix matrix() const {
    IntMatrix m(pivots_.size(), dim_);
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const BigVector& r = rows_[row_at_col_[pivots_[i]]];
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = r[j];
    }
    return m;
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  void add_row(BigVector v, std::size_t c) {
    row_at_col_[c] = rows_.size();
    rows_.push_back(std::move(v));
    pivots_.insert(std::upper_bound(pivots_.begin(), pivots_.end(), c), c);
  }

  void reduce_after(BigVector& v, std::size_t c) const {
    auto it = std::upper_bound(pivots_.begin(), pivots_.end(), c);
    for (; it != pivots_.end(); ++it) {
      const BigVector& r = rows_[row_at_col_[*it]];
      const BigInt& x = v[*it];
      if (sgn(x) < 0 || x >= r[*it]) detail::sub_mul(v, detail::floor_div(x, r[*it]), r, *it);
    }
  }

  // Restore reduction of rows with earlier pivots against the row at column c.
  void fix_earlier(std::size_t c) {
    const BigVector& rc = rows_[row_at_col_[c]];
    for (std::size_t p : pivots_) {
      if (p >= c) break;
      BigVector& r = rows_[row_at_col_[p]];
      if (sgn(r[c]) < 0 || r[c] >= rc[c]) {
        detail::sub_mul(r, detail::floor_div(r[c], rc[c]), rc, c);
        reduce_after(r, c);
      }
    }
  }

  std::size_t dim_;
  std::vector<BigVector> rows_;
  std::vector<std::size_t> row_at_col_;
  std::vector<std::size_t> pivots_;
};

/// Invariant-factor shape of a finitely generated abelian group.
struct AbelianShape {
  BigVector torsion;  // each > 1, dividing the next
  std::size_t free_rank = 0;

  friend bool operator==(const AbelianShape&, const AbelianShape&) = default;
};

inline AbelianShape shape_from_smith(const SmithForm& s, std::size_t generators) {
  AbelianShape out;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.D(i, i) > 1) out.torsion.push_back(s.D(i, i));
  out.free_rank = generators - s.rank;
  return out;
}

/// Z^n / L with canonical coordinates.
///
/// Rows of the reduced HNF whose pivot is 1 are split off exactly: the map
/// phi(v) = v|C2 - sum_r v[c_r] * row_r|C2 identifies Z^n / (unit rows) with
/// Z^C2, where C2 are the columns that are not unit pivots. The remaining
/// rows live on C2 and get a (small) Smith form. Coordinates of a class are
/// phi(v) * V, torsion entries reduced into [0, d_i), entries with d_i = 1
/// dropped.
class QuotientPresentation {
 public:
  explicit QuotientPresentation(LatticeBasis lattice) : lattice_(std::move(lattice)) {
    const std::size_t n = lattice_.dim();
    std::vector<bool> unit(n, false);
    for (std::size_t c : lattice_.pivots())
      if (lattice_.row_for_pivot(c)[c] == 1) unit[c] = true;
    c2_index_.assign(n, npos);
    for (std::size_t j = 0; j < n; ++j)
      if (!unit[j]) {
        c2_index_[j] = c2_cols_.size();
        c2_cols_.push_back(j);
      } else {
        unit_cols_.push_back(j);
      }
    std::vector<BigVector> residual;
    for (std::size_t c : lattice_.pivots()) {
      if (unit[c]) continue;
      const BigVector& r = lattice_.row_for_pivot(c);
      BigVector rr(c2_cols_.size());
      for (std::size_t k = 0; k < c2_cols_.size(); ++k) rr[k] = r[c2_cols_[k]];
      residual.push_back(std::move(rr));
    }
    smith_ = smith_normal_form(IntMatrix::from_rows(residual, c2_cols_.size()));
    const std::size_t m = c2_cols_.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (i < smith_.rank) {
        if (smith_.D(i, i) > 1) {
          kept_.push_back(i);
          moduli_.push_back(smith_.D(i, i));
        }
      } else {
        kept_.push_back(i);
        moduli_.push_back(0);
      }
    }
  }

  std::size_t ambient_rank() const { return lattice_.dim(); }
  const LatticeBasis& lattice() const { return lattice_; }

  /// Number of canonical coordinates (torsion coordinates first, then free).
  std::size_t dimension() const { return kept_.size(); }
  /// Modulus of coordinate k; 0 for free coordinates.
  const BigInt& modulus(std::size_t k) const { return moduli_[k]; }

  AbelianShape shape() const {
    AbelianShape s;
    for (const auto& d : moduli_) {
      if (sgn(d) == 0)
        ++s.free_rank;
      else
        s.torsion.push_back(d);
    }
    return s;
  }
  BigVector torsion_factors() const { return shape().torsion; }
  std::size_t free_rank() const { return shape().free_rank; }
  std::size_t torsion_rank() const { return dimension() - free_rank(); }

  BigVector coordinates(const BigVector& v) const {
    if (v.size() != ambient_rank()) throw InvalidInput("vector length does not match ambient rank");
    return from_c2(phi(v));
  }

  BigVector coordinates_of_basis(std::size_t j) const {
    BigVector u(c2_cols_.size());
    if (c2_index_[j] != npos) {
      u[c2_index_[j]] = 1;
    } else {
      const BigVector& r = lattice_.row_for_pivot(j);
      for (std::size_t k = 0; k < c2_cols_.size(); ++k) u[k] = -r[c2_cols_[k]];
    }
    return from_c2(u);
  }

  /// Reduce a coordinate vector into canonical range.
  void normalize(BigVector& w) const {
    for (std::size_t k = 0; k < kept_.size(); ++k)
      if (sgn(moduli_[k]) != 0) mpz_fdiv_r(w[k].get_mpz_t(), w[k].get_mpz_t(), moduli_[k].get_mpz_t());
  }

  /// Some ambient vector whose class has the given coordinates.
  BigVector lift(const BigVector& coords) const {
    if (coords.size() != dimension()) throw InvalidInput("coordinate vector has wrong length");
    const std::size_t m = c2_cols_.size();
    BigVector full(m);
    for (std::size_t k = 0; k < kept_.size(); ++k) full[kept_[k]] = coords[k];
    BigVector v(ambient_rank());
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(full[i]) == 0) continue;
      for (std::size_t j = 0; j < m; ++j)
        mpz_addmul(v[c2_cols_[j]].get_mpz_t(), full[i].get_mpz_t(), smith_.V_inverse(i, j).get_mpz_t());
    }
    return v;
  }

  BigVector canonical_representative(BigVector v) const { return lattice_.reduce(std::move(v)); }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  BigVector phi(const BigVector& v) const {
    BigVector u(c2_cols_.size());
    for (std::size_t k = 0; k < c2_cols_.size(); ++k) u[k] = v[c2_cols_[k]];
    for (std::size_t c : unit_cols_) {
      if (sgn(v[c]) == 0) continue;
      const BigVector& r = lattice_.row_for_pivot(c);
      for (std::size_t k = 0; k < c2_cols_.size(); ++k)
        if (sgn(r[c2_cols_[k]]) != 0) mpz_submul(u[k].get_mpz_t(), v[c].get_mpz_t(), r[c2_cols_[k]].get_mpz_t());
    }
    return u;
  }

  BigVector from_c2(const BigVector& u) const {
    BigVector w(kept_.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (sgn(u[i]) == 0) continue;
      for (std::size_t k = 0; k < kept_.size(); ++k)
        mpz_addmul(w[k].get_mpz_t(), u[i].get_mpz_t(), smith_.V(i, kept_[k]).get_mpz_t());
    }
    normalize(w);
    return w;
  }

  LatticeBasis lattice_;
  std::vector<std::size_t> c2_cols_;
  std::vector<std::size_t> c2_index_;
  std::vector<std::size_t> unit_cols_;
  SmithForm smith_;
  std::vector<std::size_t> kept_;
  BigVector moduli_;
};

/// A coset in a QuotientPresentation, stored by canonical coordinates.
struct AbelianClass {
  const QuotientPresentation* presentation = nullptr;
  BigVector coords;

  friend bool operator==(const AbelianClass& a, const AbelianClass& b) {
    return a.presentation == b.presentation && a.coords == b.coords;
  }
};

inline QuotientPresentation quotient_presentation(std::size_t ambient_rank, const IntMatrix& relation_gens) {
  if (relation_gens.rows() > 0 && relation_gens.cols() != ambient_rank)
    throw InvalidInput("relation generators have " + std::to_string(relation_gens.cols()) +
                       " columns, expected " + std::to_string(ambient_rank));
  LatticeBasis basis(ambient_rank);
  for (std::size_t i = 0; i < relation_gens.rows(); ++i) basis.insert(relation_gens.row(i));
  return QuotientPresentation(std::move(basis));
}

inline AbelianClass reduce_class(const QuotientPresentation& p, const BigVector& v) {
  if (v.size() != p.ambient_rank()) throw InvalidInput("vector length does not match ambient rank");
  return AbelianClass{&p, p.coordinates(v)};
}

/// Rows spanning the integer kernel {x : A x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t q = a.cols();
  std::vector<BigVector> work(q, BigVector(m + q));
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t r = 0; r < m; ++r) work[i][r] = a(r, i);
    work[i][m + i] = 1;
  }
  std::vector<bool> used(q, false);
  for (std::size_t c = 0; c < m; ++c) {
    while (true) {
      std::size_t best = q;
      for (std::size_t i = 0; i < q; ++i)
        if (!used[i] && sgn(work[i][c]) != 0 && (best == q || detail::cmpabs(work[i][c], work[best][c]) < 0)) best = i;
      if (best == q) break;
      bool others = false;
      for (std::size_t i = 0; i < q; ++i) {
        if (i == best || used[i] || sgn(work[i][c]) == 0) continue;
        detail::sub_mul(work[i], detail::trunc_div(work[i][c], work[best][c]), work[best]);
        if (sgn(work[i][c]) != 0) others = true;
      }
      if (!others) {
        used[best] = true;
        break;
      }
    }
  }
  std::vector<BigVector> kernel;
  for (std::size_t i = 0; i < q; ++i)
    if (!used[i]) kernel.emplace_back(work[i].begin() + static_cast<std::ptrdiff_t>(m), work[i].end());
  return IntMatrix::from_rows(kernel, q);
}

/// {v in Z^n : M v in L}, where M is m x n and L is spanned by the rows of l_gens (in Z^m).
inline LatticeBasis preimage_lattice(const IntMatrix& m, const IntMatrix& l_gens) {
  if (l_gens.rows() > 0 && l_gens.cols() != m.rows())
    throw InvalidInput("target lattice dimension does not match the map");
  const std::size_t n = m.cols();
  const std::size_t k = l_gens.rows();
  IntMatrix joint(m.rows(), n + k);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) joint(r, j) = m(r, j);
    for (std::size_t j = 0; j < k; ++j) joint(r, n + j) = -l_gens(j, r);
  }
  IntMatrix ker = integer_kernel(joint);
  LatticeBasis out(n);
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    BigVector x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = ker(i, j);
    out.insert(std::move(x));
  }
  return out;
}

/// Shape of outer / inner for lattices inner <= outer (inner given by generators).
inline AbelianShape quotient_shape(const LatticeBasis& outer, const std::vector<BigVector>& inner_gens) {
  std::vector<BigVector> coords;
  for (const auto& g : inner_gens) {
    auto c = outer.coordinates_of(g);
    if (!c) throw InvalidInput("inner lattice is not contained in outer lattice");
    coords.push_back(std::move(*c));
  }
  const std::size_t r = outer.rank();
  return shape_from_smith(smith_normal_form(IntMatrix::from_rows(coords, r)), r);
}

}  // namespace hstab
