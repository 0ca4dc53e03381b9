#pragma once

// Exact integer lattices: Hermite and Smith normal forms over arbitrary
// precision integers, and row-span membership.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "k0heap/label.hpp"

namespace k0 {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

// Dense row-major matrix of integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw Error("matrix needs " + std::to_string(rows_ * cols_) + " entries, got " +
                  std::to_string(entries_.size()));
    }
  }

  // Rows must share a length; `cols` fixes the width when there are no rows.
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw Error("ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<Integer> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const Integer> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }
  // row[dst] += k * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
  }
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
  }
  void negate_row(std::size_t r) {
    for (auto& x : row(r)) x = -x;
  }
  void negate_col(std::size_t c) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product dimension mismatch");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

// Structure of a finitely generated abelian group: Z^rank + sum Z/d_i with
// d_1 | d_2 | ... and every d_i >= 2.
struct InvariantFactors {
  std::size_t rank = 0;
  std::vector<Integer> torsion;

  bool trivial() const noexcept { return rank == 0 && torsion.empty(); }
  friend bool operator==(const InvariantFactors&, const InvariantFactors&) = default;
};

inline std::string to_string(const InvariantFactors& f) {
  if (f.trivial()) return "0";
  std::string out;
  auto add = [&](const std::string& part) { out += (out.empty() ? "" : " + ") + part; };
  if (f.rank == 1) add("Z");
  if (f.rank > 1) add("Z^" + std::to_string(f.rank));
  for (const auto& d : f.torsion) add("Z/" + d.str());
  return out;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

// U * M = H with U unimodular and H in row Hermite form.
struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  // pivot_cols[i] is the pivot column of row i; rows past the rank are zero.
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const noexcept { return pivot_cols.size(); }
};

// Row-style HNF. Pivots are positive, entries above a pivot lie in
// [0, pivot), zero rows come last. Each elimination step pivots on the
// smallest nonzero magnitude in the column.
inline HermiteForm hnf(const IntMatrix& m) {
  HermiteForm out{m, IntMatrix::identity(m.rows()), {}};
  auto& h = out.H;
  auto& u = out.U;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    bool has_pivot = false;
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < h.rows(); ++i) {
        if (h(i, c) != 0 && (!best || abs(h(i, c)) < abs(h(*best, c)))) best = i;
      }
      if (!best) break;
      has_pivot = true;
      h.swap_rows(r, *best);
      u.swap_rows(r, *best);
      bool clean = true;
      for (std::size_t i = r + 1; i < h.rows(); ++i) {
        if (h(i, c) == 0) continue;
        const Integer q = h(i, c) / h(r, c);
        h.add_row_multiple(i, r, -q);
        u.add_row_multiple(i, r, -q);
        if (h(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (!has_pivot) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = floor_div(h(i, c), h(r, c));
      h.add_row_multiple(i, r, -q);
      u.add_row_multiple(i, r, -q);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  return out;
}

// U * M * V = D, D diagonal with d_1 | d_2 | ... and nonnegative entries.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  // The nonzero diagonal entries d_1, ..., d_rank in order.
  std::vector<Integer> diagonal;
};

inline SmithForm smith_decomposition(const IntMatrix& m) {
  SmithForm out{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols()), {}};
  auto& d = out.D;
  const auto limit = std::min(d.rows(), d.cols());
  for (std::size_t t = 0; t < limit; ++t) {
    bool any = false;
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j)
          if (d(i, j) != 0 && (!best || abs(d(i, j)) < abs(d(best->first, best->second)))) best = {i, j};
      if (!best) break;
      any = true;
      d.swap_rows(t, best->first);
      out.U.swap_rows(t, best->first);
      d.swap_cols(t, best->second);
      out.V.swap_cols(t, best->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (d(i, t) == 0) continue;
        const Integer q = d(i, t) / d(t, t);
        d.add_row_multiple(i, t, -q);
        out.U.add_row_multiple(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (d(t, j) == 0) continue;
        const Integer q = d(t, j) / d(t, t);
        d.add_col_multiple(j, t, -q);
        out.V.add_col_multiple(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < d.rows() && !offender; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (d(i, j) % d(t, t) != 0) {
            offender = i;
            break;
          }
      if (!offender) break;
      d.add_row_multiple(t, *offender, 1);
      out.U.add_row_multiple(t, *offender, 1);
    }
    if (!any) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      out.U.negate_row(t);
    }
    out.diagonal.push_back(d(t, t));
  }
  return out;
}

// Invariant factors of the cokernel Z^cols / rowspan(M).
inline InvariantFactors snf(const IntMatrix& m) {
  const auto smith = smith_decomposition(m);
  InvariantFactors f;
  f.rank = m.cols() - smith.diagonal.size();
  for (const auto& x : smith.diagonal)
    if (x != 1) f.torsion.push_back(x);
  return f;
}

// Reduces v against the Hermite rows; v is in the span iff nothing remains.
inline bool lattice_member(const HermiteForm& form, std::span<const Integer> v) {
  if (v.size() != form.H.cols()) {
    throw Error("lattice vector has length " + std::to_string(v.size()) + ", expected " +
                std::to_string(form.H.cols()));
  }
  std::vector<Integer> rest(v.begin(), v.end());
  for (std::size_t i = 0; i < form.rank(); ++i) {
    const auto c = form.pivot_cols[i];
    for (std::size_t j = (i == 0 ? 0 : form.pivot_cols[i - 1] + 1); j < c; ++j)
      if (rest[j] != 0) return false;
    const auto& pivot = form.H(i, c);
    if (rest[c] % pivot != 0) return false;
    const Integer q = rest[c] / pivot;
    if (q != 0)
      for (std::size_t j = c; j < rest.size(); ++j) rest[j] -= q * form.H(i, j);
  }
  return std::all_of(rest.begin(), rest.end(), [](const Integer& x) { return x == 0; });
}

inline bool lattice_member(const IntMatrix& m, std::span<const Integer> v) {
  if (v.size() != m.cols()) {
    throw Error("lattice vector has length " + std::to_string(v.size()) + ", expected " +
                std::to_string(m.cols()));
  }
  return lattice_member(hnf(m), v);
}

}  // namespace k0
