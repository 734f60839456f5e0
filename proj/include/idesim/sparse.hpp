#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "idesim/error.hpp"

namespace idesim {

using index_t = std::int64_t;

/// Dense column vector of doubles. All kernels treat it as immutable input.
using DenseVector = std::vector<double>;

inline bool all_finite(const DenseVector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

/// One (row, col, value) entry used during construction.
struct Triplet {
  index_t row;
  index_t col;
  double value;
};

/// Compressed-row sparse matrix. Columns are sorted within each row, no
/// explicit zeros are stored, duplicates were summed at construction.
/// Instances are immutable after construction; every kernel below reduces
/// in a fixed sequential order (row-major, ascending column) so results
/// are bit-reproducible.
class SparseMatrix {
 public:
  SparseMatrix() : n_rows_(0), n_cols_(0), row_offsets_(1, 0) {}

  SparseMatrix(index_t n_rows, index_t n_cols)
      : n_rows_(n_rows), n_cols_(n_cols), row_offsets_(n_rows + 1, 0) {
    if (n_rows < 0 || n_cols < 0) throw InputError("negative matrix dimension");
  }

  /// Builds from triplets: duplicates summed, exact zeros pruned,
  /// columns sorted within each row.
  static SparseMatrix from_triplets(index_t n_rows, index_t n_cols,
                                    std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
      if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols) {
        throw InputError("triplet index out of range");
      }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Triplet& a, const Triplet& b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    SparseMatrix m(n_rows, n_cols);
    m.col_indices_.reserve(entries.size());
    m.values_.reserve(entries.size());
    std::size_t i = 0;
    for (index_t r = 0; r < n_rows; ++r) {
      while (i < entries.size() && entries[i].row == r) {
        const index_t c = entries[i].col;
        double sum = 0.0;
        while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
          sum += entries[i].value;
          ++i;
        }
        if (sum != 0.0) {
          m.col_indices_.push_back(c);
          m.values_.push_back(sum);
        }
      }
      m.row_offsets_[r + 1] = static_cast<index_t>(m.col_indices_.size());
    }
    return m;
  }

  static SparseMatrix identity(index_t n) {
    SparseMatrix m(n, n);
    m.col_indices_.resize(n);
    m.values_.assign(n, 1.0);
    for (index_t i = 0; i < n; ++i) {
      m.col_indices_[i] = i;
      m.row_offsets_[i + 1] = i + 1;
    }
    return m;
  }

  /// n x n matrix with `diag` on the diagonal; zeros are not stored.
  static SparseMatrix diagonal_matrix(const DenseVector& diag) {
    const index_t n = static_cast<index_t>(diag.size());
    SparseMatrix m(n, n);
    for (index_t i = 0; i < n; ++i) {
      if (diag[i] != 0.0) {
        m.col_indices_.push_back(i);
        m.values_.push_back(diag[i]);
      }
      m.row_offsets_[i + 1] = static_cast<index_t>(m.col_indices_.size());
    }
    return m;
  }

  index_t n_rows() const noexcept { return n_rows_; }
  index_t n_cols() const noexcept { return n_cols_; }
  index_t nnz() const noexcept { return static_cast<index_t>(values_.size()); }

  const std::vector<index_t>& row_offsets() const noexcept { return row_offsets_; }
  const std::vector<index_t>& col_indices() const noexcept { return col_indices_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Value at (i, j); zero when the entry is not stored.
  double at(index_t i, index_t j) const {
    if (i < 0 || i >= n_rows_ || j < 0 || j >= n_cols_) {
      throw InputError("index out of range");
    }
    const auto begin = col_indices_.begin() + row_offsets_[i];
    const auto end = col_indices_.begin() + row_offsets_[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
  }

  /// Returns this matrix scaled entrywise by `s`.
  SparseMatrix scaled(double s) const {
    SparseMatrix m = *this;
    for (double& v : m.values_) v *= s;
    return m;
  }

  /// Transpose via counting sort: O(nnz + n), deterministic entry order.
  SparseMatrix transpose() const {
    SparseMatrix t(n_cols_, n_rows_);
    t.col_indices_.resize(values_.size());
    t.values_.resize(values_.size());
    std::vector<index_t>& offs = t.row_offsets_;
    for (index_t j : col_indices_) offs[j + 1]++;
    for (index_t j = 0; j < n_cols_; ++j) offs[j + 1] += offs[j];
    std::vector<index_t> next(offs.begin(), offs.end() - 1);
    for (index_t i = 0; i < n_rows_; ++i) {
      for (index_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
        const index_t dst = next[col_indices_[p]]++;
        t.col_indices_[dst] = i;
        t.values_[dst] = values_[p];
      }
    }
    return t;
  }

  bool structurally_equal(const SparseMatrix& other) const {
    return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ &&
           row_offsets_ == other.row_offsets_ &&
           col_indices_ == other.col_indices_;
  }

 private:
  index_t n_rows_;
  index_t n_cols_;
  std::vector<index_t> row_offsets_;
  std::vector<index_t> col_indices_;
  std::vector<double> values_;

  friend class SparseBuilder;
};

/// Appends rows in order; used by the product kernels to emit results
/// without intermediate triplet storage.
class SparseBuilder {
 public:
  SparseBuilder(index_t n_rows, index_t n_cols) : m_(n_rows, n_cols), row_(0) {}

  /// `cols` must be strictly increasing; values with |v| == 0 are skipped.
  void append_row(index_t row, const std::vector<index_t>& cols,
                  const std::vector<double>& vals) {
    while (row_ < row) m_.row_offsets_[++row_] = m_.nnz();
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (vals[k] != 0.0) {
        m_.col_indices_.push_back(cols[k]);
        m_.values_.push_back(vals[k]);
      }
    }
    m_.row_offsets_[++row_] = m_.nnz();
  }

  SparseMatrix finish() {
    while (row_ < m_.n_rows()) m_.row_offsets_[++row_] = m_.nnz();
    return std::move(m_);
  }

 private:
  SparseMatrix m_;
  index_t row_;
};

/// y = M x with row-major, ascending-column sequential reduction.
inline DenseVector matvec(const SparseMatrix& m, const DenseVector& x) {
  if (m.n_cols() != static_cast<index_t>(x.size())) {
    throw InputError("matvec: dimension mismatch (" +
                     std::to_string(m.n_cols()) + " cols vs vector of " +
                     std::to_string(x.size()) + ")");
  }
  DenseVector y(static_cast<std::size_t>(m.n_rows()), 0.0);
  const auto& offs = m.row_offsets();
  const auto& cols = m.col_indices();
  const auto& vals = m.values();
  for (index_t i = 0; i < m.n_rows(); ++i) {
    double acc = 0.0;
    for (index_t p = offs[i]; p < offs[i + 1]; ++p) {
      acc += vals[p] * x[static_cast<std::size_t>(cols[p])];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

/// v[i] = M[i,i] (zero where absent).
inline DenseVector extract_diagonal(const SparseMatrix& m) {
  if (m.n_rows() != m.n_cols()) {
    throw InputError("extract_diagonal: matrix is not square");
  }
  DenseVector d(static_cast<std::size_t>(m.n_rows()), 0.0);
  const auto& offs = m.row_offsets();
  const auto& cols = m.col_indices();
  const auto& vals = m.values();
  for (index_t i = 0; i < m.n_rows(); ++i) {
    for (index_t p = offs[i]; p < offs[i + 1]; ++p) {
      if (cols[p] == i) {
        d[static_cast<std::size_t>(i)] = vals[p];
        break;
      }
      if (cols[p] > i) break;
    }
  }
  return d;
}

namespace detail {

/// Scatter-accumulator workspace for row-streamed sparse products.
struct RowAccumulator {
  explicit RowAccumulator(index_t n)
      : value(static_cast<std::size_t>(n), 0.0),
        present(static_cast<std::size_t>(n), 0) {}

  void add(index_t j, double v) {
    if (!present[static_cast<std::size_t>(j)]) {
      present[static_cast<std::size_t>(j)] = 1;
      touched.push_back(j);
      value[static_cast<std::size_t>(j)] = v;
    } else {
      value[static_cast<std::size_t>(j)] += v;
    }
  }

  void reset() {
    for (index_t j : touched) {
      value[static_cast<std::size_t>(j)] = 0.0;
      present[static_cast<std::size_t>(j)] = 0;
    }
    touched.clear();
  }

  std::vector<double> value;
  std::vector<char> present;
  std::vector<index_t> touched;
};

/// Y = drop_small(Wt_rows * X * W, tau) where Wt_rows is W-transpose in
/// row-major form. T = Wt*X is never materialized: row a of Y depends only
/// on row a of T, so rows are streamed with O(n) scratch. Accumulation
/// order per row is fixed (ascending indices), hence deterministic.
inline SparseMatrix sandwich_pretransposed(const SparseMatrix& wt,
                                           const SparseMatrix& x,
                                           const SparseMatrix& w, double tau) {
  const index_t n = w.n_rows();
  SparseBuilder out(n, n);
  RowAccumulator mid(n);
  RowAccumulator res(n);
  std::vector<index_t> out_cols;
  std::vector<double> out_vals;

  const auto& wt_offs = wt.row_offsets();
  const auto& wt_cols = wt.col_indices();
  const auto& wt_vals = wt.values();
  const auto& x_offs = x.row_offsets();
  const auto& x_cols = x.col_indices();
  const auto& x_vals = x.values();
  const auto& w_offs = w.row_offsets();
  const auto& w_cols = w.col_indices();
  const auto& w_vals = w.values();

  for (index_t a = 0; a < n; ++a) {
    // row a of T = (row a of Wt) * X
    for (index_t p = wt_offs[a]; p < wt_offs[a + 1]; ++p) {
      const index_t i = wt_cols[p];
      const double wv = wt_vals[p];
      for (index_t q = x_offs[i]; q < x_offs[i + 1]; ++q) {
        mid.add(x_cols[q], wv * x_vals[q]);
      }
    }
    std::sort(mid.touched.begin(), mid.touched.end());
    // row a of Y = (row a of T) * W
    for (index_t j : mid.touched) {
      const double tv = mid.value[static_cast<std::size_t>(j)];
      for (index_t q = w_offs[j]; q < w_offs[j + 1]; ++q) {
        res.add(w_cols[q], tv * w_vals[q]);
      }
    }
    std::sort(res.touched.begin(), res.touched.end());
    out_cols.clear();
    out_vals.clear();
    for (index_t b : res.touched) {
      const double v = res.value[static_cast<std::size_t>(b)];
      if (std::abs(v) >= tau && v != 0.0) {  // |v| < tau drops, |v| == tau kept
        out_cols.push_back(b);
        out_vals.push_back(v);
      }
    }
    out.append_row(a, out_cols, out_vals);
    mid.reset();
    res.reset();
  }
  return out.finish();
}

}  // namespace detail

/// Y = drop_small(W^T X W, tau): entries with |value| < tau are removed
/// from storage. Computed as T = W^T X followed by T W, row-streamed.
inline SparseMatrix transpose_sandwich(const SparseMatrix& w,
                                       const SparseMatrix& x, double tau) {
  if (w.n_rows() != w.n_cols() || x.n_rows() != x.n_cols() ||
      w.n_rows() != x.n_rows()) {
    throw InputError("transpose_sandwich: operands must be square of equal size");
  }
  if (tau < 0.0) throw InputError("transpose_sandwich: negative threshold");
  return detail::sandwich_pretransposed(w.transpose(), x, w, tau);
}

/// C = A + B, deterministic two-way row merge.
inline SparseMatrix sparse_add(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols()) {
    throw InputError("sparse_add: dimension mismatch");
  }
  SparseBuilder out(a.n_rows(), a.n_cols());
  std::vector<index_t> cols;
  std::vector<double> vals;
  for (index_t i = 0; i < a.n_rows(); ++i) {
    cols.clear();
    vals.clear();
    index_t p = a.row_offsets()[i], pe = a.row_offsets()[i + 1];
    index_t q = b.row_offsets()[i], qe = b.row_offsets()[i + 1];
    while (p < pe || q < qe) {
      index_t ca = p < pe ? a.col_indices()[p] : a.n_cols();
      index_t cb = q < qe ? b.col_indices()[q] : a.n_cols();
      if (ca < cb) {
        cols.push_back(ca);
        vals.push_back(a.values()[p++]);
      } else if (cb < ca) {
        cols.push_back(cb);
        vals.push_back(b.values()[q++]);
      } else {
        cols.push_back(ca);
        vals.push_back(a.values()[p++] + b.values()[q++]);
      }
    }
    out.append_row(i, cols, vals);
  }
  return out.finish();
}

/// Copy of `m` with the diagonal overwritten by `value` (entries inserted
/// where absent).
inline SparseMatrix with_unit_diagonal(const SparseMatrix& m, double value) {
  if (m.n_rows() != m.n_cols()) throw InputError("matrix is not square");
  SparseBuilder out(m.n_rows(), m.n_cols());
  std::vector<index_t> cols;
  std::vector<double> vals;
  for (index_t i = 0; i < m.n_rows(); ++i) {
    cols.clear();
    vals.clear();
    bool placed = false;
    for (index_t p = m.row_offsets()[i]; p < m.row_offsets()[i + 1]; ++p) {
      const index_t j = m.col_indices()[p];
      if (!placed && j >= i) {
        cols.push_back(i);
        vals.push_back(value);
        placed = true;
        if (j == i) continue;
      }
      cols.push_back(j);
      vals.push_back(m.values()[p]);
    }
    if (!placed) {
      cols.push_back(i);
      vals.push_back(value);
    }
    out.append_row(i, cols, vals);
  }
  return out.finish();
}

}  // namespace idesim
