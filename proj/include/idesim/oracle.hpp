#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "idesim/error.hpp"
#include "idesim/graph.hpp"
#include "idesim/sparse.hpp"

namespace idesim {

/// Row-major dense matrix for desk-scale ground truth.
class DenseMatrix {
 public:
  DenseMatrix() : n_rows_(0), n_cols_(0) {}
  DenseMatrix(index_t n_rows, index_t n_cols)
      : n_rows_(n_rows), n_cols_(n_cols),
        values_(static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols), 0.0) {}

  static DenseMatrix identity(index_t n) {
    DenseMatrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  index_t n_rows() const noexcept { return n_rows_; }
  index_t n_cols() const noexcept { return n_cols_; }

  double& operator()(index_t i, index_t j) {
    return values_[static_cast<std::size_t>(i) * n_cols_ + j];
  }
  double operator()(index_t i, index_t j) const {
    return values_[static_cast<std::size_t>(i) * n_cols_ + j];
  }

  const std::vector<double>& values() const noexcept { return values_; }

  DenseVector column(index_t j) const {
    DenseVector col(static_cast<std::size_t>(n_rows_));
    for (index_t i = 0; i < n_rows_; ++i) col[static_cast<std::size_t>(i)] = (*this)(i, j);
    return col;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Max absolute column sum.
  double norm_1() const {
    double best = 0.0;
    for (index_t j = 0; j < n_cols_; ++j) {
      double s = 0.0;
      for (index_t i = 0; i < n_rows_; ++i) s += std::abs((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }

 private:
  index_t n_rows_;
  index_t n_cols_;
  std::vector<double> values_;
};

/// Dense LU with partial pivoting; factors once, then solves by columns.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix a)
      : lu_(std::move(a)), perm_(static_cast<std::size_t>(lu_.n_rows())) {
    const index_t n = lu_.n_rows();
    if (n != lu_.n_cols()) throw InputError("LU requires a square matrix");
    for (index_t i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
    for (index_t k = 0; k < n; ++k) {
      index_t piv = k;
      double best = std::abs(lu_(k, k));
      for (index_t i = k + 1; i < n; ++i) {
        const double v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-300) {
        throw NumericalError("LU: matrix is numerically singular at pivot " +
                             std::to_string(k));
      }
      if (piv != k) {
        for (index_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(piv)]);
      }
      const double inv = 1.0 / lu_(k, k);
      for (index_t i = k + 1; i < n; ++i) {
        const double f = lu_(i, k) * inv;
        lu_(i, k) = f;
        if (f != 0.0) {
          for (index_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
      }
    }
  }

  DenseVector solve(const DenseVector& b) const {
    const index_t n = lu_.n_rows();
    DenseVector x(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
    }
    for (index_t i = 1; i < n; ++i) {
      double acc = x[static_cast<std::size_t>(i)];
      for (index_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] = acc;
    }
    for (index_t i = n - 1; i >= 0; --i) {
      double acc = x[static_cast<std::size_t>(i)];
      for (index_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] = acc / lu_(i, i);
    }
    return x;
  }

 private:
  DenseMatrix lu_;
  std::vector<index_t> perm_;
};

namespace detail {

/// U = At_rows * S where At_rows holds A-transpose row-major (row i of U is
/// a combination of rows of S). O(nnz(A) * n).
inline DenseMatrix sparse_dense_left(const SparseMatrix& at_rows, const DenseMatrix& s) {
  const index_t n = s.n_rows();
  DenseMatrix u(at_rows.n_rows(), n);
  for (index_t i = 0; i < at_rows.n_rows(); ++i) {
    for (index_t p = at_rows.row_offsets()[i]; p < at_rows.row_offsets()[i + 1]; ++p) {
      const index_t k = at_rows.col_indices()[p];
      const double v = at_rows.values()[p];
      for (index_t j = 0; j < n; ++j) u(i, j) += v * s(k, j);
    }
  }
  return u;
}

/// V = U * A with sparse A; row i of V is accumulated from row i of U.
inline DenseMatrix dense_sparse_right(const DenseMatrix& u, const SparseMatrix& a) {
  DenseMatrix v(u.n_rows(), a.n_cols());
  for (index_t i = 0; i < u.n_rows(); ++i) {
    for (index_t k = 0; k < u.n_cols(); ++k) {
      const double uv = u(i, k);
      if (uv == 0.0) continue;
      for (index_t p = a.row_offsets()[k]; p < a.row_offsets()[k + 1]; ++p) {
        v(i, a.col_indices()[p]) += uv * a.values()[p];
      }
    }
  }
  return v;
}

}  // namespace detail

inline constexpr index_t kOracleDimensionCap = 2048;
inline constexpr index_t kOperatorMatrixCap = 64;

/// Ground-truth SimRank by the dense fixed-point iteration
///   S_0 = I,  S_{k+1} = c A^T S_k A - c diag(A^T S_k A) + I,
/// which contracts at rate c.
inline DenseMatrix fixed_point_simrank(const SimGraph& g, index_t iterations,
                                       index_t cap = kOracleDimensionCap) {
  if (g.n() > cap) {
    throw ResourceError("fixed_point_simrank: n=" + std::to_string(g.n()) +
                            " exceeds cap " + std::to_string(cap),
                        g.n());
  }
  if (iterations < 1) throw InputError("iterations must be >= 1");
  const index_t n = g.n();
  const SparseMatrix at = g.A().transpose();
  DenseMatrix s = DenseMatrix::identity(n);
  const double c = g.c();
  for (index_t it = 0; it < iterations; ++it) {
    DenseMatrix u = detail::sparse_dense_left(at, s);      // A^T S
    DenseMatrix v = detail::dense_sparse_right(u, g.A());  // (A^T S) A
    for (index_t i = 0; i < n; ++i) {
      for (index_t j = 0; j < n; ++j) {
        const double base = c * v(i, j);
        s(i, j) = (i == j) ? 1.0 : base;  // c*v - c*diag(v) + I
      }
    }
  }
  return s;
}

/// Explicit n x n matrix of the linear operator mapping a candidate
/// diagonal d to diag of the Lyapunov solution: built from the n^2 x n^2
/// system (I - W^T (x) W^T) y = p_j, column-major vec convention, solved
/// by dense LU column by column.
inline DenseMatrix exact_F_matrix(const SimGraph& g, index_t cap = kOperatorMatrixCap) {
  const index_t n = g.n();
  if (n > cap) {
    throw ResourceError("exact_F_matrix: n=" + std::to_string(n) +
                            " exceeds cap " + std::to_string(cap),
                        n);
  }
  const index_t n2 = n * n;
  // M = I - Z, Z[j*n+i, l*n+k] = W[l,j] * W[k,i]  (Z = W^T (x) W^T)
  DenseMatrix m = DenseMatrix::identity(n2);
  const SparseMatrix& w = g.W();
  for (index_t l = 0; l < n; ++l) {
    for (index_t p = w.row_offsets()[l]; p < w.row_offsets()[l + 1]; ++p) {
      const index_t j = w.col_indices()[p];
      const double wlj = w.values()[p];
      for (index_t k = 0; k < n; ++k) {
        for (index_t q = w.row_offsets()[k]; q < w.row_offsets()[k + 1]; ++q) {
          const index_t i = w.col_indices()[q];
          const double wki = w.values()[q];
          m(j * n + i, l * n + k) -= wlj * wki;
        }
      }
    }
  }
  LuFactorization lu(std::move(m));
  DenseMatrix f(n, n);
  DenseVector rhs(static_cast<std::size_t>(n2), 0.0);
  for (index_t j = 0; j < n; ++j) {
    rhs[static_cast<std::size_t>(j * n + j)] = 1.0;
    DenseVector y = lu.solve(rhs);
    rhs[static_cast<std::size_t>(j * n + j)] = 0.0;
    for (index_t i = 0; i < n; ++i) {
      f(i, j) = y[static_cast<std::size_t>(i * n + i)];
    }
  }
  return f;
}

/// kappa_1 = ||F||_1 * ||F^{-1}||_1 with the inverse from dense LU.
inline double condition_number_1(const DenseMatrix& f) {
  const index_t n = f.n_rows();
  if (n != f.n_cols()) throw InputError("condition_number_1: non-square input");
  LuFactorization lu(f);
  DenseVector e(static_cast<std::size_t>(n), 0.0);
  double inv_norm = 0.0;
  for (index_t j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    DenseVector col = lu.solve(e);
    e[static_cast<std::size_t>(j)] = 0.0;
    double s = 0.0;
    for (double v : col) s += std::abs(v);
    inv_norm = std::max(inv_norm, s);
  }
  return f.norm_1() * inv_norm;
}

}  // namespace idesim
