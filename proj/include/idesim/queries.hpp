#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "idesim/error.hpp"
#include "idesim/graph.hpp"
#include "idesim/sparse.hpp"

namespace idesim {

/// SimRank scores from a truncated-series evaluation, with the truncation
/// parameters that produced them and the a-priori error bound
/// c^K + 10 K tau.
struct QueryResult {
  enum class Kind { single_pair, single_source, full_matrix };

  Kind kind = Kind::single_pair;
  double scalar = 0.0;      // single_pair
  DenseVector scores;       // single_source
  SparseMatrix matrix;      // full_matrix
  index_t K_used = 0;
  double tau_used = 0.0;
  double error_bound = 0.0;
};

namespace detail {

inline double series_error_bound(double c, index_t K, double tau) {
  return std::pow(c, static_cast<double>(K)) + 10.0 * tau * static_cast<double>(K);
}

inline void threshold_vector(DenseVector& v, double tau) {
  if (tau <= 0.0) return;
  for (double& x : v) {
    if (std::abs(x) < tau) x = 0.0;
  }
}

/// Forward walk u_k = W u_{k-1} from u_0 = e_a, each step thresholded.
inline std::vector<DenseVector> forward_walk(const SimGraph& g, index_t a,
                                             index_t K, double tau) {
  std::vector<DenseVector> u(static_cast<std::size_t>(K) + 1);
  u[0].assign(static_cast<std::size_t>(g.n()), 0.0);
  u[0][static_cast<std::size_t>(a)] = 1.0;
  for (index_t k = 1; k <= K; ++k) {
    u[static_cast<std::size_t>(k)] = matvec(g.W(), u[static_cast<std::size_t>(k) - 1]);
    threshold_vector(u[static_cast<std::size_t>(k)], tau);
  }
  return u;
}

}  // namespace detail

/// Scores between vertex `a` and every vertex: s_a ~= S_K e_a evaluated by
/// the forward/backward two-pass recursion, O(K) sparse matvecs. The entry
/// at `a` is pinned to exactly 1.
inline QueryResult single_source(const SimGraph& g, const DenseVector& d,
                                 index_t a, index_t K, double tau) {
  if (a < 0 || a >= g.n()) {
    throw InputError("single_source: vertex " + std::to_string(a) + " out of range");
  }
  if (static_cast<index_t>(d.size()) != g.n()) {
    throw InputError("single_source: diagonal length does not match graph");
  }
  if (K < 1) throw InputError("single_source: K must be >= 1");
  const std::vector<DenseVector> u = detail::forward_walk(g, a, K, tau);
  DenseVector t(static_cast<std::size_t>(g.n()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = d[i] * u[static_cast<std::size_t>(K)][i];
  }
  for (index_t k = K - 1; k >= 0; --k) {
    t = matvec(g.Wt(), t);
    const DenseVector& uk = u[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += d[i] * uk[i];
  }
  t[static_cast<std::size_t>(a)] = 1.0;  // s(a,a) = 1 by definition

  QueryResult res;
  res.kind = QueryResult::Kind::single_source;
  res.scores = std::move(t);
  res.K_used = K;
  res.tau_used = tau;
  res.error_bound = detail::series_error_bound(g.c(), K, tau);
  return res;
}

/// s(a,b) via two forward walks and per-step diagonal-weighted dot
/// products; equals single_source(a).scores[b] at tau = 0.
inline QueryResult single_pair(const SimGraph& g, const DenseVector& d,
                               index_t a, index_t b, index_t K, double tau) {
  if (a < 0 || a >= g.n() || b < 0 || b >= g.n()) {
    throw InputError("single_pair: vertex out of range");
  }
  if (static_cast<index_t>(d.size()) != g.n()) {
    throw InputError("single_pair: diagonal length does not match graph");
  }
  QueryResult res;
  res.kind = QueryResult::Kind::single_pair;
  res.K_used = K;
  res.tau_used = tau;
  res.error_bound = detail::series_error_bound(g.c(), K, tau);
  if (a == b) {
    res.scalar = 1.0;
    res.error_bound = 0.0;
    return res;
  }
  if (K < 1) throw InputError("single_pair: K must be >= 1");
  DenseVector ua(static_cast<std::size_t>(g.n()), 0.0);
  DenseVector ub(static_cast<std::size_t>(g.n()), 0.0);
  ua[static_cast<std::size_t>(a)] = 1.0;
  ub[static_cast<std::size_t>(b)] = 1.0;
  double score = 0.0;
  for (index_t k = 0; k <= K; ++k) {
    if (k > 0) {
      ua = matvec(g.W(), ua);
      ub = matvec(g.W(), ub);
      detail::threshold_vector(ua, tau);
      detail::threshold_vector(ub, tau);
    }
    double term = 0.0;
    for (std::size_t i = 0; i < ua.size(); ++i) term += d[i] * ua[i] * ub[i];
    score += term;
  }
  res.scalar = score;
  return res;
}

/// Thresholded sparse approximation of the whole SimRank matrix:
/// sum_{k=0..K} of the sandwiched diagonal terms with per-term
/// thresholding, diagonal then overwritten to exactly 1.
inline QueryResult full_sparse_simrank(const SimGraph& g, const DenseVector& d,
                                       index_t K, double tau,
                                       index_t nnz_cap = 50'000'000) {
  if (static_cast<index_t>(d.size()) != g.n()) {
    throw InputError("full_sparse_simrank: diagonal length does not match graph");
  }
  if (K < 1) throw InputError("full_sparse_simrank: K must be >= 1");
  SparseMatrix term = SparseMatrix::diagonal_matrix(d);
  SparseMatrix acc = term;
  for (index_t k = 1; k <= K; ++k) {
    term = detail::sandwich_pretransposed(g.Wt(), term, g.W(), tau);
    if (term.nnz() == 0) break;
    acc = sparse_add(acc, term);
    if (acc.nnz() > nnz_cap) {
      throw ResourceError("full_sparse_simrank: accumulated nnz " +
                              std::to_string(acc.nnz()) + " exceeds cap " +
                              std::to_string(nnz_cap),
                          acc.nnz());
    }
  }
  QueryResult res;
  res.kind = QueryResult::Kind::full_matrix;
  res.matrix = with_unit_diagonal(acc, 1.0);
  res.K_used = K;
  res.tau_used = tau;
  res.error_bound = detail::series_error_bound(g.c(), K, tau);
  return res;
}

}  // namespace idesim
