#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "idesim/diagonal.hpp"
#include "idesim/error.hpp"
#include "idesim/graph.hpp"
#include "idesim/oracle.hpp"
#include "idesim/queries.hpp"
#include "idesim/random.hpp"

namespace idesim {

/// NDCG over all candidates: items ranked by approximate score descending
/// (ties by ascending index), gains 2^rel - 1 taken from the true scores,
/// normalized by the ideal ordering's DCG. Returns 1 when the ideal DCG
/// is zero (all-zero relevance).
inline double ndcg_at_n(const DenseVector& true_scores,
                        const DenseVector& approx_scores) {
  if (true_scores.size() != approx_scores.size()) {
    throw InputError("ndcg_at_n: length mismatch");
  }
  const std::size_t n = true_scores.size();
  std::vector<index_t> order(n);
  std::iota(order.begin(), order.end(), index_t{0});
  auto rank_by = [&](const DenseVector& key) {
    std::vector<index_t> idx = order;
    std::sort(idx.begin(), idx.end(), [&](index_t a, index_t b) {
      const double ka = key[static_cast<std::size_t>(a)];
      const double kb = key[static_cast<std::size_t>(b)];
      return ka != kb ? ka > kb : a < b;
    });
    return idx;
  };
  auto dcg_of = [&](const std::vector<index_t>& idx) {
    double s = 0.0;
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      const double rel = true_scores[static_cast<std::size_t>(idx[pos])];
      s += (std::exp2(rel) - 1.0) / std::log2(static_cast<double>(pos) + 2.0);
    }
    return s;
  };
  const double ideal = dcg_of(rank_by(true_scores));
  if (ideal == 0.0) return 1.0;
  return dcg_of(rank_by(approx_scores)) / ideal;
}

/// Accuracy report for single-source queries against the dense oracle.
struct NdcgReport {
  std::string graph_name;
  index_t n = 0;
  index_t q = 0;
  double mean_one_minus_ndcg = 0.0;
  std::vector<double> per_query;          // NDCG per query, sampling order
  std::vector<index_t> query_vertices;
  double c = 0.0;
  index_t K = 0;
  double tau = 0.0;
  DiagonalEstimate solve;                 // diagnostics of the one solve
};

/// Solves the diagonal once, then compares single_source output against
/// oracle columns for q seeded query vertices (without replacement; all
/// vertices when q >= n). The query vertex itself is excluded from the
/// ranking, both sides score it 1 by construction. Query-side series
/// evaluation runs unthresholded; cfg.tau governs the solver only.
inline NdcgReport run_ndcg_experiment(const SimGraph& g, index_t q,
                                      const SolverConfig& cfg,
                                      std::uint64_t seed,
                                      std::string graph_name = "",
                                      index_t oracle_iterations = 200,
                                      index_t oracle_cap = kOracleDimensionCap) {
  if (q < 1) throw InputError("run_ndcg_experiment: q must be >= 1");
  const DenseMatrix truth = fixed_point_simrank(g, oracle_iterations, oracle_cap);

  NdcgReport report;
  report.graph_name = std::move(graph_name);
  report.n = g.n();
  report.c = cfg.c;
  report.K = cfg.K;
  report.tau = cfg.tau;
  report.solve = solve_diagonal(g, cfg);

  Rng rng(seed);
  report.query_vertices = rng.sample_without_replacement(g.n(), q);
  report.q = static_cast<index_t>(report.query_vertices.size());

  double acc = 0.0;
  for (index_t a : report.query_vertices) {
    const QueryResult approx = single_source(g, report.solve.d, a, cfg.K, 0.0);
    const DenseVector truth_col = truth.column(a);
    DenseVector t(static_cast<std::size_t>(g.n()) - 1);
    DenseVector s(static_cast<std::size_t>(g.n()) - 1);
    std::size_t w = 0;
    for (index_t i = 0; i < g.n(); ++i) {
      if (i == a) continue;
      t[w] = truth_col[static_cast<std::size_t>(i)];
      s[w] = approx.scores[static_cast<std::size_t>(i)];
      ++w;
    }
    const double ndcg = ndcg_at_n(t, s);
    report.per_query.push_back(ndcg);
    acc += 1.0 - ndcg;
  }
  report.mean_one_minus_ndcg = acc / static_cast<double>(report.per_query.size());
  return report;
}

/// One timing/memory sample of the synthetic scaling experiment.
struct ScalingRow {
  index_t n = 0;
  index_t nnz_per_column = 0;
  double solve_time_seconds = 0.0;
  index_t peak_nnz_proxy = 0;    // max stored nnz across series iterates
  index_t gmres_iterations = 0;
  bool converged = false;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;  // sorted by n ascending
};

/// Random directed graph with exactly `indegree` distinct in-neighbors per
/// vertex (uniform without replacement, no self-loops).
inline EdgeList random_fixed_indegree_edges(index_t n, index_t indegree,
                                            std::uint64_t seed) {
  if (indegree >= n) {
    throw InputError("random graph: in-degree must be smaller than n");
  }
  Rng rng(seed);
  EdgeList list;
  list.n = n;
  list.edges.reserve(static_cast<std::size_t>(n) * indegree);
  for (index_t j = 0; j < n; ++j) {
    // sample `indegree` distinct sources from [0, n) \ {j}
    std::vector<index_t> picked = rng.sample_without_replacement(n - 1, indegree);
    for (index_t s : picked) {
      const index_t src = s >= j ? s + 1 : s;
      list.edges.emplace_back(src, j);
    }
  }
  detail::finalize_edges(list.edges);
  return list;
}

/// Random directed graph with roughly `avg_out_degree * n` edges; may
/// contain self-loops and dangling vertices.
inline EdgeList random_graph_edges(index_t n, double avg_out_degree,
                                   std::uint64_t seed) {
  Rng rng(seed);
  EdgeList list;
  list.n = n;
  const index_t target = static_cast<index_t>(
      std::llround(avg_out_degree * static_cast<double>(n)));
  for (index_t e = 0; e < target; ++e) {
    const index_t src = static_cast<index_t>(rng.below(static_cast<std::uint64_t>(n)));
    const index_t dst = static_cast<index_t>(rng.below(static_cast<std::uint64_t>(n)));
    list.edges.emplace_back(src, dst);
  }
  detail::finalize_edges(list.edges);
  return list;
}

/// Generates one graph per size, times solve_diagonal on each, and records
/// the peak iterate nnz (deterministic memory proxy) and iteration counts.
/// Timing runs sequentially by construction.
inline ScalingReport run_scaling_experiment(const std::vector<index_t>& sizes,
                                            index_t nnz_per_col,
                                            const SolverConfig& cfg,
                                            std::uint64_t seed) {
  if (sizes.empty()) throw InputError("run_scaling_experiment: empty size list");
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw InputError("run_scaling_experiment: sizes must be ascending");
  }
  ScalingReport report;
  for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
    const index_t n = sizes[idx];
    const EdgeList edges =
        random_fixed_indegree_edges(n, nnz_per_col, seed + idx);
    const SimGraph g = build_graph(edges, cfg.c);
    const auto t0 = std::chrono::steady_clock::now();
    const DiagonalEstimate est = solve_diagonal(g, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    ScalingRow row;
    row.n = n;
    row.nnz_per_column = nnz_per_col;
    row.solve_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    row.peak_nnz_proxy = est.peak_iterate_nnz;
    row.gmres_iterations = static_cast<index_t>(est.residual_history.size());
    row.converged = est.converged;
    report.rows.push_back(row);
  }
  return report;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InputError("loglog_slope: need two equal-length samples");
  }
  const std::size_t n = xs.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

namespace detail {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// CSV rows "query_vertex,ndcg", sampling order, full precision.
inline void write_ndcg_csv(std::ostream& out, const NdcgReport& report) {
  out << "query_vertex,ndcg\n";
  for (std::size_t i = 0; i < report.per_query.size(); ++i) {
    out << report.query_vertices[i] << ','
        << detail::format_full(report.per_query[i]) << '\n';
  }
}

/// CSV rows, one per size; the timing column is wall-clock and therefore
/// not reproducible, everything else is seed-deterministic.
inline void write_scaling_csv(std::ostream& out, const ScalingReport& report) {
  out << "n,nnz_per_column,solve_time_seconds,peak_nnz_proxy,gmres_iterations\n";
  for (const ScalingRow& row : report.rows) {
    out << row.n << ',' << row.nnz_per_column << ','
        << detail::format_full(row.solve_time_seconds) << ','
        << row.peak_nnz_proxy << ',' << row.gmres_iterations << '\n';
  }
}

/// CSV rows "vertex,score" sorted by score descending, ties by ascending
/// vertex index.
inline void write_scores_csv(std::ostream& out, const DenseVector& scores) {
  std::vector<index_t> order(scores.size());
  std::iota(order.begin(), order.end(), index_t{0});
  std::sort(order.begin(), order.end(), [&](index_t a, index_t b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    return sa != sb ? sa > sb : a < b;
  });
  out << "vertex,score\n";
  for (index_t v : order) {
    out << v << ',' << detail::format_full(scores[static_cast<std::size_t>(v)])
        << '\n';
  }
}

}  // namespace idesim
