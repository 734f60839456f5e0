#pragma once

#include <string>
#include <vector>

#include "idesim/idesim.hpp"

namespace testhelpers {

inline std::string fixture_path(const std::string& name) {
  return std::string(IDESIM_FIXTURE_DIR) + "/" + name;
}

/// Random sparse matrix with entries in [-1, 1), about `fill` fraction set.
inline idesim::SparseMatrix random_sparse(idesim::index_t rows,
                                          idesim::index_t cols, double fill,
                                          idesim::Rng& rng) {
  std::vector<idesim::Triplet> trips;
  for (idesim::index_t i = 0; i < rows; ++i) {
    for (idesim::index_t j = 0; j < cols; ++j) {
      if (rng.real01() < fill) {
        trips.push_back({i, j, rng.real01() * 2.0 - 1.0});
      }
    }
  }
  return idesim::SparseMatrix::from_triplets(rows, cols, trips);
}

inline idesim::DenseVector random_vector(idesim::index_t n, idesim::Rng& rng) {
  idesim::DenseVector v(static_cast<std::size_t>(n));
  for (double& x : v) x = rng.real01() * 2.0 - 1.0;
  return v;
}

/// Dense reference for the sparse kernels.
inline std::vector<std::vector<double>> to_dense(const idesim::SparseMatrix& m) {
  std::vector<std::vector<double>> d(
      static_cast<std::size_t>(m.n_rows()),
      std::vector<double>(static_cast<std::size_t>(m.n_cols()), 0.0));
  for (idesim::index_t i = 0; i < m.n_rows(); ++i) {
    for (idesim::index_t p = m.row_offsets()[i]; p < m.row_offsets()[i + 1]; ++p) {
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(m.col_indices()[p])] =
          m.values()[p];
    }
  }
  return d;
}

/// Line graph a -> b -> c ... plus the spec's recurring tiny graphs.
inline idesim::SimGraph two_cycle(double c = 0.6) {
  idesim::EdgeList list;
  list.n = 2;
  list.edges = {{0, 1}, {1, 0}};
  return idesim::build_graph(list, c);
}

inline idesim::SimGraph out_star(double c = 0.6) {
  idesim::EdgeList list;
  list.n = 3;
  list.edges = {{0, 1}, {0, 2}};
  return idesim::build_graph(list, c);
}

inline idesim::SimGraph self_loop(double c = 0.6) {
  idesim::EdgeList list;
  list.n = 1;
  list.edges = {{0, 0}};
  return idesim::build_graph(list, c);
}

inline idesim::SimGraph random_graph(idesim::index_t n, double avg_deg,
                                     std::uint64_t seed, double c = 0.6) {
  idesim::EdgeList list = idesim::random_graph_edges(n, avg_deg, seed);
  return idesim::build_graph(list, c);
}

}  // namespace testhelpers
