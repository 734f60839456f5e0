#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "idesim/error.hpp"
#include "idesim/sparse.hpp"

namespace idesim {

using Edge = std::pair<index_t, index_t>;

/// Deduplicated directed edge set plus the vertex count that governs it.
struct EdgeList {
  index_t n = 0;
  std::vector<Edge> edges;  // sorted by (src, dst), unique
  bool undirected_source = false;
};

struct EdgeListOptions {
  int base = 0;              // 0- or 1-based vertex indices
  bool symmetrize = false;   // add the reverse of every edge
};

namespace detail {

inline void finalize_edges(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

inline bool parse_index(const std::string& tok, index_t& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = static_cast<index_t>(std::stoll(tok, &pos));
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

}  // namespace detail

/// Parses "src dst" pairs, one per line; '#' and '%' start comment lines.
/// Duplicate edges collapse; self-loops are kept.
inline EdgeList parse_edge_list(std::istream& in, const EdgeListOptions& opt = {}) {
  EdgeList result;
  std::string line;
  long line_no = 0;
  index_t max_index = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == '%') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b)) {
      throw ParseError("malformed edge line, expected \"src dst\"", line_no);
    }
    if (ls >> extra) {
      throw ParseError("trailing tokens after \"src dst\"", line_no);
    }
    index_t src = 0, dst = 0;
    if (!detail::parse_index(a, src) || !detail::parse_index(b, dst)) {
      throw ParseError("non-integer vertex token", line_no);
    }
    src -= opt.base;
    dst -= opt.base;
    if (src < 0 || dst < 0) {
      throw ParseError("negative vertex index after base adjustment", line_no);
    }
    result.edges.emplace_back(src, dst);
    if (opt.symmetrize && src != dst) result.edges.emplace_back(dst, src);
    max_index = std::max({max_index, src, dst});
  }
  if (opt.symmetrize) result.undirected_source = true;
  result.n = max_index + 1;
  detail::finalize_edges(result.edges);
  return result;
}

/// Matrix Market coordinate reader for graph patterns. Accepts
/// pattern/real/integer fields and general/symmetric symmetry; stored
/// values are discarded (edges are unweighted), symmetric entries expand
/// to both directions, 1-based indices convert to 0-based. The size line
/// is authoritative for the vertex count.
inline EdgeList parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty stream", 1);
  std::istringstream hs(line);
  std::string banner, obj, fmt, field, symmetry;
  hs >> banner >> obj >> fmt >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    return s;
  };
  obj = lower(obj);
  fmt = lower(fmt);
  field = lower(field);
  symmetry = lower(symmetry);
  if (banner != "%%MatrixMarket" || obj != "matrix") {
    throw ParseError("not a MatrixMarket matrix header", 1);
  }
  if (fmt != "coordinate") {
    throw ParseError("unsupported MatrixMarket format \"" + fmt +
                         "\" (coordinate required)", 1);
  }
  if (field != "pattern" && field != "real" && field != "integer") {
    throw ParseError("unsupported MatrixMarket field \"" + field + "\"", 1);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("unsupported MatrixMarket symmetry \"" + symmetry + "\"", 1);
  }
  const bool has_value = field != "pattern";
  const bool symmetric = symmetry == "symmetric";

  long line_no = 1;
  index_t rows = 0, cols = 0;
  long long declared = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '%') continue;
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> declared)) {
      throw ParseError("malformed size line", line_no);
    }
    break;
  }
  if (declared < 0) throw ParseError("missing size line", line_no);
  if (rows != cols) {
    throw ParseError("adjacency matrix must be square, got " +
                         std::to_string(rows) + "x" + std::to_string(cols),
                     line_no);
  }

  EdgeList result;
  result.n = rows;
  result.undirected_source = symmetric;
  long long seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '%') continue;
    std::istringstream ls(line);
    index_t i = 0, j = 0;
    double value = 0.0;
    if (!(ls >> i >> j)) throw ParseError("malformed coordinate entry", line_no);
    if (has_value && !(ls >> value)) {
      throw ParseError("missing value in real/integer entry", line_no);
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("coordinate out of declared range", line_no);
    }
    ++seen;
    result.edges.emplace_back(i - 1, j - 1);
    if (symmetric && i != j) result.edges.emplace_back(j - 1, i - 1);
  }
  if (seen != declared) {
    throw ParseError("size line declares " + std::to_string(declared) +
                         " entries but " + std::to_string(seen) + " found",
                     line_no);
  }
  detail::finalize_edges(result.edges);
  return result;
}

/// Validated graph with its column-normalized adjacency A, the scaled
/// operator W = sqrt(c) * A, the cached transpose of W, and the list of
/// dangling vertices (empty in-neighborhood, i.e. zero columns of A).
class SimGraph {
 public:
  SimGraph() = default;

  index_t n() const noexcept { return n_; }
  double c() const noexcept { return c_; }
  const SparseMatrix& A() const noexcept { return a_; }
  const SparseMatrix& W() const noexcept { return w_; }
  const SparseMatrix& Wt() const noexcept { return wt_; }
  const std::vector<index_t>& dangling() const noexcept { return dangling_; }
  bool directed() const noexcept { return directed_; }
  index_t edge_count() const noexcept { return a_.nnz(); }

 private:
  index_t n_ = 0;
  double c_ = 0.0;
  SparseMatrix a_, w_, wt_;
  std::vector<index_t> dangling_;
  bool directed_ = true;

  friend SimGraph build_graph(const EdgeList&, double);
};

/// A[i,j] = 1/indeg(j) for each edge (i -> j); dangling columns stay zero
/// (no teleportation patch). W = sqrt(c) * A.
inline SimGraph build_graph(const EdgeList& list, double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw ConfigError("decay constant c must lie in (0,1), got " +
                      std::to_string(c));
  }
  const index_t n = list.n;
  std::vector<index_t> indeg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : list.edges) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) {
      throw InputError("edge endpoint out of range");
    }
    indeg[static_cast<std::size_t>(e.second)]++;
  }
  std::vector<Triplet> trips;
  trips.reserve(list.edges.size());
  for (const Edge& e : list.edges) {
    trips.push_back({e.first, e.second,
                     1.0 / static_cast<double>(indeg[static_cast<std::size_t>(e.second)])});
  }
  SimGraph g;
  g.n_ = n;
  g.c_ = c;
  g.directed_ = !list.undirected_source;
  g.a_ = SparseMatrix::from_triplets(n, n, std::move(trips));
  g.w_ = g.a_.scaled(std::sqrt(c));
  g.wt_ = g.w_.transpose();
  for (index_t j = 0; j < n; ++j) {
    if (indeg[static_cast<std::size_t>(j)] == 0) g.dangling_.push_back(j);
  }
  return g;
}

/// One "src dst" pair per line, 0-based; re-parsing reproduces the list.
inline void write_edge_list(std::ostream& out, const EdgeList& list) {
  for (const Edge& e : list.edges) {
    out << e.first << ' ' << e.second << '\n';
  }
}

/// Coordinate real general Matrix Market output, entries in row-major
/// order, full precision.
inline void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
  char buf[40];
  for (index_t i = 0; i < m.n_rows(); ++i) {
    for (index_t p = m.row_offsets()[i]; p < m.row_offsets()[i + 1]; ++p) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.values()[p]);
      out << (i + 1) << ' ' << (m.col_indices()[p] + 1) << ' ' << buf << '\n';
    }
  }
}

}  // namespace idesim
