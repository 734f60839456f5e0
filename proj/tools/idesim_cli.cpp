// Command-line front end: graph ingestion, diagonal estimation, SimRank
// queries, accuracy evaluation and scaling benchmarks with reproducible,
// locale-independent outputs.
//
// Exit codes: 0 success, 1 configuration/argument error, 2 parse failure,
// 3 solver did not converge (estimate still written), 4 graph/diagonal
// size mismatch, 5 resource cap exceeded.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "idesim/idesim.hpp"

namespace {

using nlohmann::json;
using namespace idesim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitSizeMismatch = 4;
constexpr int kExitResource = 5;

struct GraphOptions {
  std::string input;
  std::string format = "auto";  // auto|edgelist|matrixmarket
  int base = 0;
  bool symmetrize = false;
};

void add_graph_options(CLI::App* cmd, GraphOptions& opt) {
  cmd->add_option("-i,--input", opt.input, "input graph file")->required();
  cmd->add_option("--format", opt.format,
                  "input format: edgelist, matrixmarket or auto (by extension)")
      ->check(CLI::IsMember({"auto", "edgelist", "matrixmarket"}));
  cmd->add_option("--base", opt.base, "edge-list index base (0 or 1)")
      ->check(CLI::IsMember({0, 1}));
  cmd->add_flag("--symmetrize", opt.symmetrize,
                "add the reverse of every edge (edge-list input)");
}

struct SolverOptions {
  double c = 0.6;
  index_t K = 50;
  double tau = 1e-4;
  double eps = 1e-8;
  index_t restart = 30;
  index_t max_restarts = 20;
  bool adaptive_tau = false;
};

void add_solver_options(CLI::App* cmd, SolverOptions& opt) {
  cmd->add_option("-c,--decay", opt.c, "decay constant in (0,1)");
  cmd->add_option("-K,--series-length", opt.K, "truncation length of the series");
  cmd->add_option("--tau", opt.tau, "iterate threshold (>= 0)");
  cmd->add_option("--eps", opt.eps, "solver residual tolerance");
  cmd->add_option("--restart", opt.restart, "Krylov dimension per cycle");
  cmd->add_option("--max-restarts", opt.max_restarts, "restart budget");
  cmd->add_flag("--adaptive-tau", opt.adaptive_tau,
                "per-iteration threshold schedule from the inexactness rule");
}

SolverConfig to_config(const SolverOptions& opt) {
  SolverConfig cfg;
  cfg.c = opt.c;
  cfg.K = opt.K;
  cfg.tau = opt.tau;
  cfg.eps = opt.eps;
  cfg.restart = opt.restart;
  cfg.max_restarts = opt.max_restarts;
  cfg.adaptive_tau = opt.adaptive_tau;
  return cfg;
}

EdgeList load_edges(const GraphOptions& opt) {
  std::ifstream in(opt.input);
  if (!in) throw ConfigError("cannot open input file " + opt.input);
  std::string fmt = opt.format;
  if (fmt == "auto") {
    fmt = opt.input.size() >= 4 &&
                  opt.input.compare(opt.input.size() - 4, 4, ".mtx") == 0
              ? "matrixmarket"
              : "edgelist";
  }
  if (fmt == "matrixmarket") return parse_matrix_market(in);
  return parse_edge_list(in, {.base = opt.base, .symmetrize = opt.symmetrize});
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << body;
}

json solver_json(const SolverOptions& opt, const DiagonalEstimate& est,
                 double seconds) {
  return json{{"c", opt.c},
              {"K", opt.K},
              {"tau", opt.tau},
              {"eps", opt.eps},
              {"restart", opt.restart},
              {"max_restarts", opt.max_restarts},
              {"adaptive_tau", opt.adaptive_tau},
              {"converged", est.converged},
              {"residual_norm", est.residual_norm},
              {"iterations", est.residual_history.size()},
              {"matvec_count", est.matvec_count},
              {"restarts_used", est.restarts_used},
              {"peak_iterate_nnz", est.peak_iterate_nnz},
              {"wall_time_seconds", seconds}};
}

std::string trace_csv(const DiagonalEstimate& est) {
  std::ostringstream out;
  out << "iteration,residual,tau\n";
  for (std::size_t i = 0; i < est.residual_history.size(); ++i) {
    out << (i + 1) << ',' << full_precision(est.residual_history[i]) << ','
        << full_precision(est.iteration_tau[i]) << '\n';
  }
  return out.str();
}

int cmd_estimate(const GraphOptions& gopt, const SolverOptions& sopt,
                 const std::string& out_path, const std::string& json_path,
                 const std::string& trace_path, bool verbose) {
  const EdgeList edges = load_edges(gopt);
  const SimGraph graph = build_graph(edges, sopt.c);
  const SolverConfig cfg = to_config(sopt);

  DiagonalEstimate est;
  const auto t0 = std::chrono::steady_clock::now();
  bool converged = true;
  try {
    est = solve_diagonal(graph, cfg);
    converged = est.converged;
  } catch (const ConvergenceError& e) {
    // budget exhausted without plateau acceptance: nothing usable to write
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  save_diagonal(out_path, est.d);
  if (!json_path.empty()) {
    json j = solver_json(sopt, est, seconds);
    j["n"] = graph.n();
    j["nnz"] = graph.edge_count();
    j["dangling"] = graph.dangling().size();
    write_text_file(json_path, j.dump(2) + "\n");
  }
  if (!trace_path.empty()) write_text_file(trace_path, trace_csv(est));
  if (verbose) {
    for (std::size_t i = 0; i < est.residual_history.size(); ++i) {
      std::cerr << "iter " << (i + 1) << " residual "
                << est.residual_history[i] << " tau " << est.iteration_tau[i]
                << "\n";
    }
  }
  std::cout << "n=" << graph.n() << " residual=" << full_precision(est.residual_norm)
            << " iterations=" << est.residual_history.size()
            << (converged ? " converged" : " NOT-converged") << "\n";
  return converged ? kExitOk : kExitNoConvergence;
}

int cmd_query(const GraphOptions& gopt, const std::string& diag_path,
              double c, index_t K, double tau,
              const std::vector<index_t>& pair, index_t source,
              bool have_source, const std::string& format,
              const std::string& out_path) {
  const SimGraph graph = build_graph(load_edges(gopt), c);
  DenseVector d = load_diagonal(diag_path);
  if (static_cast<index_t>(d.size()) != graph.n()) {
    std::cerr << "error: diagonal file holds " << d.size()
              << " entries but the graph has " << graph.n() << " vertices\n";
    return kExitSizeMismatch;
  }

  if (!pair.empty()) {
    const QueryResult r = single_pair(graph, d, pair[0], pair[1], K, tau);
    std::printf("%.15g\n", r.scalar);
    return kExitOk;
  }
  if (!have_source) throw ConfigError("query needs --source or --pair");

  const QueryResult r = single_source(graph, d, source, K, tau);
  std::string body;
  if (format == "json") {
    json j{{"vertex", source},
           {"K", K},
           {"tau", tau},
           {"error_bound", r.error_bound},
           {"scores", r.scores}};
    body = j.dump(2) + "\n";
  } else {
    std::ostringstream out;
    write_scores_csv(out, r.scores);
    body = out.str();
  }
  if (out_path.empty()) {
    std::cout << body;
  } else {
    write_text_file(out_path, body);
  }
  return kExitOk;
}

int cmd_full(const GraphOptions& gopt, const std::string& diag_path, double c,
             index_t K, double tau, index_t nnz_cap,
             const std::string& out_path) {
  const SimGraph graph = build_graph(load_edges(gopt), c);
  DenseVector d = load_diagonal(diag_path);
  if (static_cast<index_t>(d.size()) != graph.n()) {
    std::cerr << "error: diagonal file holds " << d.size()
              << " entries but the graph has " << graph.n() << " vertices\n";
    return kExitSizeMismatch;
  }
  const QueryResult r = full_sparse_simrank(graph, d, K, tau, nnz_cap);
  std::ostringstream out;
  write_matrix_market(out, r.matrix);
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    write_text_file(out_path, out.str());
  }
  return kExitOk;
}

int cmd_ndcg(const GraphOptions& gopt, const SolverOptions& sopt, index_t q,
             std::uint64_t seed, const std::string& csv_path,
             const std::string& json_path) {
  const SimGraph graph = build_graph(load_edges(gopt), sopt.c);
  const NdcgReport report =
      run_ndcg_experiment(graph, q, to_config(sopt), seed, gopt.input);
  std::ostringstream csv;
  write_ndcg_csv(csv, report);
  if (csv_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(csv_path, csv.str());
  }
  if (!json_path.empty()) {
    json j{{"graph", report.graph_name},
           {"n", report.n},
           {"q", report.q},
           {"c", report.c},
           {"K", report.K},
           {"tau", report.tau},
           {"seed", seed},
           {"mean_one_minus_ndcg", report.mean_one_minus_ndcg},
           {"solver",
            {{"converged", report.solve.converged},
             {"residual_norm", report.solve.residual_norm},
             {"iterations", report.solve.residual_history.size()}}}};
    write_text_file(json_path, j.dump(2) + "\n");
  }
  std::cout << "mean_1_minus_ndcg=" << full_precision(report.mean_one_minus_ndcg)
            << "\n";
  return kExitOk;
}

int cmd_bench(const std::vector<index_t>& sizes, index_t nnz_per_col,
              const SolverOptions& sopt, std::uint64_t seed,
              const std::string& csv_path, const std::string& json_path) {
  const ScalingReport report =
      run_scaling_experiment(sizes, nnz_per_col, to_config(sopt), seed);
  std::ostringstream csv;
  write_scaling_csv(csv, report);
  if (csv_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(csv_path, csv.str());
  }
  if (!json_path.empty()) {
    json rows = json::array();
    for (const ScalingRow& r : report.rows) {
      rows.push_back({{"n", r.n},
                      {"nnz_per_column", r.nnz_per_column},
                      {"solve_time_seconds", r.solve_time_seconds},
                      {"peak_nnz_proxy", r.peak_nnz_proxy},
                      {"gmres_iterations", r.gmres_iterations},
                      {"converged", r.converged}});
    }
    json j{{"seed", seed}, {"rows", rows}};
    write_text_file(json_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_oracle(const GraphOptions& gopt, double c, index_t iterations,
               index_t cap, const std::string& out_path) {
  const SimGraph graph = build_graph(load_edges(gopt), c);
  const DenseMatrix s = fixed_point_simrank(graph, iterations, cap);
  std::ostringstream out;
  for (index_t i = 0; i < s.n_rows(); ++i) {
    for (index_t j = 0; j < s.n_cols(); ++j) {
      if (j) out << ',';
      out << full_precision(s(i, j));
    }
    out << '\n';
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    write_text_file(out_path, out.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "SimRank scores on directed graphs via iterative diagonal estimation"};
  app.require_subcommand(1);

  // estimate
  GraphOptions est_graph;
  SolverOptions est_solver;
  std::string est_out, est_json, est_trace;
  bool est_verbose = false;
  CLI::App* estimate =
      app.add_subcommand("estimate", "solve for the SimRank diagonal");
  add_graph_options(estimate, est_graph);
  add_solver_options(estimate, est_solver);
  estimate->add_option("-o,--out", est_out, "output diagonal file (binary)")
      ->required();
  estimate->add_option("--json", est_json, "JSON run summary path");
  estimate->add_option("--trace", est_trace, "convergence trace CSV path");
  estimate->add_flag("-v,--verbose", est_verbose, "print residual trace");

  // query
  GraphOptions q_graph;
  std::string q_diag, q_format = "csv", q_out;
  double q_c = 0.6, q_tau = 0.0;
  index_t q_K = 50;
  index_t q_source = 0;
  std::vector<index_t> q_pair;
  CLI::App* query =
      app.add_subcommand("query", "single-source or single-pair scores");
  add_graph_options(query, q_graph);
  query->add_option("--diag", q_diag, "diagonal file from estimate")->required();
  query->add_option("-c,--decay", q_c, "decay constant used at estimate time");
  query->add_option("-K,--series-length", q_K, "series truncation length");
  query->add_option("--tau", q_tau, "forward-pass threshold (default exact)");
  CLI::Option* src_opt =
      query->add_option("--source", q_source, "single-source query vertex");
  query->add_option("--pair", q_pair, "single-pair query \"a b\"")
      ->expected(2)
      ->excludes(src_opt);
  query->add_option("--output-format", q_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  query->add_option("-o,--out", q_out, "score file (stdout when omitted)");

  // full
  GraphOptions f_graph;
  std::string f_diag, f_out;
  double f_c = 0.6, f_tau = 1e-4;
  index_t f_K = 50, f_cap = 50'000'000;
  CLI::App* full =
      app.add_subcommand("full", "materialize the sparse SimRank matrix");
  add_graph_options(full, f_graph);
  full->add_option("--diag", f_diag, "diagonal file from estimate")->required();
  full->add_option("-c,--decay", f_c, "decay constant used at estimate time");
  full->add_option("-K,--series-length", f_K, "series truncation length");
  full->add_option("--tau", f_tau, "per-term threshold");
  full->add_option("--nnz-cap", f_cap, "abort when the accumulator exceeds this");
  full->add_option("-o,--out", f_out, "Matrix Market output (stdout when omitted)");

  // ndcg
  GraphOptions n_graph;
  SolverOptions n_solver;
  n_solver.tau = 1e-3;
  n_solver.adaptive_tau = true;
  index_t n_q = 100;
  std::uint64_t n_seed = 1;
  std::string n_csv, n_json;
  CLI::App* ndcg = app.add_subcommand(
      "ndcg", "single-source ranking accuracy against the dense oracle");
  add_graph_options(ndcg, n_graph);
  add_solver_options(ndcg, n_solver);
  ndcg->add_option("-q,--queries", n_q, "number of random query vertices");
  ndcg->add_option("--seed", n_seed, "query sampling seed");
  ndcg->add_option("--out-csv", n_csv, "per-query CSV path");
  ndcg->add_option("--out-json", n_json, "JSON summary path");

  // bench
  SolverOptions b_solver;
  std::vector<index_t> b_sizes{1000, 2000, 4000, 8000};
  index_t b_nnz = 5;
  std::uint64_t b_seed = 1;
  std::string b_csv, b_json;
  CLI::App* bench =
      app.add_subcommand("bench", "timing/memory scaling on synthetic graphs");
  add_solver_options(bench, b_solver);
  bench->add_option("--sizes", b_sizes, "graph sizes, ascending");
  bench->add_option("--nnz-per-col", b_nnz, "in-degree of every vertex");
  bench->add_option("--seed", b_seed, "graph generation seed");
  bench->add_option("--out-csv", b_csv, "per-size CSV path");
  bench->add_option("--out-json", b_json, "JSON summary path");

  // oracle
  GraphOptions o_graph;
  double o_c = 0.6;
  index_t o_iters = 200, o_cap = 2048;
  std::string o_out;
  CLI::App* oracle =
      app.add_subcommand("oracle", "dense fixed-point SimRank (desk scale)");
  add_graph_options(oracle, o_graph);
  oracle->add_option("-c,--decay", o_c, "decay constant in (0,1)");
  oracle->add_option("--iterations", o_iters, "fixed-point iterations");
  oracle->add_option("--cap", o_cap, "maximum n for the dense computation");
  oracle->add_option("-o,--out", o_out, "dense CSV output (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (estimate->parsed()) {
      return cmd_estimate(est_graph, est_solver, est_out, est_json, est_trace,
                          est_verbose);
    }
    if (query->parsed()) {
      return cmd_query(q_graph, q_diag, q_c, q_K, q_tau, q_pair, q_source,
                       src_opt->count() > 0, q_format, q_out);
    }
    if (full->parsed()) {
      return cmd_full(f_graph, f_diag, f_c, f_K, f_tau, f_cap, f_out);
    }
    if (ndcg->parsed()) {
      return cmd_ndcg(n_graph, n_solver, n_q, n_seed, n_csv, n_json);
    }
    if (bench->parsed()) {
      return cmd_bench(b_sizes, b_nnz, b_solver, b_seed, b_csv, b_json);
    }
    if (oracle->parsed()) {
      return cmd_oracle(o_graph, o_c, o_iters, o_cap, o_out);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
