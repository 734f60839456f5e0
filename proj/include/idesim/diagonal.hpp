#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "idesim/error.hpp"
#include "idesim/graph.hpp"
#include "idesim/sparse.hpp"

namespace idesim {

/// Parameters for the diagonal solve. `tau` is the thresholding level of
/// the fast matvec; in adaptive mode it acts as the upper clamp of the
/// per-iteration schedule.
struct SolverConfig {
  double c = 0.6;
  index_t K = 50;             // series truncation length
  double tau = 1e-4;          // iterate threshold (tau_max when adaptive)
  double eps = 1e-8;          // GMRES residual tolerance
  index_t restart = 30;       // Krylov dimension per cycle
  index_t max_restarts = 20;
  bool adaptive_tau = false;  // engage the inexactness schedule
  double tau_floor = 1e-16;
  // Accept a plateau: stop once a full cycle fails to improve the explicit
  // residual below half of the previous cycle's. Without it a
  // threshold-limited solve burns the whole restart budget.
  bool stagnation_stop = true;

  void validate() const {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("c must lie in (0,1)");
    if (K < 1) throw ConfigError("K must be >= 1");
    if (tau < 0.0) throw ConfigError("tau must be >= 0");
    if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
    if (restart < 1) throw ConfigError("restart must be >= 1");
    if (max_restarts < 1) throw ConfigError("max_restarts must be >= 1");
  }
};

/// Solution of the diagonal system plus solver diagnostics.
struct DiagonalEstimate {
  DenseVector d;
  double residual_norm = 0.0;               // 2-norm of b - F(d) at final tau
  std::vector<double> residual_history;     // per-iteration GMRES estimate
  std::vector<double> iteration_tau;        // tau used at each iteration's matvec
  index_t matvec_count = 0;
  std::vector<double> tau_schedule;         // tau used at every matvec
  std::vector<index_t> cycle_starts;        // residual_history index per cycle
  bool converged = false;
  index_t restarts_used = 0;
  index_t peak_iterate_nnz = 0;             // max nnz over all series iterates
};

namespace detail {

struct MatvecStats {
  index_t peak_nnz = 0;
};

}  // namespace detail

/// Truncated-series application of the diagonal operator:
///   y = x + sum_{k=1..K} diag(X_k),  X_0 = diag(x), X_k = W^T X_{k-1} W,
/// with every iterate thresholded at tau. The approximation error obeys
///   ||y - y_exact||_inf <= tau ((1+c)^K - 1)/c + c^K ||x||_inf.
inline DenseVector apply_F_approx(const SimGraph& g, const DenseVector& x,
                                  index_t K, double tau,
                                  detail::MatvecStats* stats = nullptr) {
  if (static_cast<index_t>(x.size()) != g.n()) {
    throw InputError("apply_F_approx: vector length does not match graph");
  }
  if (K < 1) throw InputError("apply_F_approx: K must be >= 1");
  if (tau < 0.0) throw InputError("apply_F_approx: negative threshold");
  DenseVector y = x;
  SparseMatrix iterate = SparseMatrix::diagonal_matrix(x);
  for (index_t k = 1; k <= K; ++k) {
    iterate = detail::sandwich_pretransposed(g.Wt(), iterate, g.W(), tau);
    if (stats) stats->peak_nnz = std::max(stats->peak_nnz, iterate.nnz());
    if (iterate.nnz() == 0) break;  // all later terms vanish
    const DenseVector diag = extract_diagonal(iterate);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += diag[i];
  }
  return y;
}

/// Per-matvec threshold from the inexactness rule: the matvec error bound
/// tau ((1+c)^K - 1)/c + c^K is kept below sigma_min * eps / (m * residual),
/// clamped to [tau_floor, tau_max]. With the schedule disabled the base
/// threshold passes through unchanged.
inline double tau_schedule_next(double current_residual, double eps,
                                double base_tau, double sigma_min_estimate,
                                index_t m, double c, index_t K,
                                bool adaptive = true, double tau_floor = 1e-16) {
  if (!adaptive) return base_tau;
  if (!(current_residual > 0.0)) {
    throw InputError("tau_schedule_next: residual must be positive");
  }
  const double allowed =
      sigma_min_estimate * eps / (static_cast<double>(m) * current_residual);
  const double tail = std::pow(c, static_cast<double>(K));
  const double budget = allowed - tail;
  double tau = 0.0;
  if (budget > 0.0) {
    tau = budget * c / (std::pow(1.0 + c, static_cast<double>(K)) - 1.0);
  }
  return std::clamp(tau, tau_floor, base_tau);
}

namespace detail {

/// Smallest singular value of an upper-triangular k x k matrix (packed
/// column-major in `r`, leading dimension ld) via inverse power iteration
/// on R^T R. Deterministic start, fixed iteration count.
inline double smallest_singular_value_upper(const std::vector<double>& r,
                                            index_t ld, index_t k) {
  if (k == 0) return 0.0;
  auto at = [&](index_t i, index_t j) -> double {
    return r[static_cast<std::size_t>(j) * ld + i];
  };
  std::vector<double> z(static_cast<std::size_t>(k),
                        1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<double> u(static_cast<std::size_t>(k));
  double sigma = 0.0;
  for (int iter = 0; iter < 12; ++iter) {
    // forward solve R^T u = z
    for (index_t i = 0; i < k; ++i) {
      double acc = z[static_cast<std::size_t>(i)];
      for (index_t j = 0; j < i; ++j) acc -= at(j, i) * u[static_cast<std::size_t>(j)];
      const double piv = at(i, i);
      if (std::abs(piv) < 1e-300) return 0.0;
      u[static_cast<std::size_t>(i)] = acc / piv;
    }
    // back solve R w = u (reuse u as w)
    for (index_t i = k - 1; i >= 0; --i) {
      double acc = u[static_cast<std::size_t>(i)];
      for (index_t j = i + 1; j < k; ++j) acc -= at(i, j) * u[static_cast<std::size_t>(j)];
      u[static_cast<std::size_t>(i)] = acc / at(i, i);
    }
    double norm = 0.0;
    for (double v : u) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    sigma = 1.0 / std::sqrt(norm);
    for (index_t i = 0; i < k; ++i) z[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] / norm;
  }
  return sigma;
}

inline double dot(const DenseVector& a, const DenseVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

/// Solves F(d) = 1 for the SimRank diagonal correction with restarted
/// GMRES over the truncated-series matvec. Arnoldi uses one-pass modified
/// Gram-Schmidt with conditional re-orthogonalization; the Hessenberg
/// least-squares problem is maintained by plane rotations. Convergence is
/// declared on the explicitly recomputed residual b - F(x) at the current
/// threshold.
inline DiagonalEstimate solve_diagonal(const SimGraph& g, const SolverConfig& cfg) {
  cfg.validate();
  const index_t n = g.n();
  const index_t m = cfg.restart;
  // graph's own decay constant governs the operator; cfg.c is the build
  // parameter and may not be trusted here
  const double c = g.c();
  const double sigma_init = (1.0 - c) * (1.0 - c) / (2.0 * (1.0 + c));

  DiagonalEstimate est;
  // exact solution whenever S = I (any permutation graph), and always
  // inside the solution sandwich
  est.d.assign(static_cast<std::size_t>(n), 1.0 - c);
  if (n == 0) {
    est.converged = true;
    return est;
  }

  const DenseVector b(static_cast<std::size_t>(n), 1.0);
  const double bnorm = detail::norm2(b);

  double sigma_min = sigma_init;
  double current_residual = bnorm;

  auto matvec = [&](const DenseVector& v) {
    const double tau = tau_schedule_next(current_residual, cfg.eps, cfg.tau,
                                         sigma_min, m, c, cfg.K,
                                         cfg.adaptive_tau, cfg.tau_floor);
    detail::MatvecStats stats;
    DenseVector y = apply_F_approx(g, v, cfg.K, tau, &stats);
    est.peak_iterate_nnz = std::max(est.peak_iterate_nnz, stats.peak_nnz);
    est.tau_schedule.push_back(tau);
    est.matvec_count++;
    if (!all_finite(y)) {
      throw NumericalError("solve_diagonal: non-finite values in matvec result");
    }
    return y;
  };

  // Krylov workspace: basis, rotated Hessenberg (column-major, ld = m+1),
  // Givens cosines/sines, rotated rhs.
  std::vector<DenseVector> basis(static_cast<std::size_t>(m) + 1);
  std::vector<double> hess(static_cast<std::size_t>(m + 1) * m, 0.0);
  std::vector<double> cs(static_cast<std::size_t>(m), 0.0);
  std::vector<double> sn(static_cast<std::size_t>(m), 0.0);
  std::vector<double> gvec(static_cast<std::size_t>(m) + 1, 0.0);

  double prev_cycle_residual = -1.0;
  DenseVector best_d = est.d;
  double best_residual = std::numeric_limits<double>::infinity();

  for (index_t cycle = 0; cycle < cfg.max_restarts; ++cycle) {
    DenseVector fx = matvec(est.d);
    DenseVector r(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - fx[i];
    const double rnorm = detail::norm2(r);
    est.residual_norm = rnorm;
    if (rnorm < best_residual) {
      best_residual = rnorm;
      best_d = est.d;
    }
    if (rnorm <= cfg.eps) {
      est.converged = true;
      est.restarts_used = cycle;
      return est;
    }
    if (cfg.stagnation_stop && prev_cycle_residual >= 0.0 &&
        rnorm > 0.5 * prev_cycle_residual) {
      // threshold-limited plateau: accept the best iterate seen
      est.d = best_d;
      est.residual_norm = best_residual;
      est.restarts_used = cycle;
      return est;
    }
    prev_cycle_residual = rnorm;
    current_residual = rnorm;
    est.cycle_starts.push_back(static_cast<index_t>(est.residual_history.size()));

    basis[0] = r;
    for (auto& v : basis[0]) v /= rnorm;
    std::fill(gvec.begin(), gvec.end(), 0.0);
    gvec[0] = rnorm;
    std::fill(hess.begin(), hess.end(), 0.0);

    index_t k_used = 0;
    bool breakdown = false;
    for (index_t k = 0; k < m; ++k) {
      DenseVector w = matvec(basis[static_cast<std::size_t>(k)]);
      const double wnorm_initial = detail::norm2(w);
      double* hcol = &hess[static_cast<std::size_t>(k) * (m + 1)];
      // one-pass MGS
      for (index_t i = 0; i <= k; ++i) {
        const double hik = detail::dot(w, basis[static_cast<std::size_t>(i)]);
        hcol[i] = hik;
        const DenseVector& vi = basis[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < w.size(); ++t) w[t] -= hik * vi[t];
      }
      double wnorm = detail::norm2(w);
      if (wnorm < wnorm_initial / std::sqrt(2.0)) {
        // second pass when cancellation ate more than 1/sqrt(2) of the norm
        for (index_t i = 0; i <= k; ++i) {
          const double corr = detail::dot(w, basis[static_cast<std::size_t>(i)]);
          hcol[i] += corr;
          const DenseVector& vi = basis[static_cast<std::size_t>(i)];
          for (std::size_t t = 0; t < w.size(); ++t) w[t] -= corr * vi[t];
        }
        wnorm = detail::norm2(w);
      }
      hcol[k + 1] = wnorm;
      if (!std::isfinite(wnorm)) {
        throw NumericalError("solve_diagonal: breakdown, non-finite Arnoldi norm");
      }
      if (wnorm < 1e-14) {
        breakdown = true;  // happy breakdown: Krylov space is invariant
      } else {
        basis[static_cast<std::size_t>(k) + 1] = w;
        for (auto& v : basis[static_cast<std::size_t>(k) + 1]) v /= wnorm;
      }
      // apply accumulated rotations to the new column
      for (index_t i = 0; i < k; ++i) {
        const double t0 = cs[static_cast<std::size_t>(i)] * hcol[i] +
                          sn[static_cast<std::size_t>(i)] * hcol[i + 1];
        const double t1 = -sn[static_cast<std::size_t>(i)] * hcol[i] +
                          cs[static_cast<std::size_t>(i)] * hcol[i + 1];
        hcol[i] = t0;
        hcol[i + 1] = t1;
      }
      // new rotation zeroing the subdiagonal
      const double denom = std::hypot(hcol[k], hcol[k + 1]);
      if (denom < 1e-300) {
        cs[static_cast<std::size_t>(k)] = 1.0;
        sn[static_cast<std::size_t>(k)] = 0.0;
      } else {
        cs[static_cast<std::size_t>(k)] = hcol[k] / denom;
        sn[static_cast<std::size_t>(k)] = hcol[k + 1] / denom;
      }
      hcol[k] = cs[static_cast<std::size_t>(k)] * hcol[k] +
                sn[static_cast<std::size_t>(k)] * hcol[k + 1];
      hcol[k + 1] = 0.0;
      const double g0 = gvec[static_cast<std::size_t>(k)];
      gvec[static_cast<std::size_t>(k)] = cs[static_cast<std::size_t>(k)] * g0;
      gvec[static_cast<std::size_t>(k) + 1] = -sn[static_cast<std::size_t>(k)] * g0;

      k_used = k + 1;
      const double estimate = std::abs(gvec[static_cast<std::size_t>(k) + 1]);
      est.residual_history.push_back(estimate);
      est.iteration_tau.push_back(est.tau_schedule.back());
      current_residual = std::max(estimate, 1e-300);
      // running smallest singular value of the rotated Hessenberg
      sigma_min = std::max(
          detail::smallest_singular_value_upper(hess, m + 1, k_used), 1e-300);
      if (estimate <= cfg.eps || breakdown) break;
    }

    // back substitution on the rotated system
    std::vector<double> y(static_cast<std::size_t>(k_used), 0.0);
    for (index_t i = k_used - 1; i >= 0; --i) {
      double acc = gvec[static_cast<std::size_t>(i)];
      for (index_t j = i + 1; j < k_used; ++j) {
        acc -= hess[static_cast<std::size_t>(j) * (m + 1) + i] * y[static_cast<std::size_t>(j)];
      }
      y[static_cast<std::size_t>(i)] = acc / hess[static_cast<std::size_t>(i) * (m + 1) + i];
    }
    for (index_t j = 0; j < k_used; ++j) {
      const DenseVector& vj = basis[static_cast<std::size_t>(j)];
      const double yj = y[static_cast<std::size_t>(j)];
      for (std::size_t t = 0; t < est.d.size(); ++t) est.d[t] += yj * vj[t];
    }
    if (!all_finite(est.d)) {
      throw NumericalError("solve_diagonal: non-finite values in iterate");
    }
    est.restarts_used = cycle + 1;
  }

  // final explicit residual after the last cycle
  DenseVector fx = matvec(est.d);
  double rnorm = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double ri = b[i] - fx[i];
    rnorm += ri * ri;
  }
  est.residual_norm = std::sqrt(rnorm);
  if (est.residual_norm < best_residual) {
    best_residual = est.residual_norm;
    best_d = est.d;
  }
  if (est.residual_norm <= cfg.eps) {
    est.converged = true;
    return est;
  }
  if (cfg.stagnation_stop) {
    est.d = best_d;
    est.residual_norm = best_residual;
    return est;
  }
  throw ConvergenceError(
      "solve_diagonal: no convergence after " + std::to_string(cfg.max_restarts) +
          " restarts (residual " + std::to_string(est.residual_norm) + ")",
      est.residual_history);
}

}  // namespace idesim
