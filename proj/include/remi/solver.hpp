#pragma once

#include <cmath>
#include <vector>

#include "remi/parallel.hpp"
#include "remi/types.hpp"

namespace remi {

/// One quadratic-plus-l1 objective
///
///     min_b  b' G b - 2 b' c + lambda |b|_1
///
/// with G block-diagonal. The same form covers the covariance objective
/// (G = reference covariance, c = marginal inner products), the
/// summary-statistics objective (G = S^-1 R S^-1, c = S^-2 beta_m), and the
/// individual-level Lasso (G = X'X/n, c = X'y/n) up to an additive constant.
struct QuadraticProblem {
  BlockMatrixSet gram;
  VectorXd linear;
  VectorXd scale;  // diagonal of gram, cached

  Index p() const { return linear.size(); }
};

inline ValidationReport validate(const QuadraticProblem& prob) {
  ValidationReport rep = validate(prob.gram);
  if (prob.linear.size() != prob.gram.p() || prob.scale.size() != prob.gram.p())
    rep.fail("linear/scale length does not match gram");
  const VectorXd diag = prob.gram.diagonal();
  for (Index j = 0; j < prob.scale.size() && j < diag.size(); ++j) {
    if (!(prob.scale[j] > 0.0)) {
      std::ostringstream os;
      os << "scale not positive at " << j;
      rep.fail(os.str());
    }
    if (std::abs(prob.scale[j] - diag[j]) >
        1e-12 * std::max(1.0, std::abs(diag[j]))) {
      std::ostringstream os;
      os << "scale does not match gram diagonal at " << j;
      rep.fail(os.str());
    }
  }
  return rep;
}

struct SolverConfig {
  double tol = 1e-5;     // relative l-inf change per sweep
  int max_sweeps = 1000;  // per grid point
  int D = 100;            // path length
  double tau = 0.05;      // path floor ratio
#ifdef NDEBUG
  bool verify_monotone = false;
#else
  bool verify_monotone = true;  // assert the objective never increases
#endif
};

/// Proximal operator of gamma * | . |.
inline double soft_threshold(double z, double gamma) {
  const double mag = std::abs(z) - gamma;
  if (mag <= 0.0) return 0.0;
  return z > 0.0 ? mag : -mag;
}

/// Covariance-form update for coordinate j given the other coefficients:
/// eta_j = c_j - sum_{k != j} beta_k G_jk over j's block, then
/// S(eta_j, lambda/2) / G_jj.
inline double coordinate_update_c(Index j, const VectorXd& beta,
                                  const QuadraticProblem& prob, double lambda) {
  const auto& part = prob.gram.partition;
  double eta = prob.linear[j];
  for (std::size_t b = 0; b < part.count(); ++b) {
    const auto r = part.blocks[b];
    if (j < r.start || j >= r.end) continue;
    const MatrixXd& g = prob.gram.blocks[b];
    const Index lj = j - r.start;
    for (Index lk = 0; lk < r.size(); ++lk) {
      if (lk == lj) continue;
      eta -= beta[r.start + lk] * g(lj, lk);
    }
    break;
  }
  return soft_threshold(eta, lambda / 2.0) / prob.scale[j];
}

/// Summary-statistics update for coordinate j, exactly as the correlation
/// form is written: eta_j = beta_m_j/s_j^2 - (1/s_j) sum_{k != j} beta_k
/// r_jk / s_k, then S(eta_j, lambda/2) * s_j^2. Cross-block terms are zero
/// because the correlation set is block-diagonal.
inline double coordinate_update_r(Index j, const VectorXd& beta,
                                  const SummaryStats& summary,
                                  const BlockMatrixSet& corr, double lambda) {
  const auto& part = corr.partition;
  const double sj = std::sqrt(summary.s2[j]);
  double eta = summary.beta_m[j] / summary.s2[j];
  for (std::size_t b = 0; b < part.count(); ++b) {
    const auto r = part.blocks[b];
    if (j < r.start || j >= r.end) continue;
    const MatrixXd& g = corr.blocks[b];
    const Index lj = j - r.start;
    double acc = 0.0;
    for (Index lk = 0; lk < r.size(); ++lk) {
      if (lk == lj) continue;
      const Index k = r.start + lk;
      acc += beta[k] * g(lj, lk) / std::sqrt(summary.s2[k]);
    }
    eta -= acc / sj;
    break;
  }
  return soft_threshold(eta, lambda / 2.0) * summary.s2[j];
}

/// Smallest penalty at which the all-zero vector is optimal:
/// 2 max_j |c_j| (KKT at zero). The absolute value matters when every
/// marginal effect is negative.
inline double lambda_max(const QuadraticProblem& prob) {
  const double m = prob.linear.cwiseAbs().maxCoeff();
  if (m == 0.0)
    throw Error(ErrorCode::DegenerateProblem, "lambda_max: all linear terms are zero");
  return 2.0 * m;
}

inline double lambda_max(const SummaryStats& summary) {
  double m = 0.0;
  for (Index j = 0; j < summary.size(); ++j)
    m = std::max(m, std::abs(summary.beta_m[j]) / summary.s2[j]);
  if (m == 0.0)
    throw Error(ErrorCode::DegenerateProblem, "lambda_max: all marginal effects are zero");
  return 2.0 * m;
}

/// Geometric grid of D points from lambda_max down to tau * lambda_max.
/// Endpoints are assigned exactly; interior points are equally spaced in
/// logarithm.
inline VectorXd lambda_grid(double lmax, double tau, int D) {
  if (!(lmax > 0.0))
    throw Error(ErrorCode::InvalidArgument, "lambda_grid: lambda_max must be positive");
  if (D < 1) throw Error(ErrorCode::InvalidArgument, "lambda_grid: D must be >= 1");
  if (D == 1) return VectorXd::Constant(1, lmax);
  if (!(tau > 0.0 && tau < 1.0))
    throw Error(ErrorCode::InvalidArgument, "lambda_grid: tau outside (0,1)");
  VectorXd grid(D);
  const double step = std::log(tau) / static_cast<double>(D - 1);
  grid[0] = lmax;
  for (int i = 1; i + 1 < D; ++i) grid[i] = lmax * std::exp(step * i);
  grid[D - 1] = tau * lmax;
  return grid;
}

/// Subgradient optimality residual. For nonzero coordinates the stationarity
/// residual |2(Gb)_j - 2c_j + lambda sign(b_j)|, for zero coordinates the
/// excess max(0, |2(Gb)_j - 2c_j| - lambda).
struct KktReport {
  double max_violation = 0.0;
  Index worst_index = -1;
  bool pass = true;
};

inline KktReport kkt_check(const QuadraticProblem& prob, const SparseCoefs& beta,
                           double lambda, double tol) {
  const VectorXd dense = beta.dense();
  const VectorXd grad = 2.0 * (prob.gram.multiply(dense) - prob.linear);
  KktReport rep;
  for (Index j = 0; j < prob.p(); ++j) {
    double v;
    if (dense[j] != 0.0) {
      v = std::abs(grad[j] + lambda * (dense[j] > 0.0 ? 1.0 : -1.0));
    } else {
      v = std::max(0.0, std::abs(grad[j]) - lambda);
    }
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_index = j;
    }
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

/// Smooth part of the objective, b' G b - 2 b' c.
inline double objective_smooth(const QuadraticProblem& prob, const VectorXd& beta) {
  return beta.dot(prob.gram.multiply(beta)) - 2.0 * beta.dot(prob.linear);
}

namespace detail {

/// Path solve restricted to one block. Blocks are separable, so each runs
/// the full grid independently; per-block convergence with the local scale
/// implies the global stopping rule.
struct BlockPathResult {
  // per grid point: local nonzeros, objective contribution, convergence
  std::vector<std::vector<std::pair<Index, double>>> nz;
  std::vector<double> objective;
  std::vector<char> converged;
};

inline BlockPathResult fit_block_path(const MatrixXd& gram, const VectorXd& linear,
                                      const VectorXd& grid, const SolverConfig& cfg) {
  const Index m = linear.size();
  const Index D = grid.size();
  BlockPathResult out;
  out.nz.resize(D);
  out.objective.assign(D, 0.0);
  out.converged.assign(D, 1);

  VectorXd beta = VectorXd::Zero(m);
  VectorXd q = VectorXd::Zero(m);  // gram * beta, kept incrementally
  std::vector<Index> active;
  active.reserve(m);

  const auto sweep = [&](const std::vector<Index>* subset, double gamma,
                         double& max_change, double& max_abs) {
    max_change = 0.0;
    max_abs = 0.0;
    const Index count = subset ? static_cast<Index>(subset->size()) : m;
    for (Index t = 0; t < count; ++t) {
      const Index j = subset ? (*subset)[t] : t;
      const double gjj = gram(j, j);
      const double eta = linear[j] - q[j] + gjj * beta[j];
      const double next = soft_threshold(eta, gamma) / gjj;
      const double delta = next - beta[j];
      if (delta != 0.0) {
        beta[j] = next;
        q.noalias() += delta * gram.col(j);
      }
      max_change = std::max(max_change, std::abs(delta));
      max_abs = std::max(max_abs, std::abs(next));
    }
  };

  const auto objective_now = [&] { return beta.dot(q) - 2.0 * beta.dot(linear); };

  for (Index l = 0; l < D; ++l) {
    const double gamma = grid[l] / 2.0;
    int sweeps = 0;
    bool converged = false;
    double prev_penalized =
        cfg.verify_monotone ? objective_now() + grid[l] * beta.lpNorm<1>() : 0.0;
    double max_change = 0.0, max_abs = 0.0;

    const auto run_sweep = [&](const std::vector<Index>* subset) {
      sweep(subset, gamma, max_change, max_abs);
      ++sweeps;
      if (cfg.verify_monotone) {
        const double penalized = objective_now() + grid[l] * beta.lpNorm<1>();
        if (penalized > prev_penalized + 1e-9 * (1.0 + std::abs(prev_penalized)))
          throw Error(ErrorCode::InvalidArgument,
                      "coordinate sweep increased the penalized objective");
        prev_penalized = penalized;
      }
      return max_change < cfg.tol * std::max(1.0, max_abs);
    };

    // two full sweeps, then iterate the active set with a full re-scan
    // before declaring convergence
    if (run_sweep(nullptr)) {
      converged = true;
    } else if (sweeps < cfg.max_sweeps && run_sweep(nullptr)) {
      converged = true;
    } else {
      while (sweeps < cfg.max_sweeps) {
        active.clear();
        for (Index j = 0; j < m; ++j)
          if (beta[j] != 0.0) active.push_back(j);
        bool active_done = active.empty();
        while (!active_done && sweeps < cfg.max_sweeps)
          active_done = run_sweep(&active);
        if (sweeps >= cfg.max_sweeps) break;
        if (run_sweep(nullptr)) {
          converged = true;
          break;
        }
      }
    }

    out.converged[l] = converged ? 1 : 0;
    out.objective[l] = objective_now();
    auto& nz = out.nz[l];
    for (Index j = 0; j < m; ++j)
      if (beta[j] != 0.0) nz.emplace_back(j, beta[j]);
  }
  return out;
}

}  // namespace detail

/// Warm-started coordinate descent along a strictly decreasing grid.
/// Each grid point starts from the previous solution (zero at the first
/// point); the recorded objective is the smooth part only. Non-convergence
/// at a point is flagged, never thrown, and the fit continues.
inline CoefficientPath fit_path(const QuadraticProblem& prob, const SolverConfig& cfg,
                                const VectorXd& grid) {
  if (grid.size() < 1)
    throw Error(ErrorCode::InvalidArgument, "fit_path: empty grid");
  for (Index l = 1; l < grid.size(); ++l)
    if (grid[l] >= grid[l - 1])
      throw Error(ErrorCode::InvalidArgument, "fit_path: grid not strictly decreasing");

  const auto& part = prob.gram.partition;
  const Index D = grid.size();
  std::vector<detail::BlockPathResult> results(part.count());
  parallel_for(part.count(), [&](std::size_t b) {
    const auto r = part.blocks[b];
    results[b] = detail::fit_block_path(prob.gram.blocks[b],
                                        prob.linear.segment(r.start, r.size()),
                                        grid, cfg);
  });

  CoefficientPath path;
  path.lambdas = grid;
  path.coefs.resize(D);
  path.objective = VectorXd::Zero(D);
  path.df.assign(D, 0);
  path.converged.assign(D, 1);
  for (Index l = 0; l < D; ++l) {
    SparseCoefs& c = path.coefs[l];
    c.p = prob.p();
    for (std::size_t b = 0; b < part.count(); ++b) {
      const auto r = part.blocks[b];
      for (const auto& [lj, v] : results[b].nz[l]) {
        c.index.push_back(r.start + lj);
        c.value.push_back(v);
      }
      path.objective[l] += results[b].objective[l];
      if (!results[b].converged[l]) path.converged[l] = 0;
    }
    path.df[l] = c.nnz();
  }
  return path;
}

inline QuadraticProblem make_covariance_problem(BlockMatrixSet gram,
                                                const MarginalVector& marginal) {
  if (gram.p() != marginal.values.size())
    throw Error(ErrorCode::DimensionMismatch, "covariance problem: gram/marginal sizes differ");
  QuadraticProblem prob;
  prob.scale = gram.diagonal();
  prob.gram = std::move(gram);
  prob.linear = marginal.values;
  return prob;
}

/// Rewrites the summary objective as a covariance-form problem:
/// G = S^-1 R S^-1 (diagonal forced to exactly 1/s^2), c = S^-2 beta_m.
inline QuadraticProblem make_summary_problem(const SummaryStats& summary,
                                             const BlockMatrixSet& corr) {
  if (corr.kind != MatrixKind::Correlation)
    throw Error(ErrorCode::InvalidArgument, "summary problem: need a correlation set");
  if (corr.p() != summary.size())
    throw Error(ErrorCode::DimensionMismatch, "summary problem: correlation/summary sizes differ");
  QuadraticProblem prob;
  prob.gram.partition = corr.partition;
  prob.gram.kind = MatrixKind::Covariance;
  prob.gram.kappa = corr.kappa;
  prob.gram.blocks.resize(corr.blocks.size());
  const VectorXd inv_s = summary.s2.cwiseSqrt().cwiseInverse();
  const VectorXd inv_s2 = summary.s2.cwiseInverse();
  for (std::size_t b = 0; b < corr.blocks.size(); ++b) {
    const auto r = corr.partition.blocks[b];
    const VectorXd d = inv_s.segment(r.start, r.size());
    const MatrixXd& src = corr.blocks[b];
    MatrixXd& dst = prob.gram.blocks[b];
    dst.resize(r.size(), r.size());
    for (Index i = 0; i < r.size(); ++i) {
      dst(i, i) = inv_s2[r.start + i];
      for (Index j = 0; j < i; ++j) {
        const double v = src(i, j) * (d[i] * d[j]);
        dst(i, j) = v;
        dst(j, i) = v;
      }
    }
  }
  prob.linear = inv_s2.cwiseProduct(summary.beta_m);
  prob.scale = inv_s2;
  return prob;
}

/// Individual-level Lasso as a single-block problem: G = X'X/n, c = X'y/n.
/// X is expected standardized and y centered.
inline QuadraticProblem make_lasso_problem(const MatrixXd& X, const VectorXd& y) {
  if (X.rows() != y.size())
    throw Error(ErrorCode::DimensionMismatch, "lasso problem: X rows != y length");
  const double n = static_cast<double>(X.rows());
  QuadraticProblem prob;
  prob.gram.partition = BlockPartition::single(X.cols());
  prob.gram.kind = MatrixKind::Covariance;
  prob.gram.kappa = 1.0;
  MatrixXd g = MatrixXd::Zero(X.cols(), X.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose(), 1.0 / n);
  g.triangularView<Eigen::Upper>() = g.transpose();
  prob.gram.blocks.push_back(std::move(g));
  prob.linear = X.transpose() * y / n;
  prob.scale = prob.gram.blocks[0].diagonal();
  return prob;
}

inline CoefficientPath fit_path(const QuadraticProblem& prob, const SolverConfig& cfg) {
  return fit_path(prob, cfg, lambda_grid(lambda_max(prob), cfg.tau, cfg.D));
}

inline CoefficientPath fit_path(const SummaryStats& summary, const BlockMatrixSet& corr,
                                const SolverConfig& cfg, const VectorXd& grid) {
  return fit_path(make_summary_problem(summary, corr), cfg, grid);
}

}  // namespace remi
