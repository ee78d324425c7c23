#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>

#include "remi/refpanel.hpp"
#include "remi/rng.hpp"
#include "remi/types.hpp"

namespace remi {

/// Fixed substream tags so that regenerating one piece of a scenario never
/// perturbs the others.
enum class Substream : std::uint64_t {
  DesignInd = 1,
  NoiseInd = 2,
  Effects = 3,
  DesignSummary = 4,
  NoiseSummary = 5,
  Panel = 6,
  DesignTest = 7,
  NoiseTest = 8,
};

inline Rng substream_rng(const SimScenario& sc, Substream which) {
  return Rng(derive_seed(sc.seed, static_cast<std::uint64_t>(which)));
}

/// Rows i.i.d. Gaussian with block-diagonal AR(1) covariance
/// (cov(j,k) = rho^|j-k| within a block, zero across blocks), columns then
/// standardized. The recurrence runs column by column so draws vectorize
/// over rows.
inline MatrixXd generate_design(long n, const SimScenario& sc, Substream substream) {
  Rng rng = substream_rng(sc, substream);
  MatrixXd X(n, sc.p);
  const double carry = sc.rho;
  const double fresh = std::sqrt(1.0 - sc.rho * sc.rho);
  for (Index j = 0; j < sc.p; ++j) {
    const bool block_start = (j % sc.block_size) == 0;
    for (long i = 0; i < n; ++i) X(i, j) = rng.normal();
    if (!block_start && carry != 0.0)
      X.col(j) = carry * X.col(j - 1) + fresh * X.col(j);
  }
  const double dn = static_cast<double>(n);
  for (Index j = 0; j < sc.p; ++j) {
    const double mean = X.col(j).mean();
    X.col(j).array() -= mean;
    const double sd = std::sqrt(X.col(j).squaredNorm() / dn);
    X.col(j) /= sd;
  }
  return X;
}

/// Sparse effect vector: support of size max(1, round(alpha p)) chosen
/// uniformly without replacement, values standard normal.
inline SparseCoefs generate_effects(Index p, double alpha, Rng rng) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidArgument, "generate_effects: alpha outside (0,1)");
  const Index s = std::max<Index>(
      1, static_cast<Index>(std::llround(alpha * static_cast<double>(p))));
  std::vector<Index> pool(p);
  for (Index j = 0; j < p; ++j) pool[j] = j;
  for (Index k = 0; k < s; ++k) {
    const Index pick =
        k + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(p - k)));
    std::swap(pool[k], pool[pick]);
  }
  pool.resize(s);
  std::sort(pool.begin(), pool.end());
  SparseCoefs beta;
  beta.p = p;
  beta.index = std::move(pool);
  beta.value.resize(s);
  for (Index k = 0; k < s; ++k) beta.value[k] = rng.normal();
  return beta;
}

/// y = X beta + eps with the noise variance set from the empirical variance
/// of the genetic component so that the target heritability is met:
/// sigma_eps^2 = Var(X beta) (1 - h2) / h2.
struct PhenotypeDraw {
  VectorXd y;
  double sigma_eps = 0.0;
};

inline PhenotypeDraw generate_phenotype(const MatrixXd& X, const SparseCoefs& beta_true,
                                        double h2, Rng rng) {
  if (!(h2 > 0.0 && h2 < 1.0))
    throw Error(ErrorCode::InvalidArgument, "generate_phenotype: h2 outside (0,1)");
  if (X.cols() != beta_true.p)
    throw Error(ErrorCode::DimensionMismatch, "generate_phenotype: X/beta sizes differ");
  const long n = X.rows();
  VectorXd genetic = VectorXd::Zero(n);
  for (Index k = 0; k < beta_true.nnz(); ++k)
    genetic.noalias() += beta_true.value[k] * X.col(beta_true.index[k]);
  const double mean = genetic.mean();
  const double var_g = genetic.squaredNorm() / static_cast<double>(n) - mean * mean;
  if (var_g <= 0.0)
    throw Error(ErrorCode::ZeroGeneticVariance,
                "generate_phenotype: genetic component has zero variance");
  PhenotypeDraw draw;
  draw.sigma_eps = std::sqrt(var_g * (1.0 - h2) / h2);
  draw.y = genetic;
  for (long i = 0; i < n; ++i) draw.y[i] += draw.sigma_eps * rng.normal();
  return draw;
}

/// Exact univariate regression summaries:
///   beta_m_j = X_j'y / X_j'X_j,
///   s2_j = (y - X_j beta_m_j)'(y - X_j beta_m_j) / (n X_j'X_j),
/// plus the marginal inner products ytilde = X'y / n. With `approximate`,
/// s2_j is replaced by the polygenic approximation y'y / (n X_j'X_j).
struct MarginalResult {
  SummaryStats summary;
  MarginalVector marginal;
  double yty = 0.0;  // study-likelihood scale for covariance-form fits
};

inline MarginalResult marginal_stats(const MatrixXd& X, const VectorXd& y,
                                     bool approximate = false) {
  if (X.rows() != y.size())
    throw Error(ErrorCode::DimensionMismatch, "marginal_stats: X rows != y length");
  const long n = X.rows();
  const double dn = static_cast<double>(n);
  MarginalResult out;
  const VectorXd xty = X.transpose() * y;
  const double yty = y.squaredNorm();
  out.yty = yty;
  out.summary.n = n;
  out.summary.beta_m.resize(X.cols());
  out.summary.s2.resize(X.cols());
  out.marginal.n = n;
  out.marginal.values = xty / dn;
  for (Index j = 0; j < X.cols(); ++j) {
    const double xtx = X.col(j).squaredNorm();
    out.summary.beta_m[j] = xty[j] / xtx;
    if (approximate) {
      out.summary.s2[j] = yty / (dn * xtx);
    } else {
      const double rss = yty - xty[j] * xty[j] / xtx;
      out.summary.s2[j] = rss / (dn * xtx);
    }
  }
  return out;
}

/// One full synthetic package: an individual-level pair, summary statistics
/// from an independent draw of size n, a reference panel, and a held-out
/// test pair. All pieces use disjoint substreams of the scenario seed, and
/// every phenotype vector is centered so downstream fits need no intercept.
struct SimOutput {
  MatrixXd X_ind;
  VectorXd y_ind;
  SummaryStats summary;
  MarginalVector marginal;
  ReferencePanel panel;
  MatrixXd X_test;
  VectorXd y_test;
  SparseCoefs beta_true;
  double sigma_eps = 0.0;      // noise SD of the individual-level draw
  double sigma_eps_sum = 0.0;  // noise SD behind the summary statistics
  double sigma_eps_test = 0.0;
  double yty_ind = 0.0;
  double yty_sum = 0.0;
};

inline SimOutput simulate(const SimScenario& sc, bool approximate_se = false) {
  const ValidationReport rep = validate(sc);
  if (!rep.ok()) throw Error(ErrorCode::InvalidArgument, "simulate: " + rep.joined());

  SimOutput out;
  out.beta_true = generate_effects(sc.p, sc.alpha, substream_rng(sc, Substream::Effects));

  out.X_ind = generate_design(sc.n_ind, sc, Substream::DesignInd);
  PhenotypeDraw ind = generate_phenotype(out.X_ind, out.beta_true, sc.h2,
                                         substream_rng(sc, Substream::NoiseInd));
  out.sigma_eps = ind.sigma_eps;
  out.y_ind = ind.y.array() - ind.y.mean();
  out.yty_ind = out.y_ind.squaredNorm();

  {
    const MatrixXd X_sum = generate_design(sc.n, sc, Substream::DesignSummary);
    PhenotypeDraw sum = generate_phenotype(X_sum, out.beta_true, sc.h2,
                                           substream_rng(sc, Substream::NoiseSummary));
    out.sigma_eps_sum = sum.sigma_eps;
    const VectorXd y_sum = sum.y.array() - sum.y.mean();
    MarginalResult stats = marginal_stats(X_sum, y_sum, approximate_se);
#ifndef NDEBUG
    // ytilde_j = d_j^2 beta_m_j must hold for every generated dataset
    for (Index j = 0; j < sc.p; ++j) {
      const double d2 = X_sum.col(j).squaredNorm() / static_cast<double>(sc.n);
      const double gap = std::abs(stats.marginal.values[j] - d2 * stats.summary.beta_m[j]);
      assert(gap <= 1e-12 * (1.0 + std::abs(stats.marginal.values[j])));
    }
#endif
    out.summary = std::move(stats.summary);
    out.marginal = std::move(stats.marginal);
    out.yty_sum = stats.yty;
  }

  out.panel.data = generate_design(sc.n_r, sc, Substream::Panel);
  out.panel.standardized = true;

  out.X_test = generate_design(sc.n_test, sc, Substream::DesignTest);
  PhenotypeDraw test = generate_phenotype(out.X_test, out.beta_true, sc.h2,
                                          substream_rng(sc, Substream::NoiseTest));
  out.sigma_eps_test = test.sigma_eps;
  out.y_test = test.y.array() - test.y.mean();
  return out;
}

}  // namespace remi
