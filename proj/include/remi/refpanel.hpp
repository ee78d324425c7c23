#pragma once

#include <cmath>
#include <sstream>

#include "remi/parallel.hpp"
#include "remi/types.hpp"

namespace remi {

/// External sample used only to estimate variable correlations.
struct ReferencePanel {
  MatrixXd data;  // n_r x p, columns centered and scaled when standardized
  bool standardized = false;

  long n_r() const { return data.rows(); }
  Index p() const { return data.cols(); }
};

inline ValidationReport validate(const ReferencePanel& panel) {
  ValidationReport rep;
  if (!panel.standardized) return rep;
  const double n = static_cast<double>(panel.data.rows());
  for (Index j = 0; j < panel.data.cols(); ++j) {
    const double mean = panel.data.col(j).mean();
    const double sd = std::sqrt(panel.data.col(j).squaredNorm() / n - mean * mean);
    if (std::abs(mean) > 1e-10) {
      std::ostringstream os;
      os << "column " << j << " mean not 0";
      rep.fail(os.str());
    }
    if (std::abs(sd - 1.0) > 1e-8) {
      std::ostringstream os;
      os << "column " << j << " sd not 1";
      rep.fail(os.str());
    }
  }
  return rep;
}

/// Center each column and scale it to unit sample standard deviation with
/// divisor n, so that X_j'X_j = n exactly afterwards.
inline ReferencePanel standardize(const MatrixXd& raw) {
  if (raw.rows() < 2)
    throw Error(ErrorCode::InvalidArgument, "standardize: need at least 2 rows");
  ReferencePanel panel;
  panel.data = raw;
  const double n = static_cast<double>(raw.rows());
  for (Index j = 0; j < raw.cols(); ++j) {
    const double mean = panel.data.col(j).mean();
    panel.data.col(j).array() -= mean;
    const double sd = std::sqrt(panel.data.col(j).squaredNorm() / n);
    if (sd == 0.0 || !std::isfinite(sd)) {
      std::ostringstream os;
      os << "constant column at index " << j;
      throw Error(ErrorCode::ConstantColumn, os.str(), static_cast<long>(j));
    }
    panel.data.col(j) /= sd;
  }
  panel.standardized = true;
  return panel;
}

/// Pairwise correlations r_jk = X_j'X_k / (|X_j| |X_k|) for one block.
/// Diagonal is set to exactly 1.
inline MatrixXd empirical_correlation(const ReferencePanel& panel,
                                      BlockPartition::Range block) {
  if (!panel.standardized)
    throw Error(ErrorCode::InvalidArgument, "empirical_correlation: panel not standardized");
  if (block.start < 0 || block.end > panel.p() || block.size() < 1)
    throw Error(ErrorCode::DimensionMismatch, "empirical_correlation: block outside 0..p");
  const auto cols = panel.data.middleCols(block.start, block.size());
  MatrixXd corr = MatrixXd::Zero(block.size(), block.size());
  corr.selfadjointView<Eigen::Lower>().rankUpdate(cols.transpose());
  VectorXd norms = corr.diagonal().array().sqrt();
  for (Index i = 0; i < corr.rows(); ++i) {
    corr(i, i) = 1.0;
    for (Index j = 0; j < i; ++j) {
      corr(i, j) /= norms[i] * norms[j];
      corr(j, i) = corr(i, j);
    }
  }
  return corr;
}

/// kappa * emp + (1 - kappa) * target, where the target is the identity for
/// correlation input and diag(emp) for covariance input. Both cases leave
/// the diagonal untouched, so the blend is applied to off-diagonals only;
/// the result is strictly positive definite for kappa < 1 and PSD emp.
inline MatrixXd shrink(const MatrixXd& emp, double kappa) {
  if (kappa < 0.0 || kappa > 1.0)
    throw Error(ErrorCode::InvalidArgument, "shrink: kappa outside [0,1]");
  MatrixXd out = kappa * emp;
  out.diagonal() = emp.diagonal();
  return out;
}

/// Per-block shrunk correlation (or covariance) matrices. On a standardized
/// panel the two kinds coincide because X_r'X_r / n_r already has unit
/// diagonal. Blocks are independent and computed concurrently.
inline BlockMatrixSet build_block_set(const ReferencePanel& panel,
                                      const BlockPartition& partition,
                                      double kappa, MatrixKind kind) {
  if (!panel.standardized)
    throw Error(ErrorCode::InvalidArgument, "build_block_set: panel not standardized");
  if (partition.p() != panel.p())
    throw Error(ErrorCode::DimensionMismatch, "build_block_set: partition does not cover panel");
  const ValidationReport rep = validate(partition);
  if (!rep.ok())
    throw Error(ErrorCode::InvalidArgument, "build_block_set: " + rep.joined());

  BlockMatrixSet set;
  set.partition = partition;
  set.kind = kind;
  set.kappa = kappa;
  set.blocks.resize(partition.count());
  const double n_r = static_cast<double>(panel.n_r());
  parallel_for(partition.count(), [&](std::size_t b) {
    const auto range = partition.blocks[b];
    if (kind == MatrixKind::Correlation) {
      set.blocks[b] = shrink(empirical_correlation(panel, range), kappa);
    } else {
      const auto cols = panel.data.middleCols(range.start, range.size());
      MatrixXd cov = MatrixXd::Zero(range.size(), range.size());
      cov.selfadjointView<Eigen::Lower>().rankUpdate(cols.transpose(), 1.0 / n_r);
      cov.triangularView<Eigen::Upper>() = cov.transpose();
      set.blocks[b] = shrink(cov, kappa);
    }
  });
  return set;
}

}  // namespace remi
