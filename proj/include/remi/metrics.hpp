#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "remi/types.hpp"

namespace remi {

/// Selection and prediction quality at the chosen grid point.
struct EvalReport {
  double partial_auc = 0.0;
  double pearson_r = 0.0;
  double l2_error = 0.0;
  double support_precision = 0.0;
  double support_recall = 0.0;
};

/// Ranking statistic for ROC analysis: the largest lambda at which a
/// variable first enters the path (0 if it never does). Entries tied at the
/// same grid point are separated by |beta_j| at the smallest lambda; the
/// perturbation stays below the gap to the next grid point so the primary
/// order is preserved.
inline VectorXd variable_scores(const CoefficientPath& path) {
  const Index D = path.size();
  if (D < 1) throw Error(ErrorCode::InvalidArgument, "variable_scores: empty path");
  const Index p = path.coefs.empty() ? 0 : path.coefs[0].p;
  std::vector<Index> entry(p, -1);
  for (Index l = 0; l < D; ++l)
    for (Index k = 0; k < path.coefs[l].nnz(); ++k) {
      const Index j = path.coefs[l].index[k];
      if (entry[j] < 0) entry[j] = l;
    }
  VectorXd tail_abs = VectorXd::Zero(p);
  const SparseCoefs& last = path.coefs[D - 1];
  for (Index k = 0; k < last.nnz(); ++k)
    tail_abs[last.index[k]] = std::abs(last.value[k]);

  // fraction of the multiplicative gap to the next larger grid point that
  // the tie-break is allowed to use
  double max_ratio = 0.0;
  for (Index l = 1; l < D; ++l)
    max_ratio = std::max(max_ratio, path.lambdas[l] / path.lambdas[l - 1]);
  const double head_room = D > 1 ? 0.5 * (1.0 / max_ratio - 1.0) : 0.5;

  VectorXd scores = VectorXd::Zero(p);
  std::vector<Index> group;
  for (Index l = 0; l < D; ++l) {
    group.clear();
    for (Index j = 0; j < p; ++j)
      if (entry[j] == l) group.push_back(j);
    if (group.empty()) continue;
    double max_tail = 0.0;
    for (Index j : group) max_tail = std::max(max_tail, tail_abs[j]);
    for (Index j : group) {
      double bump = 0.0;
      if (group.size() > 1 && max_tail > 0.0)
        bump = head_room * (tail_abs[j] / max_tail);
      scores[j] = path.lambdas[l] * (1.0 + bump);
    }
  }
  return scores;
}

/// Trapezoidal area under the ROC curve restricted to FPR in [0, fpr_max],
/// normalized by fpr_max. Tied scores contribute a single diagonal segment,
/// so a constant score vector gives 0.5 at fpr_max = 1.
inline double partial_auc(const VectorXd& scores, const std::vector<char>& true_support,
                          double fpr_max) {
  const Index p = scores.size();
  if (static_cast<Index>(true_support.size()) != p)
    throw Error(ErrorCode::DimensionMismatch, "partial_auc: scores/labels sizes differ");
  if (!(fpr_max > 0.0 && fpr_max <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "partial_auc: fpr_max outside (0,1]");
  long pos = 0;
  for (char c : true_support) pos += (c != 0);
  const long neg = p - pos;
  if (pos == 0 || neg == 0)
    throw Error(ErrorCode::DegenerateLabels, "partial_auc: support empty or full");

  std::vector<Index> order(p);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores[a] > scores[b]; });

  double area = 0.0;
  double fpr = 0.0, tpr = 0.0;
  Index i = 0;
  while (i < p) {
    Index k = i;
    long d_tp = 0, d_fp = 0;
    while (k < p && scores[order[k]] == scores[order[i]]) {
      if (true_support[order[k]]) ++d_tp;
      else ++d_fp;
      ++k;
    }
    const double next_fpr = fpr + static_cast<double>(d_fp) / static_cast<double>(neg);
    const double next_tpr = tpr + static_cast<double>(d_tp) / static_cast<double>(pos);
    if (next_fpr <= fpr_max) {
      area += (next_fpr - fpr) * 0.5 * (tpr + next_tpr);
    } else if (fpr < fpr_max) {
      // clip the segment at fpr_max, interpolating TPR linearly
      const double frac = (fpr_max - fpr) / (next_fpr - fpr);
      const double cut_tpr = tpr + frac * (next_tpr - tpr);
      area += (fpr_max - fpr) * 0.5 * (tpr + cut_tpr);
    }
    fpr = next_fpr;
    tpr = next_tpr;
    i = k;
    if (fpr >= fpr_max && tpr >= 1.0) break;
  }
  return area / fpr_max;
}

/// Sample correlation coefficient.
inline double pearson(const VectorXd& pred, const VectorXd& obs) {
  if (pred.size() != obs.size() || pred.size() < 2)
    throw Error(ErrorCode::DimensionMismatch, "pearson: need two equal-length vectors");
  const double n = static_cast<double>(pred.size());
  const VectorXd a = pred.array() - pred.mean();
  const VectorXd b = obs.array() - obs.mean();
  const double sa = std::sqrt(a.squaredNorm() / n);
  const double sb = std::sqrt(b.squaredNorm() / n);
  if (sa == 0.0 || sb == 0.0)
    throw Error(ErrorCode::ConstantInput, "pearson: constant input");
  return a.dot(b) / (n * sa * sb);
}

/// X_new * beta using only the nonzero coefficients.
inline VectorXd predict(const MatrixXd& X_new, const SparseCoefs& beta) {
  if (X_new.cols() != beta.p)
    throw Error(ErrorCode::DimensionMismatch, "predict: column count != p");
  VectorXd y = VectorXd::Zero(X_new.rows());
  for (Index k = 0; k < beta.nnz(); ++k)
    y.noalias() += beta.value[k] * X_new.col(beta.index[k]);
  return y;
}

inline double l2_error(const SparseCoefs& est, const SparseCoefs& truth) {
  if (est.p != truth.p)
    throw Error(ErrorCode::DimensionMismatch, "l2_error: sizes differ");
  return (est.dense() - truth.dense()).norm();
}

/// Precision/recall of the estimated support against the true one.
inline void support_quality(const SparseCoefs& est, const SparseCoefs& truth,
                            double& precision, double& recall) {
  std::vector<char> in_truth(truth.p, 0);
  for (Index idx : truth.index) in_truth[idx] = 1;
  long hits = 0;
  for (Index idx : est.index) hits += in_truth[idx];
  precision = est.nnz() > 0
                  ? static_cast<double>(hits) / static_cast<double>(est.nnz())
                  : 0.0;
  recall = truth.nnz() > 0
               ? static_cast<double>(hits) / static_cast<double>(truth.nnz())
               : 0.0;
}

inline std::vector<char> support_labels(const SparseCoefs& truth) {
  std::vector<char> labels(truth.p, 0);
  for (Index idx : truth.index) labels[idx] = 1;
  return labels;
}

/// Type-7 quantile (linear interpolation between order statistics).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument, "quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

inline double median(const std::vector<double>& values) { return quantile(values, 0.5); }

}  // namespace remi
