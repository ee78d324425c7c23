#pragma once

#include <cmath>
#include <vector>

#include "remi/types.hpp"

namespace remi {

/// Penalty choice by BIC(lambda_l) = loss_l + ln(n) * df_l, where loss is
/// the smooth part of the fitted objective and df the nonzero count.
struct BicTable {
  VectorXd lambdas;
  VectorXd loss;
  std::vector<Index> df;
  VectorXd bic;
  Index chosen = 0;
};

/// Natural logarithm throughout. Ties go to the smaller index, i.e. the
/// larger lambda. The loss values are taken from the path as recorded;
/// callers fitting an objective that is not on the study-likelihood scale
/// rescale the loss first (see bic_select with loss_scale).
inline BicTable bic_select(const CoefficientPath& path, double n,
                           double loss_scale = 1.0) {
  if (path.size() < 1)
    throw Error(ErrorCode::InvalidArgument, "bic_select: empty path");
  if (!(n >= 2.0)) throw Error(ErrorCode::InvalidArgument, "bic_select: n must be >= 2");
  if (!(loss_scale > 0.0))
    throw Error(ErrorCode::InvalidArgument, "bic_select: loss_scale must be positive");

  BicTable table;
  table.lambdas = path.lambdas;
  table.loss = loss_scale * path.objective;
  table.df = path.df;
  table.bic.resize(path.size());
  const double log_n = std::log(n);
  for (Index l = 0; l < path.size(); ++l)
    table.bic[l] = table.loss[l] + log_n * static_cast<double>(table.df[l]);
  table.chosen = 0;
  for (Index l = 1; l < path.size(); ++l)
    if (table.bic[l] < table.bic[table.chosen]) table.chosen = l;
  return table;
}

}  // namespace remi
