#pragma once

#include <utility>

#include "remi/refpanel.hpp"
#include "remi/selection.hpp"
#include "remi/solver.hpp"

namespace remi {

enum class Method { RemiC, RemiR, Lasso };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::RemiC: return "remi-c";
    case Method::RemiR: return "remi-r";
    case Method::Lasso: return "lasso";
  }
  return "?";
}

inline Method parse_method(const std::string& name) {
  if (name == "remi-c") return Method::RemiC;
  if (name == "remi-r") return Method::RemiR;
  if (name == "lasso") return Method::Lasso;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

/// Everything a fit needs, already in memory. The CLI parses files into
/// this; tests and the experiment runner construct it directly, so all of
/// them run the identical code path.
struct FitInputs {
  Method method = Method::RemiR;
  SummaryStats summary;      // remi-r
  MarginalVector marginal;   // remi-c
  double yty = 0.0;          // remi-c BIC scale; 0 assumes unit phenotype variance
  ReferencePanel panel;      // remi-c / remi-r, standardized
  BlockPartition partition;  // remi-c / remi-r
  double kappa = 0.9;
  MatrixXd X;  // lasso, standardized
  VectorXd y;  // lasso, centered
};

struct FitOutput {
  QuadraticProblem problem;
  CoefficientPath path;
  BicTable bic;
  double loss_scale = 1.0;
  long n_bic = 0;
};

/// Build the method's quadratic problem, fit the warm-started path over the
/// default grid, and select by BIC. The BIC loss is rescaled onto the
/// study-likelihood scale where the raw objective is not already there:
/// the summary objective needs nothing, while the covariance objective and
/// the Lasso are multiplied by n^2 / y'y (the penalty rescaling constant).
inline FitOutput run_fit(FitInputs inputs, const SolverConfig& cfg) {
  FitOutput out;
  switch (inputs.method) {
    case Method::RemiR: {
      const BlockMatrixSet corr = build_block_set(inputs.panel, inputs.partition,
                                                  inputs.kappa, MatrixKind::Correlation);
      out.problem = make_summary_problem(inputs.summary, corr);
      out.n_bic = inputs.summary.n;
      out.loss_scale = 1.0;
      break;
    }
    case Method::RemiC: {
      BlockMatrixSet cov = build_block_set(inputs.panel, inputs.partition,
                                           inputs.kappa, MatrixKind::Covariance);
      out.problem = make_covariance_problem(std::move(cov), inputs.marginal);
      out.n_bic = inputs.marginal.n;
      const double n = static_cast<double>(inputs.marginal.n);
      out.loss_scale = inputs.yty > 0.0 ? n * n / inputs.yty : n;
      break;
    }
    case Method::Lasso: {
      out.problem = make_lasso_problem(inputs.X, inputs.y);
      out.n_bic = inputs.X.rows();
      const double n = static_cast<double>(out.n_bic);
      out.loss_scale = n * n / inputs.y.squaredNorm();
      break;
    }
  }
  const VectorXd grid = lambda_grid(lambda_max(out.problem), cfg.tau, cfg.D);
  out.path = fit_path(out.problem, cfg, grid);
  out.bic = bic_select(out.path, out.n_bic, out.loss_scale);
  return out;
}

}  // namespace remi
