#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "remi/fit.hpp"
#include "remi/metrics.hpp"
#include "remi/parallel.hpp"
#include "remi/simulate.hpp"

namespace remi {

struct ExperimentOptions {
  double kappa = 0.9;
  double fpr_max = 0.05;
  SolverConfig solver;
  bool approximate_se = false;
  bool check_kkt = false;     // verify optimality of every converged point
  double kkt_rel_tol = 1e-6;  // as a fraction of lambda_max
};

/// Metrics of one fitted replicate.
struct RepMetrics {
  bool ok = false;
  double l2 = std::numeric_limits<double>::quiet_NaN();
  double pauc = std::numeric_limits<double>::quiet_NaN();
  double pearson_r = std::numeric_limits<double>::quiet_NaN();
  double kkt_rel = 0.0;  // max violation / lambda_max over converged points
  bool kkt_pass = true;
  bool converged = true;
};

/// Fit one method on an already-simulated dataset and score it: l2 error of
/// the BIC-selected coefficients, partial AUC of the path ranking, Pearson
/// correlation on the held-out pair.
inline RepMetrics evaluate_method(Method method, const SimOutput& sim,
                                  const SimScenario& sc, const ExperimentOptions& opt) {
  FitInputs in;
  in.method = method;
  in.kappa = opt.kappa;
  in.partition = BlockPartition::fixed_width(sc.p, sc.block_size);
  switch (method) {
    case Method::RemiR:
      in.summary = sim.summary;
      in.panel = sim.panel;
      break;
    case Method::RemiC:
      in.marginal = sim.marginal;
      in.yty = sim.yty_sum;
      in.panel = sim.panel;
      break;
    case Method::Lasso:
      in.X = sim.X_ind;
      in.y = sim.y_ind;
      break;
  }
  const FitOutput fit = run_fit(std::move(in), opt.solver);

  RepMetrics rep;
  rep.converged = fit.path.all_converged();
  const SparseCoefs& chosen = fit.path.coefs[fit.bic.chosen];
  rep.l2 = l2_error(chosen, sim.beta_true);
  rep.pauc = partial_auc(variable_scores(fit.path), support_labels(sim.beta_true),
                         opt.fpr_max);
  try {
    rep.pearson_r = pearson(predict(sim.X_test, chosen), sim.y_test);
  } catch (const Error& e) {
    if (e.code != ErrorCode::ConstantInput) throw;
    rep.pearson_r = 0.0;  // empty model: no predictive signal
  }

  if (opt.check_kkt) {
    const double lmax = fit.path.lambdas[0];
    for (Index l = 0; l < fit.path.size(); ++l) {
      if (!fit.path.converged[l]) continue;
      const KktReport k = kkt_check(fit.problem, fit.path.coefs[l],
                                    fit.path.lambdas[l], opt.kkt_rel_tol * lmax);
      rep.kkt_rel = std::max(rep.kkt_rel, k.max_violation / lmax);
      if (!k.pass) rep.kkt_pass = false;
    }
  }
  rep.ok = true;
  return rep;
}

/// One experiment cell: a (n, n_r) setting and the methods to fit on each
/// shared replicate.
struct CellSpec {
  long n = 0;
  long n_r = 0;
  std::vector<Method> methods;
};

struct MethodStats {
  Method method = Method::RemiC;
  int rep_count = 0;  // successful replicates
  double median_l2 = std::numeric_limits<double>::quiet_NaN();
  double q25_l2 = std::numeric_limits<double>::quiet_NaN();
  double q75_l2 = std::numeric_limits<double>::quiet_NaN();
  double median_pauc = std::numeric_limits<double>::quiet_NaN();
  double median_pearson = std::numeric_limits<double>::quiet_NaN();
  double max_kkt_rel = 0.0;
  bool kkt_pass = true;
  bool failed = false;  // no replicate succeeded
};

struct CellResult {
  long n = 0;
  long n_r = 0;
  std::vector<MethodStats> stats;  // aligned with CellSpec::methods
};

/// Replicates are seeded from (base seed, n, n_r, rep), so results do not
/// depend on scheduling; cells and replicates run concurrently. A failing
/// replicate is skipped and the cell aggregates whatever succeeded.
inline std::vector<CellResult> run_cells(const SimScenario& base,
                                         const std::vector<CellSpec>& cells, int reps,
                                         const ExperimentOptions& opt) {
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "run_cells: reps must be >= 1");

  struct Task {
    std::size_t cell;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < reps; ++r) tasks.push_back({c, r});

  // slot per (cell, rep, method)
  std::vector<std::vector<std::vector<RepMetrics>>> slots(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    slots[c].resize(reps);
    for (int r = 0; r < reps; ++r) slots[c][r].resize(cells[c].methods.size());
  }

  parallel_for(tasks.size(), [&](std::size_t t) {
    const auto [c, r] = tasks[t];
    const CellSpec& cell = cells[c];
    SimScenario sc = base;
    sc.n = cell.n;
    sc.n_r = cell.n_r;
    sc.seed = derive_seed(base.seed, static_cast<std::uint64_t>(cell.n),
                          static_cast<std::uint64_t>(cell.n_r),
                          static_cast<std::uint64_t>(r));
    try {
      const SimOutput sim = simulate(sc, opt.approximate_se);
      for (std::size_t m = 0; m < cell.methods.size(); ++m)
        slots[c][r][m] = evaluate_method(cell.methods[m], sim, sc, opt);
    } catch (const Error&) {
      // replicate marked failed; see RepMetrics::ok
    }
  });

  std::vector<CellResult> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    results[c].n = cells[c].n;
    results[c].n_r = cells[c].n_r;
    for (std::size_t m = 0; m < cells[c].methods.size(); ++m) {
      MethodStats st;
      st.method = cells[c].methods[m];
      std::vector<double> l2, pauc, pear;
      for (int r = 0; r < reps; ++r) {
        const RepMetrics& rm = slots[c][r][m];
        if (!rm.ok) continue;
        ++st.rep_count;
        l2.push_back(rm.l2);
        pauc.push_back(rm.pauc);
        pear.push_back(rm.pearson_r);
        st.max_kkt_rel = std::max(st.max_kkt_rel, rm.kkt_rel);
        if (!rm.kkt_pass) st.kkt_pass = false;
      }
      if (st.rep_count == 0) {
        st.failed = true;
      } else {
        st.median_l2 = median(l2);
        st.q25_l2 = quantile(l2, 0.25);
        st.q75_l2 = quantile(l2, 0.75);
        st.median_pauc = median(pauc);
        st.median_pearson = median(pear);
      }
      results[c].stats.push_back(st);
    }
  }
  return results;
}

/// Estimation-error scaling over an (n, n_r) grid with a single method and
/// BIC selection in every cell.
inline std::vector<CellResult> scaling_experiment(const SimScenario& base,
                                                  const std::vector<long>& n_list,
                                                  const std::vector<long>& n_r_list,
                                                  int reps, Method method,
                                                  const ExperimentOptions& opt) {
  if (reps < 10)
    throw Error(ErrorCode::InvalidArgument, "scaling_experiment: reps must be >= 10");
  std::vector<CellSpec> cells;
  for (long n : n_list)
    for (long n_r : n_r_list) cells.push_back({n, n_r, {method}});
  return run_cells(base, cells, reps, opt);
}

}  // namespace remi
