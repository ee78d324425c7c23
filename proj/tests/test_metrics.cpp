#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "remi/experiment.hpp"
#include "remi/metrics.hpp"
#include "remi/rng.hpp"
#include "remi/simulate.hpp"

using namespace remi;

namespace {

CoefficientPath path_with_entries(Index p, const std::vector<double>& lambdas,
                                  const std::vector<std::vector<Index>>& supports) {
  CoefficientPath path;
  path.lambdas =
      Eigen::Map<const VectorXd>(lambdas.data(), static_cast<Index>(lambdas.size()));
  for (std::size_t l = 0; l < supports.size(); ++l) {
    SparseCoefs c;
    c.p = p;
    for (Index j : supports[l]) {
      c.index.push_back(j);
      c.value.push_back(0.5);
    }
    path.coefs.push_back(c);
    path.df.push_back(c.nnz());
    path.converged.push_back(1);
  }
  path.objective = VectorXd::Zero(path.lambdas.size());
  return path;
}

/// Independent full-AUC oracle: Mann-Whitney pair counting with half credit
/// for ties.
double mann_whitney_auc(const VectorXd& scores, const std::vector<char>& labels) {
  double u = 0.0;
  long pos = 0, neg = 0;
  for (Index i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    ++pos;
    for (Index j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      if (scores[i] > scores[j]) u += 1.0;
      else if (scores[i] == scores[j]) u += 0.5;
    }
  }
  for (char c : labels) neg += (c == 0);
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

}  // namespace

TEST_CASE("variable scores order by entry point") {
  // 6 variables; variable 0 enters first, variable 3 later, others never
  const CoefficientPath path = path_with_entries(
      6, {1.0, 0.6, 0.36, 0.216, 0.1296},
      {{}, {0}, {0}, {0, 3}, {0, 3}});
  const VectorXd scores = variable_scores(path);
  CHECK(scores[0] > scores[3]);
  CHECK(scores[3] > 0.0);
  for (Index j : {1, 2, 4, 5}) CHECK(scores[j] == 0.0);
  CHECK(scores[0] == 0.6);  // exact: unique entry, no tie bump
}

TEST_CASE("tied entries break by the magnitude at the smallest lambda") {
  CoefficientPath path = path_with_entries(4, {1.0, 0.5, 0.25},
                                           {{}, {0, 1}, {0, 1}});
  path.coefs[2].value[0] = 0.2;  // variable 0 ends small
  path.coefs[2].value[1] = 0.9;  // variable 1 ends large
  const VectorXd scores = variable_scores(path);
  CHECK(scores[1] > scores[0]);
  CHECK(scores[0] >= 0.5);
  CHECK(scores[1] < 1.0);  // bump never reaches the next grid point
}

TEST_CASE("scores reproduce the oracle entry order at p = 3") {
  Rng rng(404);
  MatrixXd raw(60, 3);
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < 60; ++i) raw(i, j) = rng.normal();
  const ReferencePanel panel = standardize(raw);
  BlockMatrixSet gram =
      build_block_set(panel, BlockPartition::single(3), 0.9, MatrixKind::Covariance);
  MarginalVector marginal;
  marginal.n = 60;
  marginal.values.resize(3);
  marginal.values << 0.9, 0.4, 0.1;
  const QuadraticProblem prob = make_covariance_problem(std::move(gram), marginal);

  SolverConfig cfg;
  cfg.tol = 1e-10;
  const VectorXd grid = lambda_grid(lambda_max(prob), 0.02, 40);
  const CoefficientPath path = fit_path(prob, cfg, grid);
  const VectorXd scores = variable_scores(path);

  // oracle entry order: first grid point at which the oracle solution is
  // nonzero for each variable
  std::vector<Index> oracle_entry(3, grid.size());
  for (Index l = 0; l < grid.size(); ++l) {
    const auto sol = remi_test::sign_enumeration_solve(prob, grid[l]);
    REQUIRE(sol.found);
    for (Index j = 0; j < 3; ++j)
      if (sol.beta[j] != 0.0 && oracle_entry[j] == grid.size()) oracle_entry[j] = l;
  }
  for (Index a = 0; a < 3; ++a)
    for (Index b = 0; b < 3; ++b) {
      if (oracle_entry[a] < oracle_entry[b]) CHECK(scores[a] > scores[b]);
    }
}

TEST_CASE("partial auc hand cases") {
  SECTION("perfect ranking scores 1") {
    VectorXd scores(4);
    scores << 0.9, 0.8, 0.1, 0.05;
    const std::vector<char> labels = {1, 0, 0, 0};
    CHECK(partial_auc(scores, labels, 1.0) == 1.0);
    CHECK(partial_auc(scores, labels, 0.05) == 1.0);
  }
  SECTION("constant scores give the diagonal") {
    const VectorXd scores = VectorXd::Constant(6, 0.7);
    const std::vector<char> labels = {1, 0, 1, 0, 0, 0};
    CHECK(partial_auc(scores, labels, 1.0) == Catch::Approx(0.5).epsilon(1e-15));
  }
  SECTION("one positive ranked third of four") {
    VectorXd scores(4);
    scores << 0.1, 0.8, 0.9, 0.05;
    const std::vector<char> labels = {1, 0, 0, 0};
    CHECK(partial_auc(scores, labels, 1.0) == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SECTION("degenerate labels are rejected") {
    VectorXd scores(3);
    scores << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(partial_auc(scores, {1, 1, 1}, 1.0), Error);
    CHECK_THROWS_AS(partial_auc(scores, {0, 0, 0}, 1.0), Error);
  }
}

TEST_CASE("partial auc is invariant under strictly increasing transforms") {
  Rng rng(88);
  for (int t = 0; t < 30; ++t) {
    const Index p = 20;
    VectorXd scores(p);
    std::vector<char> labels(p, 0);
    for (Index j = 0; j < p; ++j) {
      scores[j] = std::floor(rng.uniform() * 8.0);  // force some ties
      labels[j] = rng.uniform() < 0.3 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    VectorXd transformed(p);
    for (Index j = 0; j < p; ++j)
      transformed[j] = std::exp(0.7 * scores[j]) + 3.0;
    for (double cut : {0.05, 0.3, 1.0}) {
      CHECK(partial_auc(scores, labels, cut) ==
            Catch::Approx(partial_auc(transformed, labels, cut)).epsilon(1e-12));
    }
  }
}

TEST_CASE("full-range partial auc equals Mann-Whitney pair counting") {
  Rng rng(55);
  for (int t = 0; t < 100; ++t) {
    const Index p = 30;
    VectorXd scores(p);
    std::vector<char> labels(p, 0);
    for (Index j = 0; j < p; ++j) {
      scores[j] = std::floor(rng.uniform() * 6.0) / 3.0;
      labels[j] = rng.uniform() < 0.4 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    const double trapezoid = partial_auc(scores, labels, 1.0);
    const double pairs = mann_whitney_auc(scores, labels);
    CHECK(trapezoid == Catch::Approx(pairs).margin(1e-12));
  }
}

TEST_CASE("pearson correlation") {
  VectorXd a(3), b(3);
  a << 1.0, 2.0, 3.0;
  b << 1.0, 2.0, 4.0;
  CHECK(pearson(a, a) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(a, (-a).eval()) == Catch::Approx(-1.0).epsilon(1e-15));
  // closed form: 9 / (2 sqrt(21))
  CHECK(pearson(a, b) == Catch::Approx(9.0 / (2.0 * std::sqrt(21.0))).epsilon(1e-14));
  CHECK_THROWS_AS(pearson(a, VectorXd::Constant(3, 2.0)), Error);
}

TEST_CASE("pearson is invariant under positive affine maps and flips sign") {
  Rng rng(21);
  VectorXd a(50), b(50);
  for (Index i = 0; i < 50; ++i) {
    a[i] = rng.normal();
    b[i] = 0.6 * a[i] + rng.normal();
  }
  const double base = pearson(a, b);
  CHECK(pearson((2.5 * a).eval(), b) == Catch::Approx(base).epsilon(1e-12));
  CHECK(pearson((a.array() + 11.0).matrix().eval(), b) ==
        Catch::Approx(base).epsilon(1e-12));
  CHECK(pearson((-3.0 * a).eval(), b) == Catch::Approx(-base).epsilon(1e-12));
}

TEST_CASE("sparse prediction") {
  Rng rng(33);
  MatrixXd X(15, 20);
  for (Index j = 0; j < 20; ++j)
    for (Index i = 0; i < 15; ++i) X(i, j) = rng.normal();

  SparseCoefs zero;
  zero.p = 20;
  CHECK(predict(X, zero) == VectorXd::Zero(15));

  SparseCoefs unit;
  unit.p = 20;
  unit.index = {7};
  unit.value = {1.0};
  CHECK(predict(X, unit) == X.col(7));

  SparseCoefs dense_beta;
  dense_beta.p = 20;
  for (Index j = 0; j < 20; ++j) {
    dense_beta.index.push_back(j);
    dense_beta.value.push_back(rng.normal());
  }
  VectorXd naive = VectorXd::Zero(15);
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 20; ++j) naive[i] += X(i, j) * dense_beta.value[j];
  CHECK((predict(X, dense_beta) - naive).cwiseAbs().maxCoeff() < 1e-12);

  SparseCoefs wrong;
  wrong.p = 19;
  CHECK_THROWS_AS(predict(X, wrong), Error);
}

TEST_CASE("scaling experiment: error medians improve with n and match the Lasso") {
  SimScenario base;
  base.p = 100;
  base.n = 500;
  base.n_ind = 500;
  base.n_r = 150;
  base.n_test = 100;
  base.alpha = 0.05;
  base.h2 = 0.5;
  base.block_size = 20;
  base.rho = 0.3;
  base.seed = 4242;

  ExperimentOptions opt;
  opt.solver.D = 50;

  SECTION("medians weakly decrease along n at fixed n_r") {
    const auto cells = scaling_experiment(base, {400, 1600, 6400}, {200}, 10,
                                          Method::RemiC, opt);
    REQUIRE(cells.size() == 3);
    int inversions = 0;
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].stats[0].median_l2 > cells[i - 1].stats[0].median_l2) ++inversions;
    CHECK(inversions <= 1);
  }

  SECTION("quadrupling n cuts the median error by at least 1.5") {
    // n_r large and fixed so the panel term does not floor the improvement
    const auto cells =
        scaling_experiment(base, {500, 2000}, {1000}, 16, Method::RemiC, opt);
    REQUIRE(cells.size() == 2);
    CHECK(cells[1].stats[0].median_l2 <= cells[0].stats[0].median_l2 / 1.5);
  }

  SECTION("n_r = n puts the reference fit within 2x of the Lasso") {
    std::vector<CellSpec> cells;
    cells.push_back({1000, 1000, {Method::RemiC, Method::Lasso}});
    SimScenario sc = base;
    sc.n_ind = 1000;  // the Lasso sees as many samples as the summary study
    const auto results = run_cells(sc, cells, 10, opt);
    const double remi_err = results[0].stats[0].median_l2;
    const double lasso_err = results[0].stats[1].median_l2;
    CHECK(remi_err <= 2.0 * lasso_err);
  }

  SECTION("rep floor is enforced") {
    CHECK_THROWS_AS(scaling_experiment(base, {400}, {200}, 9, Method::RemiC, opt),
                    Error);
  }
}

TEST_CASE("fits are insensitive to the shrinkage weight") {
  SimScenario sc;
  sc.p = 80;
  sc.n = 2000;
  sc.n_ind = 200;
  sc.n_r = 150;
  sc.n_test = 150;
  sc.alpha = 0.05;
  sc.h2 = 0.5;
  sc.block_size = 20;
  sc.rho = 0.3;
  sc.seed = 31007;
  const SimOutput sim = simulate(sc);

  ExperimentOptions opt;
  opt.solver.D = 50;
  std::vector<double> pauc, pear;
  for (double kappa : {0.5, 0.9, 0.99}) {
    opt.kappa = kappa;
    const RepMetrics rep = evaluate_method(Method::RemiR, sim, sc, opt);
    pauc.push_back(rep.pauc);
    pear.push_back(rep.pearson_r);
  }
  for (std::size_t i = 1; i < pauc.size(); ++i) {
    CHECK(std::abs(pauc[i] - pauc[0]) < 0.05);
    CHECK(std::abs(pear[i] - pear[0]) < 0.05);
  }
}
