// Command-line surface for the REMI toolkit: fit / select / simulate /
// evaluate / scaling / blocks. Every run writes a manifest with all
// resolved parameters; re-running from the manifest reproduces the
// artifacts byte for byte (REMI_THREADS may vary freely).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "remi/experiment.hpp"
#include "remi/fit.hpp"
#include "remi/io.hpp"
#include "remi/metrics.hpp"
#include "remi/report_io.hpp"
#include "remi/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

void require_keys(const json& params, const std::set<std::string>& schema,
                  const std::string& command) {
  for (const auto& [key, value] : params.items()) {
    (void)value;
    if (!schema.count(key))
      throw remi::Error(remi::ErrorCode::InvalidArgument,
                        "unknown key '" + key + "' in " + command + " parameters");
  }
  for (const auto& key : schema)
    if (!params.contains(key))
      throw remi::Error(remi::ErrorCode::InvalidArgument,
                        "missing key '" + key + "' in " + command + " parameters");
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& params) {
  json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["format_versions"] = {{"matrix_binary", 1}, {"summary_tsv", 1},
                                 {"marginal_tsv", 1},  {"path_csv", 1},
                                 {"bic_csv", 1},       {"partition", 1},
                                 {"effects_tsv", 1}};
  manifest["command"] = command;
  manifest["params"] = params;
  fs::create_directories(out_dir);
  std::ofstream out(out_dir + "/manifest.json");
  if (!out)
    throw remi::Error(remi::ErrorCode::IoFailure, "cannot write manifest in " + out_dir);
  out << manifest.dump(2) << '\n';
}

remi::SolverConfig solver_from(const json& p) {
  remi::SolverConfig cfg;
  cfg.tol = p.at("tol").get<double>();
  cfg.max_sweeps = p.at("max_sweeps").get<int>();
  cfg.D = p.at("grid_size").get<int>();
  cfg.tau = p.at("tau").get<double>();
  return cfg;
}

remi::BlockPartition partition_from(const json& p, remi::Index dim) {
  const std::string blocks_path = p.at("blocks").get<std::string>();
  if (!blocks_path.empty()) {
    remi::BlockPartition part = remi::parse_partition_file(blocks_path);
    if (part.p() != dim)
      throw remi::Error(remi::ErrorCode::DimensionMismatch,
                        "partition covers " + std::to_string(part.p()) +
                            " variables, data has " + std::to_string(dim));
    return part;
  }
  const long width = p.at("block_size").get<long>();
  if (width < 1)
    throw remi::Error(remi::ErrorCode::InvalidArgument,
                      "either --blocks or --block-size is required");
  return remi::BlockPartition::fixed_width(dim, width);
}

const std::set<std::string> kFitKeys = {
    "method", "summary", "marginal", "yty",        "panel", "x",
    "y",      "blocks",  "block_size", "kappa",    "tol",   "max_sweeps",
    "grid_size", "tau",  "out"};

int cmd_fit(const json& p) {
  require_keys(p, kFitKeys, "fit");
  const std::string out_dir = p.at("out").get<std::string>();
  write_manifest(out_dir, "fit", p);

  const remi::Method method = remi::parse_method(p.at("method").get<std::string>());
  const remi::SolverConfig cfg = solver_from(p);

  remi::FitInputs in;
  in.method = method;
  in.kappa = p.at("kappa").get<double>();
  const auto must_hold = [](const remi::ValidationReport& rep, const char* what) {
    if (!rep.ok())
      throw remi::Error(remi::ErrorCode::InvalidArgument,
                        std::string(what) + ": " + rep.joined());
  };
  switch (method) {
    case remi::Method::RemiR: {
      in.summary = remi::parse_summary_file(p.at("summary").get<std::string>());
      must_hold(remi::validate(in.summary), "summary");
      in.panel = remi::standardize(remi::parse_matrix_file(p.at("panel").get<std::string>()));
      in.partition = partition_from(p, in.panel.p());
      break;
    }
    case remi::Method::RemiC: {
      in.marginal = remi::parse_marginal_file(p.at("marginal").get<std::string>());
      must_hold(remi::validate(in.marginal), "marginal");
      in.yty = p.at("yty").get<double>();
      in.panel = remi::standardize(remi::parse_matrix_file(p.at("panel").get<std::string>()));
      in.partition = partition_from(p, in.panel.p());
      break;
    }
    case remi::Method::Lasso: {
      in.X = remi::standardize(remi::parse_matrix_file(p.at("x").get<std::string>())).data;
      remi::VectorXd y = remi::parse_vector_file(p.at("y").get<std::string>());
      in.y = y.array() - y.mean();
      break;
    }
  }

  const remi::FitOutput fit = remi::run_fit(std::move(in), cfg);
  remi::write_path_file(out_dir + "/path.csv", fit.path);
  remi::write_bic_file(out_dir + "/bic.csv", fit.bic);
  if (!fit.path.all_converged()) {
    std::cerr << "warning: some grid points did not converge (flagged in path.csv)\n";
    return 2;
  }
  return 0;
}

const std::set<std::string> kSelectKeys = {"path", "p", "n", "loss_scale", "out"};

int cmd_select(const json& p) {
  require_keys(p, kSelectKeys, "select");
  const std::string out_dir = p.at("out").get<std::string>();
  write_manifest(out_dir, "select", p);
  const remi::CoefficientPath path =
      remi::parse_path_file(p.at("path").get<std::string>(), p.at("p").get<long>());
  const remi::BicTable table = remi::bic_select(path, p.at("n").get<long>(),
                                                p.at("loss_scale").get<double>());
  remi::write_bic_file(out_dir + "/bic.csv", table);
  return 0;
}

const std::set<std::string> kSimulateKeys = {
    "p",  "n",         "n_ind", "n_r", "n_test", "alpha", "h2",
    "block_size", "rho", "seed", "approx_se", "text", "out"};

remi::SimScenario scenario_from(const json& p) {
  remi::SimScenario sc;
  sc.p = p.at("p").get<long>();
  sc.n = p.at("n").get<long>();
  sc.n_ind = p.at("n_ind").get<long>();
  sc.n_r = p.at("n_r").get<long>();
  sc.n_test = p.at("n_test").get<long>();
  sc.alpha = p.at("alpha").get<double>();
  sc.h2 = p.at("h2").get<double>();
  sc.block_size = p.at("block_size").get<long>();
  sc.rho = p.at("rho").get<double>();
  sc.seed = p.at("seed").get<std::uint64_t>();
  return sc;
}

int cmd_simulate(const json& p) {
  require_keys(p, kSimulateKeys, "simulate");
  const std::string out_dir = p.at("out").get<std::string>();
  write_manifest(out_dir, "simulate", p);

  const remi::SimScenario sc = scenario_from(p);
  const remi::SimOutput sim = remi::simulate(sc, p.at("approx_se").get<bool>());
  const bool text = p.at("text").get<bool>();

  const auto write_matrix = [&](const std::string& name, const remi::MatrixXd& m) {
    if (text)
      remi::write_matrix_text(out_dir + "/" + name + ".txt", m);
    else
      remi::write_matrix_binary(out_dir + "/" + name + ".bin", m);
  };
  write_matrix("x_ind", sim.X_ind);
  write_matrix("y_ind", sim.y_ind);
  write_matrix("panel", sim.panel.data);
  write_matrix("x_test", sim.X_test);
  write_matrix("y_test", sim.y_test);
  remi::write_summary_file(out_dir + "/summary.tsv", sim.summary);
  remi::write_marginal_file(out_dir + "/marginal.tsv", sim.marginal);
  remi::write_effects_file(out_dir + "/beta_true.tsv", sim.beta_true);
  remi::write_partition_file(out_dir + "/blocks.txt",
                             remi::BlockPartition::fixed_width(sc.p, sc.block_size));
  return 0;
}

const std::set<std::string> kEvaluateKeys = {"path", "bic", "truth", "x_test",
                                             "y_test", "fpr_max", "out"};

int cmd_evaluate(const json& p) {
  require_keys(p, kEvaluateKeys, "evaluate");
  const std::string out_dir = p.at("out").get<std::string>();
  write_manifest(out_dir, "evaluate", p);

  const remi::SparseCoefs truth = remi::parse_effects_file(p.at("truth").get<std::string>());
  const remi::CoefficientPath path =
      remi::parse_path_file(p.at("path").get<std::string>(), truth.p);
  const remi::BicTable bic = remi::parse_bic_file(p.at("bic").get<std::string>());
  const remi::MatrixXd x_test = remi::parse_matrix_file(p.at("x_test").get<std::string>());
  const remi::VectorXd y_test = remi::parse_vector_file(p.at("y_test").get<std::string>());

  const remi::SparseCoefs& chosen = path.coefs.at(bic.chosen);
  remi::EvalReport report;
  report.partial_auc = remi::partial_auc(remi::variable_scores(path),
                                         remi::support_labels(truth),
                                         p.at("fpr_max").get<double>());
  report.pearson_r = remi::pearson(remi::predict(x_test, chosen), y_test);
  report.l2_error = remi::l2_error(chosen, truth);
  remi::support_quality(chosen, truth, report.support_precision, report.support_recall);
  remi::write_eval_file(out_dir + "/eval.csv", report);
  return 0;
}

const std::set<std::string> kScalingKeys = {
    "p",   "n_ind", "n_test", "alpha",  "h2",    "block_size", "rho",
    "seed", "n_list", "nr_list", "reps", "method", "kappa",    "fpr_max",
    "approx_se", "tol", "max_sweeps", "grid_size", "tau", "out"};

std::vector<long> parse_list(const std::string& csv) {
  std::vector<long> out;
  for (const auto& field : remi::detail::split_char(csv, ','))
    if (!field.empty()) out.push_back(remi::parse_long(field, 0));
  return out;
}

int cmd_scaling(const json& p) {
  require_keys(p, kScalingKeys, "scaling");
  const std::string out_dir = p.at("out").get<std::string>();
  write_manifest(out_dir, "scaling", p);

  const std::vector<long> n_list = parse_list(p.at("n_list").get<std::string>());
  const std::vector<long> nr_list = parse_list(p.at("nr_list").get<std::string>());
  if (n_list.empty() || nr_list.empty())
    throw remi::Error(remi::ErrorCode::InvalidArgument, "empty n/n_r list");

  remi::SimScenario base;
  base.p = p.at("p").get<long>();
  base.n = n_list.front();
  base.n_ind = p.at("n_ind").get<long>();
  base.n_r = nr_list.front();
  base.n_test = p.at("n_test").get<long>();
  base.alpha = p.at("alpha").get<double>();
  base.h2 = p.at("h2").get<double>();
  base.block_size = p.at("block_size").get<long>();
  base.rho = p.at("rho").get<double>();
  base.seed = p.at("seed").get<std::uint64_t>();

  remi::ExperimentOptions opt;
  opt.kappa = p.at("kappa").get<double>();
  opt.fpr_max = p.at("fpr_max").get<double>();
  opt.approximate_se = p.at("approx_se").get<bool>();
  opt.solver = solver_from(p);

  const auto cells = remi::scaling_experiment(
      base, n_list, nr_list, p.at("reps").get<int>(),
      remi::parse_method(p.at("method").get<std::string>()), opt);
  remi::write_scaling_file(out_dir + "/scaling.csv", cells);
  return 0;
}

const std::set<std::string> kBlocksKeys = {"p", "block_size", "out"};

int cmd_blocks(const json& p) {
  require_keys(p, kBlocksKeys, "blocks");
  const std::string out_dir = p.at("out").get<std::string>();
  write_manifest(out_dir, "blocks", p);
  remi::write_partition_file(
      out_dir + "/blocks.txt",
      remi::BlockPartition::fixed_width(p.at("p").get<long>(),
                                        p.at("block_size").get<long>()));
  return 0;
}

int dispatch(const std::string& command, const json& params) {
  if (command == "fit") return cmd_fit(params);
  if (command == "select") return cmd_select(params);
  if (command == "simulate") return cmd_simulate(params);
  if (command == "evaluate") return cmd_evaluate(params);
  if (command == "scaling") return cmd_scaling(params);
  if (command == "blocks") return cmd_blocks(params);
  throw remi::Error(remi::ErrorCode::InvalidArgument, "unknown command '" + command + "'");
}

int run_from_manifest(const std::string& manifest_path, const std::string& out_override) {
  std::ifstream in(manifest_path);
  if (!in)
    throw remi::Error(remi::ErrorCode::IoFailure, "cannot open " + manifest_path);
  json manifest = json::parse(in);
  for (const auto& [key, value] : manifest.items()) {
    (void)value;
    if (key != "format_version" && key != "format_versions" && key != "command" &&
        key != "params")
      throw remi::Error(remi::ErrorCode::InvalidArgument,
                        "unknown key '" + key + "' in manifest");
  }
  if (manifest.at("format_version").get<int>() != kFormatVersion)
    throw remi::Error(remi::ErrorCode::InvalidArgument, "unsupported manifest version");
  json params = manifest.at("params");
  if (!out_override.empty()) params["out"] = out_override;
  return dispatch(manifest.at("command").get<std::string>(), params);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1-penalized regression from marginal summary statistics "
               "with a reference panel (REMI-C / REMI-R) plus an "
               "individual-level Lasso baseline"};
  app.require_subcommand(0, 1);

  std::string manifest_path, manifest_out;
  app.add_option("--manifest", manifest_path,
                 "re-run a command from its manifest (bit-identical artifacts)");
  app.add_option("--out", manifest_out, "output directory override for --manifest");

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "fit a penalty path and select by BIC");
  std::string fit_method = "remi-r", fit_summary, fit_marginal, fit_panel, fit_x,
              fit_y, fit_blocks, fit_out;
  double fit_yty = 0.0, fit_kappa = 0.9, fit_tol = 1e-5, fit_tau = 0.05;
  long fit_block_size = 0;
  int fit_max_sweeps = 1000, fit_grid = 100;
  fit->add_option("--method", fit_method, "remi-c | remi-r | lasso")->required();
  fit->add_option("--summary", fit_summary, "summary TSV (id beta se n), remi-r");
  fit->add_option("--marginal", fit_marginal, "marginal TSV (id ytilde n), remi-c");
  fit->add_option("--yty", fit_yty, "y'y of the source study (remi-c BIC scale)");
  fit->add_option("--panel", fit_panel, "reference panel matrix file");
  fit->add_option("--x", fit_x, "design matrix file (lasso)");
  fit->add_option("--y", fit_y, "response vector file (lasso)");
  fit->add_option("--blocks", fit_blocks, "block partition file (lines: start end)");
  fit->add_option("--block-size", fit_block_size, "fixed-width blocks instead of --blocks");
  fit->add_option("--kappa", fit_kappa, "correlation shrinkage weight");
  fit->add_option("--tol", fit_tol, "convergence threshold");
  fit->add_option("--max-sweeps", fit_max_sweeps, "sweep cap per grid point");
  fit->add_option("--grid-size", fit_grid, "number of grid points");
  fit->add_option("--tau", fit_tau, "grid floor ratio");
  fit->add_option("--out", fit_out, "output directory")->required();

  // ---- select ----
  auto* select = app.add_subcommand("select", "BIC table for an existing path");
  std::string sel_path, sel_out;
  long sel_p = 0, sel_n = 0;
  double sel_scale = 1.0;
  select->add_option("--path", sel_path, "path.csv")->required();
  select->add_option("--p", sel_p, "number of variables")->required();
  select->add_option("--n", sel_n, "sample size for the BIC penalty")->required();
  select->add_option("--loss-scale", sel_scale, "multiplier onto the recorded loss");
  select->add_option("--out", sel_out, "output directory")->required();

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "write one synthetic dataset package");
  bool sim_approx = false, sim_text = false;
  std::string sim_out, sim_config;
  std::uint64_t sim_seed = 1;
  long sim_p = 0, sim_n = 0, sim_n_ind = 0, sim_n_r = 0, sim_n_test = 0, sim_bs = 0;
  double sim_alpha = 0.0, sim_h2 = 0.0, sim_rho = 0.0;
  auto* cfg_opt = simulate->add_option(
      "--config", sim_config, "JSON scenario file instead of the flags below");
  simulate->add_option("--p", sim_p, "variables")->excludes(cfg_opt);
  simulate->add_option("--n", sim_n, "summary-study sample size")->excludes(cfg_opt);
  simulate->add_option("--n-ind", sim_n_ind, "individual-level sample size")->excludes(cfg_opt);
  simulate->add_option("--n-r", sim_n_r, "reference panel size")->excludes(cfg_opt);
  simulate->add_option("--n-test", sim_n_test, "held-out sample size")->excludes(cfg_opt);
  simulate->add_option("--alpha", sim_alpha, "nonzero fraction of effects")->excludes(cfg_opt);
  simulate->add_option("--h2", sim_h2, "target heritability")->excludes(cfg_opt);
  simulate->add_option("--block-size", sim_bs, "correlation block width")->excludes(cfg_opt);
  simulate->add_option("--rho", sim_rho, "within-block AR(1) correlation")->excludes(cfg_opt);
  simulate->add_option("--seed", sim_seed, "scenario seed");
  simulate->add_flag("--approx-se", sim_approx, "polygenic standard-error approximation");
  simulate->add_flag("--text", sim_text, "write matrices as text instead of binary");
  simulate->add_option("--out", sim_out, "output directory")->required();

  // ---- evaluate ----
  auto* evaluate = app.add_subcommand("evaluate", "score a fitted path on held-out data");
  std::string ev_path, ev_bic, ev_truth, ev_xtest, ev_ytest, ev_out;
  double ev_fpr = 0.05;
  evaluate->add_option("--path", ev_path, "path.csv")->required();
  evaluate->add_option("--bic", ev_bic, "bic.csv")->required();
  evaluate->add_option("--truth", ev_truth, "true effects TSV")->required();
  evaluate->add_option("--x-test", ev_xtest, "held-out design matrix")->required();
  evaluate->add_option("--y-test", ev_ytest, "held-out response")->required();
  evaluate->add_option("--fpr-max", ev_fpr, "partial-AUC cutoff");
  evaluate->add_option("--out", ev_out, "output directory")->required();

  // ---- scaling ----
  auto* scaling = app.add_subcommand("scaling", "median-error experiment over (n, n_r)");
  std::string sc_nlist, sc_nrlist, sc_method = "remi-c", sc_out;
  long sc_p = 0, sc_n_ind = 0, sc_n_test = 0, sc_bs = 0;
  double sc_alpha = 0.0, sc_h2 = 0.0, sc_rho = 0.0, sc_kappa = 0.9, sc_fpr = 0.05;
  double sc_tol = 1e-5, sc_tau = 0.05;
  int sc_reps = 10, sc_sweeps = 1000, sc_grid = 100;
  bool sc_approx = false;
  std::uint64_t sc_seed = 1;
  scaling->add_option("--p", sc_p, "variables")->required();
  scaling->add_option("--n-ind", sc_n_ind, "individual-level sample size")->required();
  scaling->add_option("--n-test", sc_n_test, "held-out sample size")->required();
  scaling->add_option("--alpha", sc_alpha, "nonzero fraction")->required();
  scaling->add_option("--h2", sc_h2, "target heritability")->required();
  scaling->add_option("--block-size", sc_bs, "correlation block width")->required();
  scaling->add_option("--rho", sc_rho, "within-block AR(1) correlation")->required();
  scaling->add_option("--seed", sc_seed, "base seed");
  scaling->add_option("--n-list", sc_nlist, "comma-separated n values")->required();
  scaling->add_option("--nr-list", sc_nrlist, "comma-separated n_r values")->required();
  scaling->add_option("--reps", sc_reps, "replicates per cell (>= 10)");
  scaling->add_option("--method", sc_method, "remi-c | remi-r | lasso");
  scaling->add_option("--kappa", sc_kappa, "correlation shrinkage weight");
  scaling->add_option("--fpr-max", sc_fpr, "partial-AUC cutoff");
  scaling->add_flag("--approx-se", sc_approx, "polygenic standard-error approximation");
  scaling->add_option("--tol", sc_tol, "convergence threshold");
  scaling->add_option("--max-sweeps", sc_sweeps, "sweep cap per grid point");
  scaling->add_option("--grid-size", sc_grid, "number of grid points");
  scaling->add_option("--tau", sc_tau, "grid floor ratio");
  scaling->add_option("--out", sc_out, "output directory")->required();

  // ---- blocks ----
  auto* blocks = app.add_subcommand("blocks", "write a fixed-width block partition");
  long bl_p = 0, bl_bs = 0;
  std::string bl_out;
  blocks->add_option("--p", bl_p, "variables")->required();
  blocks->add_option("--block-size", bl_bs, "block width")->required();
  blocks->add_option("--out", bl_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  try {
    if (!manifest_path.empty()) return run_from_manifest(manifest_path, manifest_out);

    if (fit->parsed()) {
      json p = {{"method", fit_method},   {"summary", fit_summary},
                {"marginal", fit_marginal}, {"yty", fit_yty},
                {"panel", fit_panel},     {"x", fit_x},
                {"y", fit_y},             {"blocks", fit_blocks},
                {"block_size", fit_block_size}, {"kappa", fit_kappa},
                {"tol", fit_tol},         {"max_sweeps", fit_max_sweeps},
                {"grid_size", fit_grid},  {"tau", fit_tau},
                {"out", fit_out}};
      return cmd_fit(p);
    }
    if (select->parsed()) {
      json p = {{"path", sel_path}, {"p", sel_p}, {"n", sel_n},
                {"loss_scale", sel_scale}, {"out", sel_out}};
      return cmd_select(p);
    }
    if (simulate->parsed()) {
      json p;
      if (!sim_config.empty()) {
        std::ifstream in(sim_config);
        if (!in)
          throw remi::Error(remi::ErrorCode::IoFailure, "cannot open " + sim_config);
        p = json::parse(in);
        const std::set<std::string> scenario_keys = {
            "p", "n", "n_ind", "n_r", "n_test", "alpha", "h2", "block_size",
            "rho", "seed"};
        require_keys(p, scenario_keys, "simulate --config");
      } else {
        p = {{"p", sim_p},       {"n", sim_n},           {"n_ind", sim_n_ind},
             {"n_r", sim_n_r},   {"n_test", sim_n_test}, {"alpha", sim_alpha},
             {"h2", sim_h2},     {"block_size", sim_bs}, {"rho", sim_rho},
             {"seed", sim_seed}};
      }
      p["approx_se"] = sim_approx;
      p["text"] = sim_text;
      p["out"] = sim_out;
      return cmd_simulate(p);
    }
    if (evaluate->parsed()) {
      json p = {{"path", ev_path},     {"bic", ev_bic},       {"truth", ev_truth},
                {"x_test", ev_xtest},  {"y_test", ev_ytest},  {"fpr_max", ev_fpr},
                {"out", ev_out}};
      return cmd_evaluate(p);
    }
    if (scaling->parsed()) {
      json p = {{"p", sc_p},           {"n_ind", sc_n_ind},   {"n_test", sc_n_test},
                {"alpha", sc_alpha},   {"h2", sc_h2},         {"block_size", sc_bs},
                {"rho", sc_rho},       {"seed", sc_seed},     {"n_list", sc_nlist},
                {"nr_list", sc_nrlist}, {"reps", sc_reps},    {"method", sc_method},
                {"kappa", sc_kappa},   {"fpr_max", sc_fpr},   {"approx_se", sc_approx},
                {"tol", sc_tol},       {"max_sweeps", sc_sweeps},
                {"grid_size", sc_grid}, {"tau", sc_tau},      {"out", sc_out}};
      return cmd_scaling(p);
    }
    if (blocks->parsed()) {
      json p = {{"p", bl_p}, {"block_size", bl_bs}, {"out", bl_out}};
      return cmd_blocks(p);
    }
    std::cerr << app.help() << std::flush;
    return 1;
  } catch (const remi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
