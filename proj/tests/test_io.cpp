#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include "remi/fit.hpp"
#include "remi/io.hpp"
#include "remi/report_io.hpp"
#include "remi/rng.hpp"
#include "remi/simulate.hpp"

using namespace remi;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("remi_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(REMI_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

MatrixXd random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal() * std::exp(4.0 * rng.uniform() - 2.0);
  return m;
}

}  // namespace

TEST_CASE("summary file round trip and error paths") {
  TempDir dir;
  SECTION("round trip") {
    SummaryStats s;
    s.n = 512;
    s.beta_m = VectorXd(3);
    s.beta_m << 0.25, -1.75, 3e-9;
    s.s2 = VectorXd(3);
    s.s2 << 0.5, 0.03125, 1.0;
    const std::string path = dir.file("summary.tsv");
    write_summary_file(path, s);
    const SummaryStats back = parse_summary_file(path);
    CHECK(back.n == s.n);
    CHECK(back.beta_m == s.beta_m);  // exact decimal round trip
    for (Index j = 0; j < 3; ++j)
      CHECK(back.s2[j] == Catch::Approx(s.s2[j]).epsilon(1e-15));
  }
  SECTION("two valid rows parse") {
    const std::string path = dir.file("ok.tsv");
    std::ofstream(path) << "id\tbeta\tse\tn\nrs1\t0.5\t0.1\t100\nrs2\t-0.25\t0.2\t100\n";
    const SummaryStats s = parse_summary_file(path);
    CHECK(s.size() == 2);
    CHECK(s.beta_m[1] == -0.25);
    CHECK(s.s2[0] == Catch::Approx(0.01).epsilon(1e-15));
  }
  SECTION("zero standard error is rejected with its line") {
    const std::string path = dir.file("zero_se.tsv");
    std::ofstream(path) << "id\tbeta\tse\tn\nrs1\t0.5\t0.1\t100\nrs2\t0.1\t0\t100\n";
    try {
      parse_summary_file(path);
      FAIL("expected NonPositiveSE");
    } catch (const Error& e) {
      CHECK(e.code == ErrorCode::NonPositiveSE);
      CHECK(e.index == 3);
    }
  }
  SECTION("mixed n is rejected") {
    const std::string path = dir.file("mixed_n.tsv");
    std::ofstream(path) << "id\tbeta\tse\tn\nrs1\t0.5\t0.1\t100\nrs2\t0.1\t0.2\t200\n";
    try {
      parse_summary_file(path);
      FAIL("expected InconsistentN");
    } catch (const Error& e) {
      CHECK(e.code == ErrorCode::InconsistentN);
    }
  }
  SECTION("short row is rejected") {
    const std::string path = dir.file("short.tsv");
    std::ofstream(path) << "id\tbeta\tse\tn\nrs1\t0.5\t0.1\n";
    try {
      parse_summary_file(path);
      FAIL("expected MalformedRow");
    } catch (const Error& e) {
      CHECK(e.code == ErrorCode::MalformedRow);
    }
  }
}

TEST_CASE("matrix containers") {
  TempDir dir;
  const MatrixXd m = random_matrix(7, 4, 99);
  SECTION("binary round trip is bit exact") {
    const std::string path = dir.file("m.bin");
    write_matrix_binary(path, m);
    CHECK(parse_matrix_file(path) == m);
  }
  SECTION("text and binary agree bitwise") {
    const std::string tpath = dir.file("m.txt");
    const std::string bpath = dir.file("m.bin");
    write_matrix_text(tpath, m);
    write_matrix_binary(bpath, m);
    CHECK(parse_matrix_file(tpath) == parse_matrix_file(bpath));
  }
  SECTION("2x2 text file") {
    const std::string path = dir.file("small.txt");
    std::ofstream(path) << "1.5 -2\n0.25 1e3\n";
    const MatrixXd small = parse_matrix_file(path);
    REQUIRE(small.rows() == 2);
    CHECK(small(0, 1) == -2.0);
    CHECK(small(1, 1) == 1000.0);
  }
  SECTION("ragged rows are rejected") {
    const std::string path = dir.file("ragged.txt");
    std::ofstream(path) << "1 2\n3 4 5\n";
    try {
      parse_matrix_file(path);
      FAIL("expected RaggedRows");
    } catch (const Error& e) {
      CHECK(e.code == ErrorCode::RaggedRows);
      CHECK(e.index == 2);
    }
  }
  SECTION("truncated binary payload is rejected") {
    const std::string path = dir.file("trunc.bin");
    write_matrix_binary(path, m);
    const std::string full = slurp(path);
    std::ofstream(path, std::ios::binary)
        << full.substr(0, full.size() - 11);
    try {
      parse_matrix_file(path);
      FAIL("expected TruncatedPayload");
    } catch (const Error& e) {
      CHECK(e.code == ErrorCode::TruncatedPayload);
    }
  }
  SECTION("wrong container version is rejected") {
    const std::string path = dir.file("magic.bin");
    std::ofstream(path, std::ios::binary) << "REMI2aaaaaaaaaaaaaaaa";
    try {
      parse_matrix_file(path);
      FAIL("expected BadMagic");
    } catch (const Error& e) {
      CHECK(e.code == ErrorCode::BadMagic);
    }
  }
}

TEST_CASE("partition file round trip") {
  TempDir dir;
  const BlockPartition part = BlockPartition::fixed_width(23, 5);
  const std::string path = dir.file("blocks.txt");
  write_partition_file(path, part);
  const BlockPartition back = parse_partition_file(path);
  REQUIRE(back.count() == part.count());
  for (std::size_t b = 0; b < part.count(); ++b) {
    CHECK(back.blocks[b].start == part.blocks[b].start);
    CHECK(back.blocks[b].end == part.blocks[b].end);
  }
  // invalid cover is rejected at parse time
  std::ofstream(path) << "0 3\n4 6\n";
  CHECK_THROWS_AS(parse_partition_file(path), Error);
}

TEST_CASE("effects file round trip") {
  TempDir dir;
  SparseCoefs beta;
  beta.p = 40;
  beta.index = {3, 17, 39};
  beta.value = {0.5, -1.25, 2e-7};
  const std::string path = dir.file("beta.tsv");
  write_effects_file(path, beta);
  const SparseCoefs back = parse_effects_file(path);
  CHECK(back.p == beta.p);
  CHECK(back.index == beta.index);
  CHECK(back.value == beta.value);
}

TEST_CASE("path and bic files round trip") {
  TempDir dir;
  CoefficientPath path;
  path.lambdas = VectorXd(3);
  path.lambdas << 2.0, 1.0, 0.5;
  path.objective = VectorXd(3);
  path.objective << 0.0, -0.625, -1.375;
  path.coefs.resize(3);
  for (auto& c : path.coefs) c.p = 6;
  path.coefs[1].index = {2};
  path.coefs[1].value = {0.125};
  path.coefs[2].index = {2, 5};
  path.coefs[2].value = {0.25, -0.75};
  path.df = {0, 1, 2};
  path.converged = {1, 1, 0};

  const std::string ppath = dir.file("path.csv");
  write_path_file(ppath, path);
  const CoefficientPath back = parse_path_file(ppath, 6);
  CHECK(back.lambdas == path.lambdas);
  CHECK(back.objective == path.objective);
  CHECK(back.df == path.df);
  CHECK(back.converged == path.converged);
  for (Index l = 0; l < 3; ++l) {
    CHECK(back.coefs[l].index == path.coefs[l].index);
    CHECK(back.coefs[l].value == path.coefs[l].value);
  }

  const BicTable table = bic_select(path, 100);
  const std::string bpath = dir.file("bic.csv");
  write_bic_file(bpath, table);
  const BicTable tback = parse_bic_file(bpath);
  CHECK(tback.lambdas == table.lambdas);
  CHECK(tback.loss == table.loss);
  CHECK(tback.bic == table.bic);
  CHECK(tback.chosen == table.chosen);
}

TEST_CASE("writer-parser closed loop on random objects") {
  TempDir dir;
  Rng rng(314);
  for (int t = 0; t < 25; ++t) {
    const Index p = 1 + static_cast<Index>(rng.uniform_below(12));
    SummaryStats s;
    s.n = 2 + static_cast<long>(rng.uniform_below(100000));
    s.beta_m.resize(p);
    s.s2.resize(p);
    for (Index j = 0; j < p; ++j) {
      s.beta_m[j] = rng.normal() * std::exp(6.0 * rng.uniform() - 3.0);
      s.s2[j] = std::exp(8.0 * rng.uniform() - 6.0);
    }
    const std::string path = dir.file("fuzz.tsv");
    write_summary_file(path, s);
    const SummaryStats back = parse_summary_file(path);
    REQUIRE(validate(back).ok());
    CHECK(back.beta_m == s.beta_m);
    for (Index j = 0; j < p; ++j)
      CHECK(back.s2[j] == Catch::Approx(s.s2[j]).epsilon(1e-15));

    const MatrixXd m = random_matrix(1 + rng.uniform_below(9),
                                     1 + rng.uniform_below(9), 1000 + t);
    write_matrix_text(dir.file("fuzz.txt"), m);
    write_matrix_binary(dir.file("fuzz.bin"), m);
    CHECK(parse_matrix_file(dir.file("fuzz.txt")) == m);
    CHECK(parse_matrix_file(dir.file("fuzz.bin")) == m);
  }
}

TEST_CASE("cli: missing required flag exits 1 with usage") {
  CHECK(run_cli("fit --method remi-r") == 1);
  CHECK(run_cli("definitely-not-a-command") == 1);
}

TEST_CASE("cli: simulate then fit reproduces the in-process pipeline bitwise") {
  TempDir dir;
  const std::string sim_dir = dir.file("sim");
  const std::string fit_dir = dir.file("fit");
  REQUIRE(run_cli("simulate --p 60 --n 500 --n-ind 120 --n-r 100 --n-test 50"
                  " --alpha 0.1 --h2 0.5 --block-size 20 --rho 0.3 --seed 99"
                  " --out " + sim_dir) == 0);
  REQUIRE(run_cli("fit --method remi-r --summary " + sim_dir + "/summary.tsv" +
                  " --panel " + sim_dir + "/panel.bin --blocks " + sim_dir +
                  "/blocks.txt --out " + fit_dir) == 0);

  // in-process: parse the same artifacts and run the same pipeline
  FitInputs in;
  in.method = Method::RemiR;
  in.summary = parse_summary_file(sim_dir + "/summary.tsv");
  in.panel = standardize(parse_matrix_file(sim_dir + "/panel.bin"));
  in.partition = parse_partition_file(sim_dir + "/blocks.txt");
  const FitOutput fit = run_fit(std::move(in), SolverConfig{});

  const CoefficientPath cli_path = parse_path_file(fit_dir + "/path.csv", 60);
  REQUIRE(cli_path.size() == fit.path.size());
  for (Index l = 0; l < fit.path.size(); ++l) {
    CHECK(cli_path.lambdas[l] == fit.path.lambdas[l]);
    CHECK(cli_path.coefs[l].index == fit.path.coefs[l].index);
    CHECK(cli_path.coefs[l].value == fit.path.coefs[l].value);
    CHECK(cli_path.objective[l] == fit.path.objective[l]);
  }
  const BicTable cli_bic = parse_bic_file(fit_dir + "/bic.csv");
  CHECK(cli_bic.chosen == fit.bic.chosen);
  CHECK(cli_bic.bic == fit.bic.bic);
}

TEST_CASE("cli: covariance-form and lasso fits run end to end") {
  TempDir dir;
  const std::string sim_dir = dir.file("sim");
  REQUIRE(run_cli("simulate --p 50 --n 400 --n-ind 150 --n-r 80 --n-test 40"
                  " --alpha 0.1 --h2 0.5 --block-size 10 --rho 0.3 --seed 21"
                  " --out " + sim_dir) == 0);

  const std::string remi_c = dir.file("fit_c");
  REQUIRE(run_cli("fit --method remi-c --marginal " + sim_dir + "/marginal.tsv" +
                  " --panel " + sim_dir + "/panel.bin --block-size 10 --yty 800"
                  " --out " + remi_c) == 0);
  const CoefficientPath path_c = parse_path_file(remi_c + "/path.csv", 50);
  CHECK(path_c.size() == 100);
  CHECK(path_c.all_converged());

  const std::string lasso = dir.file("fit_l");
  REQUIRE(run_cli("fit --method lasso --x " + sim_dir + "/x_ind.bin --y " +
                  sim_dir + "/y_ind.bin --out " + lasso) == 0);
  const BicTable bic_l = parse_bic_file(lasso + "/bic.csv");
  CHECK(bic_l.df[bic_l.chosen] > 0);  // n/p = 3: the empty model never wins
}

TEST_CASE("cli: simulate accepts a scenario config file") {
  TempDir dir;
  const std::string cfg = dir.file("scenario.json");
  std::ofstream(cfg) << R"({"p":30,"n":200,"n_ind":60,"n_r":50,"n_test":40,)"
                     << R"("alpha":0.1,"h2":0.5,"block_size":10,"rho":0.2,"seed":5})";
  const std::string from_cfg = dir.file("from_cfg");
  const std::string from_flags = dir.file("from_flags");
  REQUIRE(run_cli("simulate --config " + cfg + " --out " + from_cfg) == 0);
  REQUIRE(run_cli("simulate --p 30 --n 200 --n-ind 60 --n-r 50 --n-test 40"
                  " --alpha 0.1 --h2 0.5 --block-size 10 --rho 0.2 --seed 5"
                  " --out " + from_flags) == 0);
  CHECK(slurp(from_cfg + "/summary.tsv") == slurp(from_flags + "/summary.tsv"));
  CHECK(slurp(from_cfg + "/panel.bin") == slurp(from_flags + "/panel.bin"));

  // unknown scenario keys are rejected
  std::ofstream(cfg) << R"({"p":30,"n":200,"n_ind":60,"n_r":50,"n_test":40,)"
                     << R"("alpha":0.1,"h2":0.5,"block_size":10,"rho":0.2,)"
                     << R"("seed":5,"extra":1})";
  CHECK(run_cli("simulate --config " + cfg + " --out " + dir.file("bad")) == 1);
}

TEST_CASE("cli: manifest reruns are byte-identical across thread counts") {
  TempDir dir;
  const std::string sim_dir = dir.file("sim");
  REQUIRE(run_cli("simulate --p 40 --n 300 --n-ind 80 --n-r 60 --n-test 40"
                  " --alpha 0.1 --h2 0.4 --block-size 10 --rho 0.2 --seed 123"
                  " --out " + sim_dir) == 0);

  const std::string fit_a = dir.file("fit_a");
  const std::string fit_b = dir.file("fit_b");
  REQUIRE(run_cli("fit --method remi-r --summary " + sim_dir + "/summary.tsv" +
                  " --panel " + sim_dir + "/panel.bin --block-size 10 --out " +
                  fit_a) == 0);

  setenv("REMI_THREADS", "3", 1);
  const int rc = run_cli("--manifest " + fit_a + "/manifest.json --out " + fit_b);
  unsetenv("REMI_THREADS");
  REQUIRE(rc == 0);

  CHECK(slurp(fit_a + "/path.csv") == slurp(fit_b + "/path.csv"));
  CHECK(slurp(fit_a + "/bic.csv") == slurp(fit_b + "/bic.csv"));
}

TEST_CASE("cli: unconverged grid points exit 2 and are flagged in the file") {
  TempDir dir;
  const std::string sim_dir = dir.file("sim");
  REQUIRE(run_cli("simulate --p 40 --n 400 --n-ind 80 --n-r 60 --n-test 40"
                  " --alpha 0.2 --h2 0.5 --block-size 40 --rho 0.8 --seed 7"
                  " --out " + sim_dir) == 0);
  const std::string fit_dir = dir.file("fit");
  const int rc = run_cli("fit --method remi-r --summary " + sim_dir +
                         "/summary.tsv --panel " + sim_dir +
                         "/panel.bin --block-size 40 --max-sweeps 1 --out " + fit_dir);
  CHECK(rc == 2);
  const std::string text = slurp(fit_dir + "/path.csv");
  CHECK(text.find("false") != std::string::npos);
}

TEST_CASE("cli: evaluate and blocks commands produce their artifacts") {
  TempDir dir;
  const std::string sim_dir = dir.file("sim");
  const std::string fit_dir = dir.file("fit");
  const std::string eval_dir = dir.file("eval");
  REQUIRE(run_cli("simulate --p 60 --n 2000 --n-ind 200 --n-r 100 --n-test 80"
                  " --alpha 0.1 --h2 0.5 --block-size 20 --rho 0.3 --seed 55"
                  " --out " + sim_dir) == 0);
  REQUIRE(run_cli("fit --method remi-r --summary " + sim_dir + "/summary.tsv" +
                  " --panel " + sim_dir + "/panel.bin --blocks " + sim_dir +
                  "/blocks.txt --out " + fit_dir) == 0);
  REQUIRE(run_cli("evaluate --path " + fit_dir + "/path.csv --bic " + fit_dir +
                  "/bic.csv --truth " + sim_dir + "/beta_true.tsv --x-test " +
                  sim_dir + "/x_test.bin --y-test " + sim_dir +
                  "/y_test.bin --out " + eval_dir) == 0);
  const std::string eval_text = slurp(eval_dir + "/eval.csv");
  CHECK(eval_text.find("partial_auc") != std::string::npos);

  const std::string blocks_dir = dir.file("blocks");
  REQUIRE(run_cli("blocks --p 23 --block-size 5 --out " + blocks_dir) == 0);
  const BlockPartition part = parse_partition_file(blocks_dir + "/blocks.txt");
  CHECK(part.p() == 23);
  CHECK(part.blocks.size() == 5);
}

TEST_CASE("cli: select recomputes a bic table from a path file") {
  TempDir dir;
  CoefficientPath path;
  path.lambdas = VectorXd(2);
  path.lambdas << 1.0, 0.25;
  path.objective = VectorXd(2);
  path.objective << 0.0, -25.0;
  path.coefs.resize(2);
  path.coefs[0].p = 4;
  path.coefs[1].p = 4;
  path.coefs[1].index = {1};
  path.coefs[1].value = {0.5};
  path.df = {0, 1};
  path.converged = {1, 1};
  const std::string ppath = dir.file("path.csv");
  write_path_file(ppath, path);

  const std::string out = dir.file("sel");
  REQUIRE(run_cli("select --path " + ppath + " --p 4 --n 100 --out " + out) == 0);
  const BicTable table = parse_bic_file(out + "/bic.csv");
  CHECK(table.chosen == 1);  // -25 + ln(100) < 0
}

TEST_CASE("manifest rejects unknown keys") {
  TempDir dir;
  const std::string mpath = dir.file("manifest.json");
  std::ofstream(mpath) << "{\"format_version\":1,\"command\":\"blocks\","
                          "\"params\":{\"p\":10,\"block_size\":2,\"out\":\"" +
                              dir.file("out") + "\",\"bogus\":3}}";
  CHECK(run_cli("--manifest " + mpath) == 1);
}
