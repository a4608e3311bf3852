#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "robavg/cli.hpp"
#include "robavg/rng.hpp"

using namespace robavg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Cleanup {
  std::vector<std::string> paths;
  ~Cleanup() {
    for (const auto& p : paths) std::remove(p.c_str());
  }
};

}  // namespace

TEST_CASE("parse_index_list handles singles and ranges, 1-based") {
  CHECK(cli::parse_index_list("21") == std::vector<int>{20});
  CHECK(cli::parse_index_list("1-3,7") == std::vector<int>{0, 1, 2, 6});
  CHECK(cli::parse_index_list("") == std::vector<int>{});
}

TEST_CASE("simulate: identical seeds give byte-identical tables") {
  Cleanup cleanup;
  cli::SimulateConfig cfg;
  cfg.setting = "B";
  cfg.sigma_values = {0.3};
  cfg.R = 3;
  cfg.seed = 7;
  cfg.method_labels = {"MMA", "MS_H"};
  cfg.output = "/tmp/robavg_cli_a.csv";
  cleanup.paths = {"/tmp/robavg_cli_a.csv", "/tmp/robavg_cli_a.se.csv",
                   "/tmp/robavg_cli_b.csv", "/tmp/robavg_cli_b.se.csv"};
  REQUIRE(cli::cmd_simulate(cfg) == 0);
  cfg.output = "/tmp/robavg_cli_b.csv";
  REQUIRE(cli::cmd_simulate(cfg) == 0);
  CHECK(slurp("/tmp/robavg_cli_a.csv") == slurp("/tmp/robavg_cli_b.csv"));
  CHECK(slurp("/tmp/robavg_cli_a.se.csv") == slurp("/tmp/robavg_cli_b.se.csv"));
  // config echo lands in the header
  CHECK(slurp("/tmp/robavg_cli_a.csv").find("# robavg simulate") == 0);
}

TEST_CASE("simulate: unknown method label exits 2 and names it") {
  cli::SimulateConfig cfg;
  cfg.method_labels = {"NOPE"};
  cfg.output = "/tmp/robavg_cli_never.csv";
  CHECK(cli::cmd_simulate(cfg) == 2);
}

TEST_CASE("simulate: bad setting or R rejected") {
  cli::SimulateConfig cfg;
  cfg.setting = "C";
  cfg.output = "/tmp/robavg_cli_never.csv";
  CHECK(cli::cmd_simulate(cfg) == 2);
  cfg.setting = "A";
  cfg.R = 0;
  CHECK(cli::cmd_simulate(cfg) == 2);
}

TEST_CASE("evaluate: stackloss table layout") {
  Cleanup cleanup;
  cli::EvaluateConfig cfg;
  cfg.dataset = "stackloss";
  cfg.method_labels = {"MMA", "MS_A"};
  cfg.output = "/tmp/robavg_cli_eval.csv";
  cleanup.paths = {"/tmp/robavg_cli_eval.csv", "/tmp/robavg_cli_eval.se.csv"};
  REQUIRE(cli::cmd_evaluate(cfg) == 0);
  const std::string content = slurp(cfg.output);
  CHECK(content.find("dataset,n,n_outliers,MMA,MS_A") != std::string::npos);
  CHECK(content.find("stackloss,21,1,") != std::string::npos);
}

TEST_CASE("evaluate: unknown dataset exits 2") {
  cli::EvaluateConfig cfg;
  cfg.dataset = "unknown";
  cfg.output = "/tmp/robavg_cli_never.csv";
  CHECK(cli::cmd_evaluate(cfg) == 2);
}

TEST_CASE("fit: exact full model takes nearly all MMA weight") {
  Cleanup cleanup;
  // y = x1 + x2 exactly: only the full model reproduces it
  Rng rng(501);
  std::string csv = "y,x1,x2\n";
  for (int i = 0; i < 30; ++i) {
    const double x1 = rng.uniform(-2.0, 2.0);
    const double x2 = rng.uniform(-2.0, 2.0);
    char line[120];
    std::snprintf(line, sizeof(line), "%.12f,%.12f,%.12f\n", x1 + x2, x1, x2);
    csv += line;
  }
  {
    std::ofstream out("/tmp/robavg_cli_fitdata.csv");
    out << csv;
  }
  cli::FitConfig cfg;
  cfg.dataset = "csv:/tmp/robavg_cli_fitdata.csv";
  cfg.response_column = "y";
  cfg.method_label = "MMA";
  cfg.output = "/tmp/robavg_cli_fit.csv";
  cleanup.paths = {"/tmp/robavg_cli_fitdata.csv", "/tmp/robavg_cli_fit.csv"};
  REQUIRE(cli::cmd_fit(cfg) == 0);
  const std::string content = slurp(cfg.output);
  CHECK(content.find("kind,averaging") != std::string::npos);

  // parse the weight table: lines "m,k,w"; the full model is id 3 (k=3)
  double full_weight = -1.0, weight_sum = -1.0;
  std::stringstream ss(content);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("3,3,", 0) == 0) full_weight = std::stod(line.substr(4));
    if (line.rfind("weight_sum,", 0) == 0) weight_sum = std::stod(line.substr(11));
  }
  CHECK(full_weight >= 0.99);
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("fit: selection methods report exactly one chosen model") {
  Cleanup cleanup;
  cli::FitConfig cfg;
  cfg.dataset = "hald";
  cfg.method_label = "MS_H";
  cfg.output = "/tmp/robavg_cli_fit_sel.csv";
  cleanup.paths = {"/tmp/robavg_cli_fit_sel.csv"};
  REQUIRE(cli::cmd_fit(cfg) == 0);
  const std::string content = slurp(cfg.output);
  CHECK(content.find("kind,selection") != std::string::npos);
  int chosen_lines = 0;
  std::stringstream ss(content);
  std::string line;
  while (std::getline(ss, line))
    if (line.rfind("chosen,", 0) == 0) ++chosen_lines;
  CHECK(chosen_lines == 1);
}

TEST_CASE("fit: unknown method exits 2") {
  cli::FitConfig cfg;
  cfg.dataset = "hald";
  cfg.method_label = "XX";
  cfg.output = "/tmp/robavg_cli_never.csv";
  CHECK(cli::cmd_fit(cfg) == 2);
}
