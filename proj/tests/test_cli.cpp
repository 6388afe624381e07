#include <doctest.h>

#include "scalerk/cli.hpp"
#include "scalerk/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace scalerk;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string without_comments(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line))
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

struct TrajectoryRow {
  int step;
  double t;
  double norm;
};

std::vector<TrajectoryRow> read_trajectory(const std::string& path) {
  std::ifstream is(path);
  std::vector<TrajectoryRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      CHECK(line == "step,t,y_norm,iterations");
      header = true;
      continue;
    }
    TrajectoryRow r{};
    char c;
    std::istringstream ls(line);
    ls >> r.step >> c >> r.t >> c >> r.norm;
    rows.push_back(r);
  }
  return rows;
}

const std::vector<std::string> kSmallProblem{"--problem.N", "32"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("check-tableau") {
  const auto mid = run({"check-tableau", "--name", "midpoint"});
  CHECK(mid.code == kExitOk);

  const auto g3 = run({"check-tableau", "--name", "gauss3"});
  CHECK(g3.code == kExitOk);
  CHECK(g3.out.find("p=6") != std::string::npos);

  const auto euler = run({"check-tableau", "--tableau.a", "0", "--tableau.b", "1"});
  CHECK(euler.code == kExitCheckFailed);
  CHECK(euler.out.find("alpha singular") != std::string::npos);

  CHECK(run({"check-tableau", "--name", "nonsense"}).code == kExitConfigError);
}

TEST_CASE("configuration errors exit with code 2") {
  CHECK(run({"study", "--no.such.key", "1"}).code == kExitConfigError);
  CHECK(run({"study", "--study.h_list", ""}).code == kExitConfigError);
  CHECK(run({"bounds", "--bounds.eps", "1.5"}).code == kExitConfigError);
  CHECK(run({"integrate", "--integrate.h", "0"}).code == kExitConfigError);
  CHECK(run({"integrate", "--problem.N", "31"}).code == kExitConfigError);
  CHECK(run({"integrate", "--config", "does-not-exist.cfg"}).code == kExitConfigError);
  CHECK(run({"frobnicate"}).code == kExitConfigError);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("bounds with defaults") {
  const auto r = run({"bounds"});
  CHECK(r.code == kExitOk);
  CHECK_FALSE(r.out.empty());
}

TEST_CASE("integrate with zero steps writes the initial state only") {
  const auto r = run(with({"integrate", "--integrate.steps", "0", "--integrate.ell", "0", "--output.trajectory", "cli_zero.csv"}, kSmallProblem));
  REQUIRE(r.code == kExitOk);
  const auto rows = read_trajectory("cli_zero.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].step == 0);
  CHECK(rows[0].t == 0.0);
  CHECK(rows[0].norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("linear Schroedinger flow preserves the norm under Gauss methods") {
  const auto r = run(with({"integrate", "--problem.kind", "nls", "--problem.potential", "", "--name", "gauss2",
                           "--integrate.steps", "20", "--integrate.h", "0.05", "--output.trajectory", "cli_nls.csv"},
                          kSmallProblem));
  REQUIRE(r.code == kExitOk);
  const auto rows = read_trajectory("cli_nls.csv");
  REQUIRE(rows.size() == 21);
  for (const auto& row : rows) CHECK(std::abs(row.norm - rows[0].norm) <= 1e-12);
}

TEST_CASE("default integration") {
  const auto r = run(with({"integrate", "--integrate.h", "0.05", "--integrate.steps", "10", "--output.trajectory",
                           "cli_default.csv", "--output.coeffs", "cli_coeffs.csv"},
                          kSmallProblem));
  REQUIRE(r.code == kExitOk);
  const auto rows = read_trajectory("cli_default.csv");
  REQUIRE(rows.size() == 11);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    CHECK(rows[n].step == int(n));
    CHECK(rows[n].t == doctest::Approx(0.05 * n));
    CHECK(std::isfinite(rows[n].norm));
  }
  const auto coeffs = slurp("cli_coeffs.csv");
  CHECK(coeffs.find("step,t,component,k,re,im") != std::string::npos);
}

TEST_CASE("stage solver failures exit with code 1") {
  const auto r = run(with({"integrate", "--solver.max_iter", "1", "--integrate.h", "0.1", "--integrate.steps", "3",
                           "--output.trajectory", "cli_fail.csv"},
                          kSmallProblem));
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.err.find("step 1") != std::string::npos);
}

TEST_CASE("configuration round trip") {
  const auto first = run(with({"integrate", "--integrate.steps", "4", "--integrate.h", "0.1", "--name", "gauss2",
                               "--output.trajectory", "cli_rt_a.csv", "--output.config", "cli_rt.cfg"},
                              kSmallProblem));
  REQUIRE(first.code == kExitOk);
  const auto second = run({"integrate", "--config", "cli_rt.cfg", "--output.trajectory", "cli_rt_a2.csv", "--output.config", ""});
  REQUIRE(second.code == kExitOk);
  const auto a = read_trajectory("cli_rt_a.csv");
  const auto b = read_trajectory("cli_rt_a2.csv");
  REQUIRE(a.size() == b.size());
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(a[n].norm == b[n].norm);

  Config cfg;
  cfg.load_file("cli_rt.cfg");
  CHECK(cfg.get("tableau.name") == "gauss2");
  CHECK(cfg.get("problem.N") == "32");
  CHECK(slurp("cli_rt_a.csv").find("config_hash=" + cfg.hash()) != std::string::npos);
}

TEST_CASE("study outputs carry header and schema") {
  const auto r = run({"study", "--problem.N", "32", "--study.ells", "1,2", "--study.h_list", "0.1,0.05",
                      "--study.h_list_ell0", "0.1,0.05", "--study.threads", "1", "--output.csv", "cli_study.csv",
                      "--output.json", "cli_study.json", "--output.plot", "cli_study.dat"});
  REQUIRE(r.code == kExitOk);
  const auto csv = slurp("cli_study.csv");
  CHECK(csv.rfind("# scalerk ", 0) == 0);
  CHECK(csv.find("config_hash=") != std::string::npos);
  CHECK(csv.find("ell,h,n_steps,err_max,err_final,q_est,q_pred,fit_residual,solver_iters_mean") != std::string::npos);
  const auto json = slurp("cli_study.json");
  for (const char* key : {"\"tool\"", "\"version\"", "\"config_hash\"", "\"rows\"", "\"orders\"", "\"tableau\""})
    CHECK(json.find(key) != std::string::npos);
  CHECK(slurp("cli_study.dat").find("\n\n\n") != std::string::npos);
  CHECK(r.out.find("q_est") != std::string::npos);

  const auto again = run({"study", "--problem.N", "32", "--study.ells", "1,2", "--study.h_list", "0.1,0.05",
                          "--study.h_list_ell0", "0.1,0.05", "--study.threads", "1", "--output.csv", "cli_study2.csv",
                          "--output.json", "", "--output.plot", ""});
  REQUIRE(again.code == kExitOk);
  CHECK(without_comments(slurp("cli_study2.csv")) == without_comments(csv));
}

TEST_CASE("project subcommand") {
  const auto r = run({"project", "--problem.N", "64", "--project.ells", "1", "--project.m_list", "4,8,16",
                      "--project.h", "0.05", "--project.h_ref", "0.01", "--output.project", "cli_project.csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(slurp("cli_project.csv").find("ell,kind,m,error,slope,fit_residual") != std::string::npos);
  CHECK(run({"project", "--project.m_list", "8"}).code == kExitConfigError);
}
