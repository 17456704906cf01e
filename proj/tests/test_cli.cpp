// Copyright 2026 The kpoqcr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(KPOQCR_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

int run_stderr(const std::string& args, std::string& err) {
  const std::string cmd = std::string(KPOQCR_CLI_PATH) + " " + args + " 2>&1 >/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) err.append(buf, n);
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// CSV lines without the '#' parameter echo.
std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage and config errors") {
    CHECK(run("--help").code == 0);
    CHECK(run("").code == 2);
    CHECK(run("pq --set system.bogus=1").code == 2);
    CHECK(run("pq --set system.n_keep=1").code == 2);
    CHECK(run("pq --config /nonexistent/kpoqcr.json").code == 2);
    CHECK(run("pq --interference maybe").code == 2);
    CHECK(run("rates --set 'transitions=[\"g1_9_9_9\"]'").code == 2);
    CHECK(run("pq --out /nonexistent/dir/out.csv").code == 2);
  }

  TEST_CASE("single-point rate sweep emits one row with the parameter echo") {
    const Run r = run("rates --set system.bias_v_ghz=45");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# system.bias_v = 45000000000.0") != std::string::npos);
    CHECK(r.out.find("# system.rho_c = 5e-05") != std::string::npos);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].find("g1_1_1_2_2") != std::string::npos);
    const auto row = fields(lines[1]);
    CHECK(row[0] == 45e9);
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] >= 0.0);
  }

  TEST_CASE("outputs are deterministic") {
    const std::string args = "rates --sweep voltage --from 40e9 --to 46e9 --points 3";
    const Run a = run(args);
    const Run b = run(args + " --threads 1");
    REQUIRE(a.code == 0);
    CHECK(data_lines(a.out).size() == 4);
    // The thread count is echoed, so compare the data only.
    CHECK(data_lines(a.out) == data_lines(b.out));
    CHECK(run(args).out == a.out);
  }

  TEST_CASE("config file and flag overrides") {
    const auto path = std::filesystem::temp_directory_path() / "kpoqcr_cli_test.json";
    {
      std::ofstream f(path);
      f << R"({"system": {"bias_v_ghz": 30, "kappa": 1000.0}, "sweep": {"points": 1}})";
    }
    const Run a = run("pq --config " + path.string());
    REQUIRE(a.code == 0);
    CHECK(a.out.find("# system.bias_v = 30000000000.0") != std::string::npos);
    CHECK(a.out.find("# system.kappa = 1000.0") != std::string::npos);
    const Run b = run("pq --config " + path.string() + " --set system.bias_v_ghz=20");
    CHECK(b.out.find("# system.bias_v = 20000000000.0") != std::string::npos);
    {
      std::ofstream f(path);
      f << R"({"system": {"kapa": 1000.0}})";
    }
    CHECK(run("pq --config " + path.string()).code == 2);
    std::filesystem::remove(path);
  }

  TEST_CASE("charge distribution output") {
    const Run r = run("pq");
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() > 3);
    double total = 0.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) rows.push_back(fields(lines[i]));
    for (const auto& row : rows) total += row[2];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i][1] == -rows[rows.size() - 1 - i][1]);
      CHECK(rows[i][2] == doctest::Approx(rows[rows.size() - 1 - i][2]).epsilon(1e-12));
    }
  }

  TEST_CASE("empty time grid gives a header only") {
    const Run r = run("dynamics");
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].rfind("t_s,qcr_active,p0", 0) == 0);
  }

  TEST_CASE("dynamics reports the switch-on") {
    const Run r = run(
        "dynamics --set system.bias_v_ghz=45 --set dynamics.t_end_us=200 --set dynamics.t_points=3 "
        "--set dynamics.t_qcr_on_us=100 --set dynamics.initial=state:4");
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(fields(lines[1])[1] == 0.0);
    CHECK(fields(lines[3])[1] == 1.0);
  }

  TEST_CASE("undamped steady state is a documented error") {
    std::string err;
    const int code =
        run_stderr("steady --set system.kappa=0 --set system.gamma_p=0 --set qcr=false", err);
    CHECK(code == 3);
    CHECK(err.find("no unique stationary state") != std::string::npos);
  }

  TEST_CASE("validate exit code follows the reports") {
    const Run r = run("validate --json");
    const nlohmann::json j = nlohmann::json::parse(r.out);
    bool all = true;
    for (const auto& rep : j.at("reports")) all = all && rep.at("pass").get<bool>();
    CHECK(j.at("all_pass").get<bool>() == all);
    CHECK(r.code == (all ? 0 : 4));

    // Corrupted tolerances force a failure.
    const Run bad = run("validate --set tolerance_scale=0");
    CHECK(bad.code == 4);
    CHECK(bad.out.find(",0\n") != std::string::npos);
  }

  TEST_CASE("json table output") {
    const Run r = run("pq --json");
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.contains("columns"));
    CHECK(j.contains("rows"));
    CHECK(j.at("command") == "pq");
    CHECK(j.contains("comments"));
  }

  TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "kpoqcr_cli_out.csv";
    CHECK(run("pq --out " + path.string()).code == 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    // The echo records the output path, so compare the data only.
    CHECK(ss.str().find("# out = \"" + path.string() + "\"") != std::string::npos);
    CHECK(data_lines(ss.str()) == data_lines(run("pq").out));
    std::filesystem::remove(path);
  }
}
