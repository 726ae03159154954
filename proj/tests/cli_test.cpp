// Copyright 2026 The cqca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "commands.hpp"

using namespace cqca;
using namespace cqca::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / ("cqca_cli_" + std::string(info->test_suite_name()) + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CQCA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig heat_config(const fs::path& out, std::uint64_t n, std::uint64_t t) {
  RunConfig c;
  c.modulus = n;
  c.half_width = static_cast<std::int64_t>(t);
  c.horizon = t;
  c.out_dir = out;
  return c;
}

}  // namespace

TEST(Heatmap, N2PgmIsBinaryAndCsvRoundTrips) {
  TempDir dir;
  std::ostringstream log;
  ASSERT_EQ(cmd_heatmap(heat_config(dir.path(), 2, 40), log), kSuccess);

  const auto pgm = lines(dir.path() / "heatmap.pgm");
  ASSERT_GE(pgm.size(), 3u);
  EXPECT_EQ(pgm[0], "P2");
  EXPECT_EQ(pgm[1], "81 41");
  EXPECT_EQ(pgm[2], "255");
  std::set<std::string> pixels;
  std::size_t count = 0;
  for (std::size_t i = 3; i < pgm.size(); ++i) {
    EXPECT_LE(pgm[i].size(), 70u);
    for (const auto& px : split(pgm[i], ' ')) {
      pixels.insert(px);
      ++count;
    }
  }
  EXPECT_EQ(count, 81u * 41u);
  EXPECT_EQ(pixels, (std::set<std::string>{"0", "255"}));

  const auto csv = lines(dir.path() / "heatmap.csv");
  ASSERT_EQ(csv.size(), 42u);
  const auto header = split(csv[0], ',');
  ASSERT_EQ(header.size(), 82u);
  EXPECT_EQ(header[1], "-40");
  EXPECT_EQ(header[81], "40");
  const auto h = heat_map(paper_rule(2), Insertion(1, 0), Insertion(1, 0), 40, 40);
  for (std::uint64_t t = 0; t <= 40; ++t) {
    const auto cells = split(csv[t + 1], ',');
    ASSERT_EQ(cells.size(), 82u);
    EXPECT_EQ(cells[0], std::to_string(t));
    for (std::int64_t a = -40; a <= 40; ++a) {
      EXPECT_EQ(std::stod(cells[static_cast<std::size_t>(a + 41)]), h.value(t, a));
    }
  }

  const auto summary = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
  EXPECT_EQ(summary["N"], 2);
  EXPECT_EQ(summary["t_star"], 1);
  EXPECT_EQ(summary["xi_witness"], 1);
  EXPECT_TRUE(summary["window_covers_cone"].get<bool>());
  EXPECT_NEAR(summary["v_B"].get<double>(), 1.0, 0.05);
}

TEST(Heatmap, Deterministic) {
  TempDir a, b;
  auto ca = heat_config(a.path() / "x", 10, 50);
  auto cb = heat_config(b.path() / "x", 10, 50);
  ca.w = cb.w = "QP";
  std::ostringstream log;
  ASSERT_EQ(cmd_heatmap(ca, log), kSuccess);
  ASSERT_EQ(cmd_heatmap(cb, log), kSuccess);
  for (const char* f : {"heatmap.csv", "heatmap.pgm", "summary.json"}) {
    EXPECT_EQ(slurp(a.path() / "x" / f), slurp(b.path() / "x" / f)) << f;
  }
}

TEST(Heatmap, ZeroWindowRejected) {
  TempDir dir;
  std::ostringstream log;
  EXPECT_THROW(cmd_heatmap(heat_config(dir.path(), 2, 0), log), ValidationError);
}

TEST(Heatmap, ZeroHorizonWithWindow) {
  TempDir dir;
  auto c = heat_config(dir.path(), 2, 0);
  c.half_width = 3;
  std::ostringstream log;
  ASSERT_EQ(cmd_heatmap(c, log), kSuccess);
  const auto csv = lines(dir.path() / "heatmap.csv");
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[1], "0,0,0,0,0,0,0,0");
  const auto summary = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
  EXPECT_TRUE(summary["t_star"].is_null());
}

TEST(Heatmap, NarrowWindowWarns) {
  TempDir dir;
  auto c = heat_config(dir.path(), 3, 20);
  c.half_width = 5;
  std::ostringstream log;
  ASSERT_EQ(cmd_heatmap(c, log), kSuccess);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
  EXPECT_FALSE(summary["window_covers_cone"].get<bool>());
}

TEST(Heatmap, ValidationErrors) {
  TempDir dir;
  std::ostringstream log;
  auto bad_n = heat_config(dir.path(), 1, 10);
  EXPECT_THROW(cmd_heatmap(bad_n, log), ValidationError);
  auto bad_w = heat_config(dir.path(), 5, 10);
  bad_w.w = "7,0";
  EXPECT_THROW(cmd_heatmap(bad_w, log), ValidationError);
  auto bad_thr = heat_config(dir.path(), 5, 10);
  bad_thr.threshold = 0;
  EXPECT_THROW(cmd_heatmap(bad_thr, log), ValidationError);
  auto bad_rule = heat_config(dir.path(), 5, 10);
  bad_rule.rule = (dir.path() / "missing.json").string();
  EXPECT_THROW(cmd_heatmap(bad_rule, log), ValidationError);
}

TEST(Heatmap, RuleFileMatchesBuiltIn) {
  TempDir dir;
  {
    std::ofstream f(dir.path() / "rule.json");
    f << R"({"name": "file-rule", "entries": [[[[-1, 1], [0, 1], [1, 1]], [[0, -1]]], [[[0, 1]], []]]})";
  }
  auto from_file = heat_config(dir.path() / "file", 7, 30);
  from_file.rule = (dir.path() / "rule.json").string();
  auto built_in = heat_config(dir.path() / "builtin", 7, 30);
  std::ostringstream log;
  ASSERT_EQ(cmd_heatmap(from_file, log), kSuccess);
  ASSERT_EQ(cmd_heatmap(built_in, log), kSuccess);
  EXPECT_EQ(slurp(dir.path() / "file" / "heatmap.csv"), slurp(dir.path() / "builtin" / "heatmap.csv"));
}

TEST(Heatmap, NonReversibleRuleFile) {
  TempDir dir;
  {
    std::ofstream f(dir.path() / "rule.json");
    f << R"({"N": 4, "entries": [[[[0, 2]], []], [[], [[0, 1]]]]})";
  }
  RunConfig c;
  c.rule = (dir.path() / "rule.json").string();
  c.out_dir = dir.path();
  std::ostringstream log;
  EXPECT_THROW(cmd_heatmap(c, log), ValidationError);
}

TEST(Scan, TableRange) {
  TempDir dir;
  ScanConfig c;
  c.run.out_dir = dir.path();
  ASSERT_EQ(cmd_scan(c), kSuccess);
  const auto csv = lines(dir.path() / "scan.csv");
  ASSERT_EQ(csv.size(), 378u);
  EXPECT_EQ(csv[0], "N,t_star,xi_witness");
  EXPECT_EQ(csv[1], "2,1,1");
  const auto jumps = nlohmann::json::parse(slurp(dir.path() / "jumps.json"));
  EXPECT_EQ(jumps["jumps"], nlohmann::json::parse("[7,13,31,67,157]"));
  EXPECT_EQ(jumps["not_found"], 0);
}

TEST(Scan, ListsSentinelsAndErrors) {
  TempDir dir;
  ScanConfig c;
  c.run.out_dir = dir.path();
  c.moduli = "2,2147483647";
  c.t_max = 3;
  ASSERT_EQ(cmd_scan(c), kSuccess);
  const auto csv = lines(dir.path() / "scan.csv");
  ASSERT_EQ(csv.size(), 3u);
  EXPECT_EQ(csv[2], "2147483647,NA,NA");

  c.moduli = "10..2";
  EXPECT_THROW(cmd_scan(c), ValidationError);
  c.moduli = "1..5";
  EXPECT_THROW(cmd_scan(c), ValidationError);
  c.moduli = "2,x";
  EXPECT_THROW(cmd_scan(c), ValidationError);
  c.moduli = "2..5";
  c.t_max = 0;
  EXPECT_THROW(cmd_scan(c), ValidationError);
}

TEST(Whitney, Outputs) {
  TempDir dir;
  WhitneyConfig c;
  c.out_dir = dir.path();
  std::ostringstream log;
  ASSERT_EQ(cmd_whitney(c, log), kSuccess);
  EXPECT_EQ(lines(dir.path() / "whitney.csv"),
            (std::vector<std::string>{"t,W_2t,oracle_checked", "1,1,true", "2,2,true", "3,5,true", "4,11,true",
                                      "5,26,true", "6,63,true"}));
  c.t_max = 1;
  ASSERT_EQ(cmd_whitney(c, log), kSuccess);
  EXPECT_EQ(lines(dir.path() / "whitney.csv").size(), 2u);
  c.t_max = 0;
  ASSERT_EQ(cmd_whitney(c, log), kSuccess);
  EXPECT_EQ(lines(dir.path() / "whitney.csv"), (std::vector<std::string>{"t,W_2t,oracle_checked"}));
}

TEST(Fractal, FilledConeAndPaperRule) {
  TempDir dir;
  FractalConfig c;
  c.run.out_dir = dir.path() / "cone";
  c.pattern = "filled-cone";
  ASSERT_EQ(cmd_fractal(c), kSuccess);
  const auto cone = nlohmann::json::parse(slurp(dir.path() / "cone" / "fit.json"));
  EXPECT_NEAR(cone["D"].get<double>(), 2.0, 0.02);

  c.run.out_dir = dir.path() / "cqca";
  c.pattern = "cqca";
  ASSERT_EQ(cmd_fractal(c), kSuccess);
  const auto fit = nlohmann::json::parse(slurp(dir.path() / "cqca" / "fit.json"));
  EXPECT_NEAR(fit["D"].get<double>(), 1.8325, 0.05);
  EXPECT_EQ(fit["fit_window"]["last_T"], 1024);
  EXPECT_EQ(lines(dir.path() / "cqca" / "boxcount.csv").size(), 6u);
}

TEST(Fractal, Errors) {
  TempDir dir;
  FractalConfig c;
  c.run.out_dir = dir.path();
  c.horizons = "64,128,256";
  EXPECT_THROW(cmd_fractal(c), ValidationError);
  c.horizons = "64,32,128,256";
  EXPECT_THROW(cmd_fractal(c), ValidationError);
  c.horizons = "8,16,32,64";
  c.pattern = "sierpinski";
  EXPECT_THROW(cmd_fractal(c), ValidationError);
}

TEST(Scar, MatchAndMismatch) {
  TempDir dir;
  ScarConfig c;
  c.run.modulus = 10;
  c.run.horizon = 30;
  c.run.half_width = 30;
  c.run.out_dir = dir.path() / "ok";
  c.kappa = 5;
  c.prime = 2;
  std::ostringstream log;
  ASSERT_EQ(cmd_scar(c, log), kSuccess);
  const auto doc = nlohmann::json::parse(slurp(dir.path() / "ok" / "scar.json"));
  EXPECT_TRUE(doc["exact_match"].get<bool>());
  EXPECT_EQ(slurp(dir.path() / "ok" / "composite_heatmap.pgm"), slurp(dir.path() / "ok" / "prime_power_heatmap.pgm"));

  c.run.out_dir = dir.path() / "bad";
  c.kappa = 2;
  c.prime = 5;
  EXPECT_EQ(cmd_scar(c, log), kRuntimeFailure);

  c.kappa = 4;
  c.prime = 2;
  EXPECT_THROW(cmd_scar(c, log), ValidationError);
}

TEST(Binary, ExitCodes) {
  TempDir dir;
  const std::string out = " --out " + (dir.path() / "o").string();
  EXPECT_EQ(run_cli("heatmap --N 2 --L 20 --T 20" + out), 0);
  EXPECT_EQ(run_cli("heatmap --N 1 --L 20 --T 20" + out), 1);
  EXPECT_EQ(run_cli("heatmap --N 2 --W Z" + out), 1);
  EXPECT_EQ(run_cli("heatmap --bogus" + out), 1);
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("scan --N 10..2" + out), 1);
  EXPECT_EQ(run_cli("whitney --t-max 3" + out), 0);
  EXPECT_EQ(run_cli("fractal --T 64,128,256" + out), 1);
  EXPECT_EQ(run_cli("scar --N 10 --kappa 5 --prime 2 --ell 1 --L 10 --T 10" + out), 0);
  EXPECT_EQ(run_cli("scar --N 10 --kappa 2 --prime 5 --ell 1 --L 10 --T 10" + out), 2);
  EXPECT_EQ(run_cli("scar --N 10 --kappa 4 --prime 2 --ell 1" + out), 1);
}
