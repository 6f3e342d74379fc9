#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hclab/cli.hpp"
#include "hclab/graph.hpp"
#include "hclab/report.hpp"

using namespace hclab;

namespace {
struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hclab_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST(Cli, PartitionFunction) {
  auto r = run({"z", "--torus", "4", "1", "--lambda", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_NEAR(j["logZ"].get<double>(), std::log(7.0), 1e-12);
  EXPECT_EQ(j["exact"], "7");
  auto t = Json::parse(run({"z", "--torus", "6", "2", "--method", "transfer"}).out);
  EXPECT_EQ(t["method"].get<std::string>().substr(0, 8), "transfer");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"nonsense"}).code, kExitUsage);
  EXPECT_EQ(run({"z"}).code, kExitUsage);
  EXPECT_EQ(run({"z", "--torus", "4", "1", "--lambda", "abc"}).code, kExitUsage);
  EXPECT_EQ(run({"z", "--torus", "4", "2", "--cap", "100"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "shearer", "--trials", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "no-such-check"}).code, kExitUsage);
  EXPECT_EQ(run({"z", "--in", temp_path("missing.txt")}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, ShearerDeterministic) {
  auto a = run({"check", "shearer", "--trials", "10", "--seed", "7"});
  auto b = run({"check", "shearer", "--trials", "10", "--seed", "7"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(Json::parse(a.out)["pass"].get<bool>());
}

TEST(Cli, FailedCheckExitsOne) {
  // a fit with no instances constrains nothing and is reported as uncertified
  const std::string grid = temp_path("bad_grid.json");
  {
    std::ofstream f(grid);
    f << R"({"instances": []})";
  }
  auto r = run({"fit", "corollary", "--grid", grid});
  EXPECT_EQ(r.code, kExitFail) << r.out << r.err;
  std::filesystem::remove(grid);
}

TEST(Cli, GraphRoundTripAndJsonOut) {
  const std::string g = temp_path("k33.txt"), js = temp_path("z.json");
  ASSERT_EQ(run({"graph", "torus", "--L", "4", "--d", "2", "--out", g}).code, kExitOk);
  EXPECT_EQ(load_graph_file(g), build_torus({4, 2}));
  auto r = run({"z", "--in", g, "--json", js});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(Json::parse(slurp(js))["exact"], "743");
  EXPECT_FALSE(std::filesystem::exists(js + ".tmp"));
  std::filesystem::remove(g);
  std::filesystem::remove(js);
}

TEST(Cli, ConfigFileFlagsWin) {
  const std::string cfg = temp_path("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"lambda": "2", "cycle": 4})";
  }
  auto from_cfg = Json::parse(run({"z", "--config-file", cfg}).out);
  EXPECT_EQ(from_cfg["exact"], "17");  // 1 + 4*2 + 2*4
  auto flag = Json::parse(run({"z", "--config-file", cfg, "--lambda", "1"}).out);
  EXPECT_EQ(flag["exact"], "7");
  std::filesystem::remove(cfg);
}

TEST(Cli, SweepCsv) {
  auto empty = run({"sweep", "gap", "--L", "4", "--d", "2"});
  ASSERT_EQ(empty.code, kExitOk) << empty.err;
  std::istringstream in(empty.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2);  // comment plus column names
  EXPECT_EQ(empty.out.rfind("# hclab", 0), 0u);

  auto four = run({"sweep", "gap", "--L", "4", "--d", "2", "--lambda-grid", "1/2", "1", "2", "4"});
  std::istringstream in4(four.out);
  lines = 0;
  while (std::getline(in4, line)) ++lines;
  EXPECT_EQ(lines, 6);

  auto ebal = run({"sweep", "ebal", "--m", "1", "--k", "2", "--lambda-grid", "0.25", "0.5", "1"});
  EXPECT_EQ(ebal.code, kExitOk) << ebal.err;
}

TEST(Cli, OrderPhi) {
  const std::string g = temp_path("c4.txt");
  save_graph_file(g, build_cycle(4));
  auto r = run({"order", "phi", "--in", g, "--config", "0100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["phi"], "0000");
  EXPECT_EQ(run({"order", "phi", "--in", g, "--config", "1100"}).code, kExitUsage);
  std::filesystem::remove(g);
}

TEST(Cli, ChecksAndChess) {
  EXPECT_EQ(run({"check", "hoeffding", "--n-max", "20"}).code, kExitOk);
  EXPECT_EQ(run({"check", "weitz", "--Delta", "4"}).code, kExitOk);
  EXPECT_EQ(run({"check", "separator", "--l", "3", "--L", "6", "--d", "1"}).code, kExitOk);
  EXPECT_EQ(run({"check", "variational", "--cycle", "6", "--lambda", "3/2"}).code, kExitOk);
  EXPECT_EQ(run({"check", "gadget-reduction", "--m", "1", "--k", "2", "--lambda", "1/2"}).code, kExitOk);
  EXPECT_EQ(run({"expansion", "cert-torus", "--L", "4", "--d", "2"}).code, kExitOk);
  auto s = run({"chess", "seminorm", "--l", "1", "--L", "4", "--d", "1", "--lambda", "1"});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  EXPECT_NEAR(Json::parse(s.out)["norm"].get<double>(), std::pow(7.0, 0.25), 1e-12);
}

TEST(Cli, WriteFileAtomic) {
  const std::string p = temp_path("atomic.txt");
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  EXPECT_EQ(slurp(p), "second");
  std::filesystem::remove(p);
}
