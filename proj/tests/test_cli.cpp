#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string kCli = MDCNET_CLI;
const std::string kSrc = MDCNET_SOURCE_DIR;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    rows.push_back(f);
  }
  return rows;
}

// value column by metric for one scenario and source
std::map<std::string, double> metrics(const std::vector<std::vector<std::string>>& rows, const std::string& scenario,
                                      const std::string& source) {
  std::map<std::string, double> m;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][0] == scenario && rows[i][4] == source) m[rows[i][3]] = std::stod(rows[i][5]);
  return m;
}

std::string golden(const std::string& name) { return kSrc + "/tests/golden/" + name; }

std::string write_temp(const std::string& name, const std::string& body) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(Cli, AnalyticBaseline) {
  auto r = run("analytic --config " + kSrc + "/configs/baseline.cfg");
  ASSERT_EQ(r.code, 0);
  auto rows = parse_csv(r.out);
  ASSERT_GT(rows.size(), 1u);
  EXPECT_EQ(rows[0].size(), 10u);
  auto m = metrics(rows, "baseline", "analytic");
  EXPECT_NEAR(m.at("e_ct"), 4.2052, 1e-4);
  EXPECT_NEAR(m.at("total_delay"), 127.166, 1e-3);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("analytic --config /nonexistent.cfg").code, 1);
  EXPECT_EQ(run("analytic --config " + write_temp("bad.cfg", "no_such_key = 1\n")).code, 1);
  EXPECT_EQ(run("analytic --config " + write_temp("neg.cfg", "v_mps = -1\n")).code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  auto unstable = write_temp("unstable.cfg", "xi_pps = 5\n");
  EXPECT_EQ(run("analytic --config " + unstable).code, 2);
  EXPECT_EQ(run("validate --criteria 2 --config " + unstable).code, 2);
  EXPECT_EQ(run("simulate --config " + golden("small.cfg") + " --horizon-slots 20").code, 3);
  EXPECT_EQ(run("sweep --param xi_pps --grid 0.5,0.4").code, 1);
  EXPECT_EQ(run("simulate --seeds 5..2").code, 1);
}

TEST(Cli, ValidatePassesAndTestHookFails) {
  auto ok = run("validate --criteria 10");
  EXPECT_EQ(ok.code, 0);
  // inflating the analytic contact time must turn the contact criterion red everywhere
  auto bad = run("validate --criteria 1 --test-ect-scale 2");
  EXPECT_EQ(bad.code, 4);
  auto base = run("validate --criteria 1");
  auto count_fail = [](const std::string& csv) {
    int n = 0;
    for (auto& row : parse_csv(csv))
      if (row.size() > 9 && row[9] == "fail") ++n;
    return n;
  };
  EXPECT_GE(count_fail(bad.out), 12);
  EXPECT_GT(count_fail(bad.out), count_fail(base.out));
}

TEST(Cli, GoldenOutputs) {
  auto a = run("analytic --config " + golden("small.cfg"));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, slurp(golden("analytic_small.csv")));
  auto s = run("simulate --config " + golden("small.cfg") + " --seed 5 --horizon-slots 3000");
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(s.out, slurp(golden("simulate_small.csv")));
}

TEST(Cli, DeterministicAcrossRunsAndOutputPath) {
  auto args = "simulate --config " + golden("small.cfg") + " --seed 9 --horizon-slots 2500";
  auto a = run(args);
  auto path = ::testing::TempDir() + "sim9.csv";
  auto b = run(args + " --out " + path);
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_TRUE(b.out.empty());
  EXPECT_EQ(a.out, slurp(path));
}

TEST(Cli, SweepKeepsUnstableTail) {
  auto r = run("sweep --param xi_pps --grid 0.2,0.6,3,5");
  ASSERT_EQ(r.code, 0);
  auto rows = parse_csv(r.out);
  std::map<std::string, std::string> status;
  for (std::size_t i = 1; i < rows.size(); ++i) status[rows[i][0]] = rows[i][8];
  EXPECT_EQ(status["baseline/0"], "ok");
  EXPECT_EQ(status["baseline/1"], "ok");
  EXPECT_EQ(status["baseline/2"], "Unstable");
  EXPECT_EQ(status["baseline/3"], "Unstable");
}

TEST(Cli, SweepContactRadius) {
  auto r = run("sweep --param r_s_m --grid 5,10,15,20,24");
  ASSERT_EQ(r.code, 0);
  auto rows = parse_csv(r.out);
  double prev_ct = 0, prev_ict = 1e300;
  for (int i = 0; i < 5; ++i) {
    auto m = metrics(rows, "baseline/" + std::to_string(i), "analytic");
    EXPECT_GT(m.at("e_ct"), prev_ct);
    EXPECT_LT(m.at("e_ict"), prev_ict);
    prev_ct = m.at("e_ct");
    prev_ict = m.at("e_ict");
  }
}

TEST(Cli, ReplicatedSeeds) {
  auto r = run("simulate --config " + golden("small.cfg") + " --seeds 1..10 --horizon-slots 2000");
  ASSERT_EQ(r.code, 0);
  auto rows = parse_csv(r.out);
  std::map<std::string, int> per_seed;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    per_seed[rows[i][9]]++;
    if (rows[i][9] == "1..10" && rows[i][3] == "delivered") {
      EXPECT_FALSE(rows[i][6].empty());
      EXPECT_LE(std::stod(rows[i][6]), std::stod(rows[i][5]));
    }
  }
  EXPECT_GT(per_seed["1..10"], 0);
  for (int s = 1; s <= 10; ++s) EXPECT_EQ(per_seed[std::to_string(s)], per_seed["1..10"]);
}
