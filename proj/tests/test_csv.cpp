#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "mdcnet/csv.hpp"

using namespace mdcnet;

TEST(Csv, Header) {
  std::ostringstream os;
  write_csv_header(os);
  EXPECT_EQ(os.str(), "scenario_id,param_name,param_value,metric,source,value,ci_low,ci_high,status,seed\n");
}

TEST(Csv, NumberFormat) {
  EXPECT_EQ(format_number(NAN), "nan");
  EXPECT_EQ(format_number(INFINITY), "inf");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(format_number(0.25), "0.25");
  EXPECT_EQ(format_number(1e-3), "0.001");
}

TEST(Csv, QuotesAndOptionals) {
  std::ostringstream os;
  write_csv_row(os, {"a,b", "", std::nullopt, "m\"x", "sim", 1.5, 1.0, 2.0, "ok", "1..3"});
  EXPECT_EQ(os.str(), "\"a,b\",,,\"m\"\"x\",sim,1.5,1,2,ok,1..3\n");
}

TEST(Csv, AnalyticRowsBaseline) {
  auto r = analyze(baseline_config());
  auto rows = analytic_rows(r, {"baseline", "", std::nullopt});
  std::set<std::string> names;
  for (const auto& row : rows) {
    EXPECT_EQ(row.status, "ok");
    EXPECT_EQ(row.source, "analytic");
    names.insert(row.metric);
  }
  for (auto m : {"e_ct", "p_cov_m", "e_l_star", "p_cov_a", "d_q_m", "total_delay", "e_sensor", "e_network"})
    EXPECT_TRUE(names.count(m)) << m;
  EXPECT_EQ(names.size(), rows.size());
}

TEST(Csv, FailedReportKeepsPoint) {
  auto c = baseline_config();
  c.arrival_rate = 5;
  auto r = analyze(c);
  auto rows = analytic_rows(r, {"x", "xi", 5.0});
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    EXPECT_EQ(row.status, "Unstable");
    EXPECT_EQ(*row.param_value, 5.0);
  }
  AnalyticReport empty;
  empty.failure = ErrorKind::ZeroDensity;
  auto one = analytic_rows(empty, {"x", "", std::nullopt});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].metric, "status");
  EXPECT_EQ(one[0].status, "ZeroDensity");
}

TEST(Csv, SeedRange) {
  EXPECT_EQ(seed_range({}), "");
  EXPECT_EQ(seed_range({4}), "4");
  EXPECT_EQ(seed_range({1, 2, 3}), "1..3");
}
