#include <gtest/gtest.h>

#include "mdcnet/simulator.hpp"

using namespace mdcnet;

namespace {

NetworkConfig small_config() {
  ConfigCandidate c;
  c.arena_side = 400;
  c.batch_size = 16;
  return validate_config(c);
}

}  // namespace

TEST(Simulator, Deterministic) {
  auto c = small_config();
  auto a = run_once(c, 7, 3000, 500);
  auto b = run_once(c, 7, 3000, 500);
  for (const auto& f : sim_metric_fields()) {
    double x = a.*(f.member), y = b.*(f.member);
    if (std::isnan(x)) EXPECT_TRUE(std::isnan(y)) << f.name;
    else EXPECT_EQ(x, y) << f.name;
  }
  auto d = run_once(c, 8, 3000, 500);
  EXPECT_NE(a.sensors + a.delivered, d.sensors + d.delivered);
}

TEST(Simulator, PacketConservation) {
  auto w = deploy(small_config(), 3);
  for (int n = 0; n < 2000; ++n) {
    w.step();
    ASSERT_TRUE(w.conserved()) << "slot " << n;
  }
  EXPECT_GT(w.enqueued(), 0u);
  EXPECT_GT(w.delivered_total(), 0u);
}

TEST(Simulator, OneTransmitterPerMdcByDefault) {
  auto w = deploy(small_config(), 4);
  for (int n = 0; n < 1500; ++n) {
    w.step();
    std::vector<int> per_mdc(w.mdcs().size(), 0);
    for (auto i : w.last_transmitting_sensors()) {
      int m = w.sensors()[i].serving_mdc;
      ASSERT_GE(m, 0);
      ASSERT_LE(++per_mdc[static_cast<std::size_t>(m)], 1);
    }
  }
}

TEST(Simulator, PacketTimesOrdered) {
  auto w = deploy(small_config(), 5);
  for (int n = 0; n < 3000; ++n) w.step();
  for (const auto& p : w.packets()) {
    if (p.t_mdc != kNoTime) {
      EXPECT_GE(p.t_mdc, p.t_arrival);
    }
    if (p.t_tx_start != kNoTime) {
      EXPECT_GE(p.t_tx_start, p.t_mdc);
    }
  }
}

TEST(Simulator, MetricsInRange) {
  auto m = run_once(small_config(), 11, 6000, 1000);
  EXPECT_GT(m.delivered, 0);
  EXPECT_GT(m.p_cov_m, 0);
  EXPECT_LE(m.p_cov_m, 1);
  EXPECT_GT(m.p_cov_a, 0);
  EXPECT_LE(m.p_cov_a, 1);
  EXPECT_GT(m.total_delay, m.d_q_s);
  EXPECT_GT(m.e_sensor, 0);
}

TEST(Simulator, NoDeliveriesOnShortRun) {
  try {
    run_once(small_config(), 1, 20, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoDeliveries);
  }
}

TEST(Simulator, BadHorizon) { EXPECT_THROW(run_once(small_config(), 1, 100, 100), Error); }

TEST(Replicate, NeedsTwoSeeds) { EXPECT_THROW(replicate(small_config(), {1}, 3000, 500), Error); }

TEST(Replicate, PooledMatchesReplications) {
  auto c = small_config();
  auto rep = replicate(c, {1, 2, 3}, 3000, 500);
  ASSERT_EQ(rep.replications.size(), 3u);
  auto single = run_once(c, 2, 3000, 500);
  EXPECT_EQ(rep.replications[1].delivered, single.delivered);
  for (const auto& [name, e] : rep.pooled) {
    if (name != "delivered") continue;
    double mean = (rep.replications[0].delivered + rep.replications[1].delivered + rep.replications[2].delivered) / 3;
    EXPECT_NEAR(e.value, mean, 1e-9);
    EXPECT_LE(e.ci_low, e.value);
    EXPECT_GE(e.ci_high, e.value);
  }
}
