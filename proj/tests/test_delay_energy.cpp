#include <gtest/gtest.h>

#include "mdcnet/analytic.hpp"
#include "mdcnet/delay_energy.hpp"

using namespace mdcnet;

TEST(Delay, TransmissionIsGeometric) {
  auto t = transmission_delays(0.1, 0.8, 0.5);
  EXPECT_DOUBLE_EQ(t.d_t_s, 0.125);
  EXPECT_DOUBLE_EQ(t.d_t_m, 0.2);
  EXPECT_THROW(transmission_delays(0.1, 0.0, 0.5), Error);
  EXPECT_THROW(transmission_delays(0.1, 0.5, 0.0), Error);
}

TEST(Delay, Baseline) {
  auto r = analyze(baseline_config());
  ASSERT_TRUE(r.ok) << r.message;
  const auto& d = *r.delay;
  EXPECT_NEAR(d.d_q_s, 16.599, 1e-3);
  EXPECT_NEAR(d.d_t_s, 0.1 / r.mdc->p_cov_m, 1e-12);
  EXPECT_NEAR(d.d_q_m, 110.356, 1e-3);
  EXPECT_NEAR(d.d_q_m_averaged, 57.022, 1e-3);
  EXPECT_NEAR(d.d_t_m, 0.101, 1e-3);
  EXPECT_NEAR(d.total, 127.166, 1e-3);
  EXPECT_NEAR(d.total, d.d_q_s + d.d_t_s + d.d_q_m + d.d_t_m, 1e-12);
  const auto& l = r.ap->lifecycle;
  EXPECT_NEAR(l.n_c, 6.5823, 1e-4);
  EXPECT_NEAR(l.e_t_collect, 100.667, 1e-3);
  EXPECT_NEAR(l.e_t_smov, 9.6891, 1e-4);
}

TEST(Delay, MdcQueueingFormulas) {
  auto c = baseline_config();
  ContactStats k;
  k.e_ct = 4;
  k.e_ict_s = 10;
  Lifecycle l;
  l.n_c = 8;
  l.e_t_smov = 3;
  auto m = mdc_queueing_delay(c, k, 8.0, l);
  EXPECT_DOUBLE_EQ(m.d_q_m, 64 * 14 / 8.0 - 5 + 3);
  EXPECT_DOUBLE_EQ(m.d_q_m_averaged, 3.5 * 14 + 2 + 3);
}

TEST(Energy, Baseline) {
  auto r = analyze(baseline_config());
  ASSERT_TRUE(r.ok);
  EXPECT_NEAR(r.energy->e_sensor, 0.57123, 1e-5);
  EXPECT_NEAR(r.energy->e_network, 4.3589e-5, 1e-9);
}

TEST(Energy, Formula) {
  auto c = baseline_config();
  auto e = energy(c, 0.5, 0.25, 1e-4, 2e-5, 0.1);
  double es = 5 * 0.1 / 0.5 + 0.9 / 0.6 * 0.01;
  EXPECT_DOUBLE_EQ(e.e_sensor, es);
  EXPECT_DOUBLE_EQ(e.e_network, 1e-4 * es + 2e-5 * 10 * 0.1 / 0.25);
}

TEST(Analytic, UnstableReportKeepsEarlyStages) {
  auto c = baseline_config();
  c.arrival_rate = 5.0;
  auto r = analyze(c);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.failure);
  EXPECT_EQ(*r.failure, ErrorKind::Unstable);
  EXPECT_TRUE(r.mdc.has_value());
  EXPECT_FALSE(r.queue.has_value());
  EXPECT_FALSE(r.delay.has_value());
}
