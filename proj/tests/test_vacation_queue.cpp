#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numeric>

#include "mdcnet/analytic.hpp"
#include "mdcnet/oracles.hpp"
#include "mdcnet/vacation_queue.hpp"

using namespace mdcnet;

namespace {

struct Case {
  int cap;
  double xs, p, e_vs;
};

std::vector<double> solve_q(const Case& c) {
  double rho = c.xs / c.p;
  auto roots = find_boundary_roots(c.cap, c.xs, 1.0, c.p, c.e_vs);
  return solve_q_coefficients(roots, c.cap, c.xs, 1.0, c.e_vs, rho, c.p);
}

}  // namespace

TEST(ServiceLst, Moments) {
  for (double p : {0.3, 0.7, 0.95}) {
    double h = 1e-5;
    auto d1 = (service_lst({h, 0}, p) - service_lst({-h, 0}, p)) / (2 * h);
    auto d2 = (service_lst({h, 0}, p) - 2.0 * service_lst({0, 0}, p) + service_lst({-h, 0}, p)) / (h * h);
    EXPECT_NEAR(-d1.real(), 1.0 / p, 1e-6);
    EXPECT_NEAR(d2.real(), service_second_moment(p), 1e-3);
  }
  EXPECT_NEAR(std::abs(vacation_lst({0, 0}, 12.0)), 1.0, 1e-15);
}

TEST(CycleQuantities, Baseline) {
  auto r = analyze(baseline_config());
  ASSERT_TRUE(r.ok) << r.message;
  const auto& q = *r.queue;
  // floor(p_cov_m / delta * E(CT))
  EXPECT_EQ(q.xi_cap, static_cast<int>(std::floor(r.mdc->p_cov_m / 0.1 * r.contact.e_ct)));
  EXPECT_EQ(q.xi_cap, 37);
  EXPECT_NEAR(q.e_psi, 9.7231, 1e-3);
  EXPECT_NEAR(q.e_l_star, 9.9567, 1e-3);
  EXPECT_NEAR(q.e_l, 10.026, 1e-3);
  EXPECT_NEAR(q.d_q_s, 16.599, 1e-3);
  EXPECT_GT(q.e_l_star_printed, q.e_l_star);
}

TEST(BoundaryRoots, ResidualsAndCount) {
  for (Case c : {Case{4, 0.05, 0.8, 40}, Case{33, 0.06, 0.8, 150}, Case{10, 0.05, 0.8, 80}}) {
    auto roots = find_boundary_roots(c.cap, c.xs, 1.0, c.p, c.e_vs);
    ASSERT_EQ(roots.size(), static_cast<std::size_t>(c.cap - 1));
    detail::RootProblem pr{c.cap, c.xs, c.p, c.e_vs};
    for (auto z : roots) {
      EXPECT_LT(std::abs(pr.f(z)), 1e-9);
      EXPECT_LE(std::abs(z), 1.0);
      EXPECT_GT(std::abs(z - 1.0), 1e-6);
    }
  }
}

TEST(BoundaryRoots, DerivativeMatchesFiniteDifference) {
  detail::RootProblem pr{10, 0.05, 0.8, 80};
  cplx z{0.3, 0.4};
  double h = 1e-6;
  auto fd = (pr.f(z + h) - pr.f(z - h)) / (2 * h);
  EXPECT_LT(std::abs(fd - pr.df(z)), 1e-6 * std::max(1.0, std::abs(fd)));
}

TEST(QCoefficients, ProbabilityMass) {
  for (Case c : {Case{4, 0.05, 0.8, 40}, Case{33, 0.06, 0.8, 150}, Case{10, 0.05, 0.8, 80}}) {
    auto q = solve_q(c);
    ASSERT_EQ(q.size(), static_cast<std::size_t>(c.cap));
    for (double v : q) EXPECT_GE(v, -1e-8);
    EXPECT_LE(std::accumulate(q.begin(), q.end(), 0.0), 1.0 + 1e-9);
  }
}

// Values computed independently with a series expansion of the queue-length PGF.
TEST(QueueLengths, PrototypeCases) {
  struct Expect {
    Case c;
    double e_l_star;
  };
  for (auto [c, want] : {Expect{{4, 0.05, 0.8, 40}, 3.16756}, Expect{{33, 0.06, 0.8, 150}, 10.0956},
                         Expect{{10, 0.05, 0.8, 80}, 5.03909}}) {
    auto q = solve_q(c);
    auto l = mean_queue_lengths(c.cap, c.xs, 1.0, c.p, c.e_vs, q);
    EXPECT_NEAR(l.e_l_star, want, 2e-4 * want);
  }
}

TEST(QueueLengths, AgreesWithEventOracle) {
  Case c{4, 0.05, 0.8, 40};
  auto q = solve_q(c);
  auto l = mean_queue_lengths(c.cap, c.xs, 1.0, c.p, c.e_vs, q);
  auto o = queue_oracle(c.cap, c.xs, c.p, c.e_vs, 400000, 9);
  EXPECT_NEAR(o.e_l_star / l.e_l_star, 1.0, 0.02);
  EXPECT_NEAR(o.e_l / l.e_l, 1.0, 0.03);
  EXPECT_LT(total_variation(o.q, q), 0.01);
  QueueInputs in{c.xs, 1.0, c.p, 1.0, 1.0};
  EXPECT_NEAR(o.wait / sensor_queueing_delay(in, l.e_l_star), 1.0, 0.03);
}

TEST(QueueLengths, SingleSlotCap) {
  // Xi = 1: no boundary roots and the single coefficient comes from normalisation alone.
  auto roots = find_boundary_roots(1, 0.01, 1.0, 0.9, 20);
  EXPECT_TRUE(roots.empty());
  auto q = solve_q_coefficients(roots, 1, 0.01, 1.0, 20, 0.01 / 0.9, 0.9);
  ASSERT_EQ(q.size(), 1u);
  auto l = mean_queue_lengths(1, 0.01, 1.0, 0.9, 20, q);
  auto o = queue_oracle(1, 0.01, 0.9, 20, 400000, 5);
  EXPECT_NEAR(q[0], o.q[0], 0.01);
  EXPECT_NEAR(l.e_l_star, o.e_l_star, 0.03 * o.e_l_star + 0.01);
}

TEST(Stability, Dichotomy) {
  EXPECT_TRUE(check_stability(0.2, 0.25).stable);
  EXPECT_FALSE(check_stability(0.25, 0.25).stable);
  // xi < P_ct * p / delta
  EXPECT_NEAR(arrival_rate_bound(0.9, 0.1, 4, 12), 0.25 * 9.0, 1e-12);
}

TEST(GLimited, ThrowsWhenUnstable) {
  QueueInputs in{3.0, 0.1, 0.9, 4.0, 12.0};
  try {
    solve_g_limited(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unstable);
  }
}

TEST(GLimited, ThrowsWhenBatchExceedsCap) {
  // stable, but flooring the per-contact capacity to 3 puts E(Psi) = 3.86 above it
  QueueInputs in{2.7, 0.1, 0.9, 0.443, 1.0};
  try {
    solve_g_limited(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapacityExceeded);
  }
}

TEST(GLimited, SensorDelayFormula) {
  QueueInputs in{0.6, 0.1, 0.9, 4.2052, 12.0};
  auto s = solve_g_limited(in);
  double xs = 0.06, p = 0.9;
  EXPECT_NEAR(s.d_q_s, (xs * (2 - p) / (2 * p * (p - xs)) + s.e_l_star / xs) * 0.1, 1e-12);
}
