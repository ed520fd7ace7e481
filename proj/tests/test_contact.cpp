#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mdcnet/contact.hpp"
#include "mdcnet/oracles.hpp"

using namespace mdcnet;

namespace {
// Mean distance from a rim point to a uniform point of the unit disk: 32/(9 pi).
const double kUnitChord = 32.0 / (9.0 * std::numbers::pi);
}  // namespace

// The angular trapezoid meets a kink where the disk point touches the rim point, so
// agreement is far better than the required 1e-4 but not spectral.
TEST(Chord, MatchesClosedForm) {
  EXPECT_NEAR(unit_expected_chord() / kUnitChord, 1.0, 1e-6);
  EXPECT_NEAR(expected_chord(7.5) / (7.5 * kUnitChord), 1.0, 1e-6);
  EXPECT_NEAR(expected_chord(20.0), 2 * expected_chord(10.0), 1e-9);
}

TEST(Chord, FitWithinOnePercent) {
  for (double r = 4; r <= 30; r += 2)
    EXPECT_NEAR(expected_chord(r, ChordMethod::fit) / expected_chord(r), 1.0, 0.01);
}

TEST(Chord, RejectsNonPositiveRadius) { EXPECT_THROW(expected_chord(0.0), Error); }

TEST(Contact, BaselineValues) {
  auto c = baseline_config();
  auto k = compute_contact_stats(c);
  // pi r (2 v (w+p) + 4 E(D) - pi r) / (4 w v^2) with E(D) = 10 * 32/(9 pi)
  const double pi = std::numbers::pi;
  double ed = 10 * kUnitChord;
  double ect = pi * 10 * (2 * 5 * 12 + 4 * ed - pi * 10) / (4 * 10 * 25);
  EXPECT_NEAR(k.e_ct, ect, 1e-6);
  EXPECT_NEAR(k.e_ct, 4.2052, 1e-4);
  EXPECT_NEAR(k.e_ict, 12.0, 1e-12);  // (w+p) / (2 w v lambda_m r)
  EXPECT_NEAR(k.e_ict_s, 12.0, 1e-12);
  EXPECT_NEAR(k.p_ct, ect / (ect + 12.0), 1e-7);
  EXPECT_NEAR(k.p_ct, 0.2595, 1e-4);
  EXPECT_NEAR(k.p_pause, pi * 10 / (2 * 10 * 5), 1e-12);
}

TEST(Contact, RadiusMonotonicity) {
  auto c = baseline_config();
  double prev_ct = 0, prev_ict = 1e300;
  for (double r = 4; r <= 30; r += 2) {
    c.contact_radius = r;
    c.walk_time = 20;
    auto k = compute_contact_stats(c);
    EXPECT_GT(k.e_ct, prev_ct);
    EXPECT_LT(k.e_ict, prev_ict);
    prev_ct = k.e_ct;
    prev_ict = k.e_ict;
  }
}

TEST(Contact, ZeroMdcDensity) {
  auto c = baseline_config();
  c.mdc_density = 0;
  auto k = compute_contact_stats(c);
  EXPECT_TRUE(std::isinf(k.e_ict));
  EXPECT_EQ(k.p_ct, 0.0);
  EXPECT_EQ(contact_probability(c), 0.0);
  EXPECT_THROW(expected_intercontact_time(10, 5, 10, 2, 0.0), Error);
}

TEST(Contact, ApproximateProbabilityClose) {
  auto c = baseline_config();
  EXPECT_NEAR(contact_probability(c, ContactProbabilityMethod::approx), contact_probability(c), 0.05);
}

// Fast end of the speed range, where the contact-time formula holds within a few percent.
TEST(ContactExperiment, AgreesAtHighSpeed) {
  auto c = baseline_config();
  c.mdc_density = 1e-4;
  c.speed = 20;
  auto k = compute_contact_stats(c);
  auto e = contact_experiment_sized(c, 3, 5000, 5000);
  EXPECT_GE(e.ct.count(), 5000u);
  EXPECT_NEAR(e.ct.mean() / k.e_ct, 1.0, 0.05);
  EXPECT_NEAR(e.ict.mean() / k.e_ict, 1.0, 0.05);
}

// Pure walking (tiny pause) with sparse MDCs: the mean sojourn is pi r / (2 v).
TEST(ContactExperiment, WalkOnlySojourn) {
  auto c = baseline_config();
  c.mdc_density = 5e-5;
  c.pause_time = 1e-6;
  c.walk_time = 1000;
  auto e = contact_experiment_sized(c, 4, 5000, 100);
  EXPECT_NEAR(e.ct.mean(), std::numbers::pi * 10 / (2 * 5), 0.1);
}
