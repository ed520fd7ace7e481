#include <gtest/gtest.h>

#include "mdcnet/config.hpp"

using namespace mdcnet;

TEST(Config, BaselineValidates) {
  auto c = baseline_config();
  EXPECT_DOUBLE_EQ(c.sensor_density, 1e-3);
  EXPECT_DOUBLE_EQ(c.mdc_density, 1e-3);
  EXPECT_DOUBLE_EQ(c.ap_density, 1e-4);
  EXPECT_NEAR(c.sensor_threshold, 10.0, 1e-12);
  EXPECT_NEAR(c.ap_threshold, 1.0, 1e-12);
  EXPECT_NEAR(c.noise_mw, 7.943282347242789e-13, 1e-25);
  EXPECT_EQ(c.batch_size, 64);
}

TEST(Config, ValidateIsIdempotent) {
  auto c = baseline_config();
  EXPECT_EQ(validate_config(c), c);
  EXPECT_EQ(validate_config(to_candidate(c)), c);
}

TEST(Config, RejectsNegativeDensity) {
  ConfigCandidate c;
  c.sensor_density = -1e-3;
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].kind, ErrorKind::NonPositiveParameter);
    EXPECT_EQ(e.violations()[0].field, "lambda_s_per_m2");
  }
}

TEST(Config, ZeroMdcDensityAllowed) {
  ConfigCandidate c;
  c.mdc_density = 0;
  EXPECT_NO_THROW(validate_config(c));
}

TEST(Config, WalkTooShort) {
  ConfigCandidate c;
  c.walk_time = 3.0;  // 2 r_s / v = 4 s
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WalkTooShort);
  }
}

TEST(Config, PathLossMustExceedTwo) {
  ConfigCandidate c;
  c.path_loss_exp = 2.0;
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Config, TorusArenaTooSmall) {
  ConfigCandidate c;
  c.arena_side = 60;  // r_a = 20 > 60/4
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArenaTooSmall);
  }
  c.boundary = BoundaryMode::plane;
  EXPECT_NO_THROW(validate_config(c));
}

TEST(Config, CollectsEveryViolation) {
  ConfigCandidate c;
  c.speed = 0;
  c.slot = -1;
  c.batch_size = 0;
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.violations().size(), 3u);
  }
}

TEST(ConfigParse, PartialFileKeepsDefaults) {
  auto c = parse_config("# comment\nv_mps = 12.5\n\nxi_pps=0.3   # trailing\n");
  EXPECT_DOUBLE_EQ(c.speed, 12.5);
  EXPECT_DOUBLE_EQ(c.arrival_rate, 0.3);
  EXPECT_DOUBLE_EQ(c.contact_radius, 10.0);
}

TEST(ConfigParse, UnknownKeyNamesKeyAndLine) {
  try {
    parse_config("v_mps = 5\nspeed = 7\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownKey);
    std::string m = e.what();
    EXPECT_NE(m.find("speed"), std::string::npos);
    EXPECT_NE(m.find("line 2"), std::string::npos);
  }
}

TEST(ConfigParse, BadNumber) {
  EXPECT_THROW(parse_config("v_mps = fast\n"), Error);
  EXPECT_THROW(parse_config("v_mps = 5x\n"), Error);
  EXPECT_THROW(parse_config("v_mps 5\n"), Error);
}

TEST(ConfigParse, BatchSizeMustBeInteger) {
  EXPECT_THROW(parse_config("k_packets = 64.5\n"), Error);
  EXPECT_EQ(parse_config("k_packets = 32\n").batch_size, 32);
}

TEST(ConfigParse, BoundaryMode) {
  EXPECT_EQ(parse_config("boundary_mode = plane\n").boundary, BoundaryMode::plane);
  EXPECT_THROW(parse_config("boundary_mode = sphere\n"), Error);
}

TEST(ConfigParse, FormatRoundTrips) {
  ConfigCandidate c;
  c.speed = 7.123456789012345;
  c.noise_dbm = -100.5;
  c.boundary = BoundaryMode::plane;
  auto back = parse_config(format_config(c));
  EXPECT_EQ(validate_config(back), validate_config(c));
}

TEST(ConfigParse, BaselineFileMatchesDefaults) {
  auto c = load_config_file(std::string(MDCNET_TEST_SOURCE_DIR) + "/configs/baseline.cfg");
  EXPECT_EQ(validate_config(c), baseline_config());
}

TEST(Units, DecibelConversions) {
  EXPECT_NEAR(db_to_linear(10.0), 10.0, 1e-12);
  EXPECT_NEAR(db_to_linear(-10.0), 0.1, 1e-15);
  EXPECT_NEAR(linear_to_db(db_to_linear(3.7)), 3.7, 1e-12);
}
