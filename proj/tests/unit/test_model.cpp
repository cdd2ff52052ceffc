#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "saplab/model.hpp"

using namespace saplab;

TEST(Units, DbmToWatts) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(0.0), 1e-3, 1e-18);
  EXPECT_NEAR(dbm_to_watts(43.0), std::pow(10.0, 1.3), 1e-12);
  EXPECT_NEAR(watts_to_dbm(dbm_to_watts(11.3)), 11.3, 1e-12);
}

TEST(Units, Density) {
  EXPECT_DOUBLE_EQ(per_km2_to_per_m2(500.0), 5e-4);
  EXPECT_EQ(per_km2_to_per_m2(0.0), 0.0);
  EXPECT_DOUBLE_EQ(per_km2_to_per_m2(7e3), 7e-3);
  EXPECT_NEAR(per_m2_to_per_km2(5e-4), 500.0, 1e-9);
}

TEST(Units, Decibels) {
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  EXPECT_DOUBLE_EQ(db_to_linear(10.0), 10.0);
  EXPECT_NEAR(db_to_linear(-10.0), 0.1, 1e-15);
}

TEST(Units, DecibelRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> exponent(-6.0, 6.0);
  for (int k = 0; k < 10000; ++k) {
    const double x = std::pow(10.0, exponent(rng));
    EXPECT_NEAR(db_to_linear(linear_to_db(x)), x, 1e-12 * x);
  }
}

TEST(Validate, AcceptsDefaults) {
  const NetworkParams p;
  EXPECT_EQ(&validate(p), &p);
  const Policy q;
  EXPECT_EQ(&validate(q), &q);
}

namespace {

std::string rejected_field(NetworkParams p) {
  try {
    validate(p);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Validate, NamesTheViolatedField) {
  NetworkParams p;
  p.alpha = 2.0;
  EXPECT_EQ(rejected_field(p), "alpha");
  p = {};
  p.tau = 1.5;
  EXPECT_EQ(rejected_field(p), "tau");
  p = {};
  p.tau = 0.0;
  EXPECT_EQ(rejected_field(p), "tau");
  p = {};
  p.lambda1 = 0.0;
  EXPECT_EQ(rejected_field(p), "lambda1");
  p = {};
  p.lambda2 = -1.0;
  EXPECT_EQ(rejected_field(p), "lambda2");
  p = {};
  p.p1 = 0.0;
  EXPECT_EQ(rejected_field(p), "p1");
  p = {};
  p.p2 = -1.0;
  EXPECT_EQ(rejected_field(p), "p2");
  p = {};
  p.d = -0.1;
  EXPECT_EQ(rejected_field(p), "d");
  p = {};
  p.gamma = 0.0;
  EXPECT_EQ(rejected_field(p), "gamma");
  p = {};
  p.lambda2 = 0.0;
  p.d = 0.0;
  EXPECT_EQ(rejected_field(p), "");
}

TEST(Validate, AlphaMessage) {
  NetworkParams p;
  p.alpha = 2.0;
  try {
    validate(p);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha must exceed 2"), std::string::npos);
  }
}

TEST(Validate, Policy) {
  EXPECT_THROW(validate(Policy{-1.0, 1.0}), ValidationError);
  EXPECT_THROW(validate(Policy{1.0, 0.0}), ValidationError);
  EXPECT_NO_THROW(validate(Policy{0.0, 1.0}));
}
