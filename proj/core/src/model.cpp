#include "saplab/model.hpp"

#include <cmath>
#include <string>

namespace saplab {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double per_km2_to_per_m2(double per_km2) { return per_km2 * 1e-6; }

double per_m2_to_per_km2(double per_m2) { return per_m2 * 1e6; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

}  // namespace

const NetworkParams& validate(const NetworkParams& p) {
  require(std::isfinite(p.alpha) && p.alpha > 2.0, "alpha",
          "alpha must exceed 2 (mean interference diverges otherwise)");
  require(std::isfinite(p.lambda1) && p.lambda1 > 0.0, "lambda1",
          "lambda1 must be positive");
  require(std::isfinite(p.lambda2) && p.lambda2 >= 0.0, "lambda2",
          "lambda2 must be non-negative");
  require(std::isfinite(p.p1) && p.p1 > 0.0, "p1", "p1 must be positive");
  require(std::isfinite(p.p2) && p.p2 > 0.0, "p2", "p2 must be positive");
  require(std::isfinite(p.d) && p.d >= 0.0, "d", "d must be non-negative");
  require(p.tau > 0.0 && p.tau < 1.0, "tau", "tau must lie in (0,1)");
  require(std::isfinite(p.gamma) && p.gamma > 0.0, "gamma",
          "gamma must be positive");
  return p;
}

const Policy& validate(const Policy& policy) {
  require(std::isfinite(policy.theta) && policy.theta >= 0.0, "theta",
          "theta must be non-negative");
  require(std::isfinite(policy.beta) && policy.beta > 0.0, "beta",
          "beta must be positive");
  return policy;
}

}  // namespace saplab
