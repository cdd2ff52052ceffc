#pragma once

// Domain types shared by every module. Everything in here is SI:
// meters, watts, transmitters per square meter, linear power ratios.
// Boundary units (dBm, dB, per km^2) are converted with the helpers below
// and never stored.

#include "saplab/error.hpp"

namespace saplab {

struct NetworkParams {
  double lambda1 = 5e-4;  ///< primary TX density [1/m^2]
  double lambda2 = 2e-4;  ///< secondary TX density [1/m^2]
  double p1 = 19.952623149688797;  ///< primary TX power [W]
  double p2 = 0.19952623149688797;  ///< secondary TX power [W]
  double alpha = 4.0;     ///< path-loss exponent
  double d = 2.0;         ///< secondary TX-RX pair distance [m]
  double tau = 0.1;       ///< primary outage budget
  double gamma = 1.0;     ///< primary decoding SIR threshold (linear)
};

/// Access threshold and decoding target, both linear SIR ratios.
struct Policy {
  double theta = 1.0;
  double beta = 1.0;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double per_km2_to_per_m2(double per_km2);
double per_m2_to_per_km2(double per_m2);
double db_to_linear(double db);
double linear_to_db(double linear);

/// Returns `params` unchanged when every invariant holds; otherwise throws a
/// ValidationError naming the first violated field.
const NetworkParams& validate(const NetworkParams& params);

const Policy& validate(const Policy& policy);

/// Fixed received-signal power used to express a sensed interference level
/// as an SIR in the sensing-map figure.
inline constexpr double kDefaultSirNormalizationDbm = 10.0;

}  // namespace saplab
