#pragma once

// Monte Carlo oracle for the sense-and-predict MAC: PPP sampling on a
// toroidal square window, per-link Rayleigh fading, and estimators for the
// access probability, ASE and primary outage.

#include <cstdint>
#include <span>
#include <vector>

#include "saplab/analytic.hpp"
#include "saplab/random.hpp"

namespace saplab {

enum class Protocol { SapExact, SapLowerBound, TxThreshold, RxThreshold, AlwaysOn };
enum class SensingMode { Faded, Mean };
enum class AccessExperimentMode { EmptyBall, PppConditional };

const char* to_string(Protocol protocol);
const char* to_string(SensingMode mode);

struct Scenario {
  NetworkParams params;  ///< lambda1 == 0 is accepted here (primary-free network)
  Protocol protocol = Protocol::SapExact;
  Policy policy;
  double window_side = 500.0;  ///< m
  std::int64_t trials = 10000;  ///< secondary-link observations (ASE) or drops (outage)
  std::uint64_t master_seed = 1;
  double error_sigma_db = 0.0;
  SensingMode sensing = SensingMode::Faded;
};

/// Checks the parameter domains plus window_side >= 20 max(d, 1/(2 sqrt(lambda1))).
const Scenario& validate(const Scenario& scenario);

struct Estimate {
  double mean = 0.0;
  double half_width_95 = 0.0;
  std::int64_t trials = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Point estimate k/n with the 95% Wilson score interval.
Estimate wilson_estimate(std::int64_t successes, std::int64_t trials);

struct TrialRecord {
  double measured_i = 0.0;  ///< W, after measurement error
  double r_i = 0.0;         ///< m
  bool access = false;
  double sir_rx = 0.0;      ///< linear; 0 when access was denied
  bool success = false;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Homogeneous PPP on [0, W)^2.
std::vector<Point> sample_ppp(double density, double window_side, Rng& rng);

/// Squared wrap-around distance on the W x W torus.
double toroidal_distance2(Point a, Point b, double window_side);

/// Distance^-alpha from a squared distance.
double path_gain(double distance2, double alpha);

/// Sum of P1 h dist^-alpha over the primaries (h = 1 in mean mode).
double measure_interference(Point at, std::span<const Point> primaries,
                            const NetworkParams& params, double window_side, Rng& rng,
                            SensingMode mode);

/// I * 10^(eps/10) with eps ~ N(0, sigma_db^2).
double inject_measurement_error(double interference, double sigma_db, Rng& rng);

/// P_s(R_I, theta) tabulated on a log-spaced R_I grid and linearly
/// interpolated in log R_I; radii outside the grid are evaluated directly.
class AccessTable {
 public:
  AccessTable(AccessBackend backend, double theta, const NetworkParams& params,
              std::size_t points = 1024, const QuadratureConfig& cfg = {});
  double operator()(double r_i) const;
  double log_r_min() const { return log_lo_; }
  double log_r_max() const { return log_hi_; }

 private:
  AccessBackend backend_;
  double theta_;
  NetworkParams params_;
  QuadratureConfig cfg_;
  double log_lo_ = 0.0;
  double log_hi_ = 0.0;
  double step_ = 0.0;
  std::vector<double> values_;
};

struct AccessExperimentConfig {
  NetworkParams params;  ///< lambda1 == 0 is accepted
  std::vector<double> thetas;
  double r_i = 1.0;
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  AccessExperimentMode mode = AccessExperimentMode::EmptyBall;
  double window_side = 500.0;  ///< diameter of the sampling disk around the TX
  SensingMode sensing = SensingMode::Faded;  ///< ppp-conditional mode only
  double bin_rel_width = 0.02;
  std::int64_t min_bin_trials = 1000;
};

/// One Estimate per theta. Common random numbers are shared across thetas.
/// PppConditional throws SamplingError when the R_I bin is under-populated.
std::vector<Estimate> run_access_prob_experiment(const AccessExperimentConfig& cfg);

struct AseResult {
  Protocol protocol = Protocol::SapExact;
  double theta = 0.0;
  Estimate ase;          ///< nat/s/Hz/m^2
  Estimate access_rate;  ///< fraction of secondary TXs granted access
  Estimate success;      ///< fraction of secondary TXs that accessed and decoded
  double mean_sir_linear = 0.0;  ///< over accessing links
  double mean_sir_db = 0.0;      ///< over accessing links
  std::int64_t drops = 0;
};

struct AseSweep {
  std::vector<Protocol> protocols;
  std::vector<double> thetas;
  std::vector<AseResult> results;  ///< protocols.size() x thetas.size(), row-major
  const AseResult& at(std::size_t p, std::size_t t) const {
    return results[p * thetas.size() + t];
  }
};

/// Number of network drops used to reach `trials` link observations.
std::int64_t drops_for_trials(const Scenario& scenario);

/// ASE of scenario.protocol at scenario.policy.
AseResult run_ase_experiment(const Scenario& scenario);

/// Every (protocol, theta) pair on the same drops, fading and access draws.
/// scenario.protocol and scenario.policy.theta are ignored.
AseSweep run_ase_sweep(const Scenario& scenario, std::span<const Protocol> protocols,
                       std::span<const double> thetas);

/// Per-link records for scenario.protocol at scenario.policy, drawn from the
/// same drops as run_ase_experiment, stopping after max_records links.
std::vector<TrialRecord> collect_trial_records(const Scenario& scenario,
                                               std::size_t max_records);

/// Outage of a typical primary RX at the window center served by its
/// nearest primary TX, with secondaries accessing per scenario.protocol at
/// threshold theta. scenario.trials counts drops.
Estimate run_primary_outage_experiment(const Scenario& scenario, double theta);

}  // namespace saplab
