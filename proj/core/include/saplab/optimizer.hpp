#pragma once

// Network-level metrics built on the conditional access probability:
// average access probability, secondary transmission success, primary
// outage, area spectral efficiency (ASE) and the joint search over the
// access threshold theta and the decoding target beta.

#include <span>
#include <vector>

#include "saplab/analytic.hpp"

namespace saplab {

/// Exponent applied to the average access probability when it thins the
/// secondary PPP in the success probability.
enum class ThinningVariant {
  AsPrintedLemma2,  ///< phi_hat^(2/alpha)
  Linear,           ///< phi_hat (independent thinning)
};

/// How the primary-outage expression is read.
enum class OutageReading {
  Printed,    ///< coverage integrals at theta, interference ratio (P1/P2)^(2/alpha)
  Corrected,  ///< coverage integrals at gamma, ratio as printed
  Physical,   ///< coverage integrals at gamma, ratio (P2/P1)^(2/alpha)
};

/// How the minimum access threshold is obtained.
enum class ThresholdMethod {
  Operational,      ///< smallest theta with primary_outage(theta) <= tau
  PrintedEquation,  ///< root of the published threshold equation
};

struct AnalysisOptions {
  AccessBackend backend = AccessBackend::Exact;
  ThinningVariant thinning = ThinningVariant::Linear;
  OutageReading outage = OutageReading::Corrected;
  ThresholdMethod threshold = ThresholdMethod::Operational;
  QuadratureConfig quad{};
  RootConfig root{};
};

/// Upper end of the bracket used when solving for the minimum threshold.
inline constexpr double kThetaMax = 1e6;

struct Optimum {
  double theta_star = 0.0;
  double beta_star = 0.0;
  double ase = 0.0;           ///< nat/s/Hz/m^2
  double theta_bar = 0.0;
  double lambda2_star = 0.0;  ///< lambda2 * phi_hat(theta_star)
  double grid_theta_star = 0.0;
  double grid_beta_star = 0.0;
  double grid_ase = 0.0;
};

/// Tabulated ASE over a theta x beta grid (linear values, row-major in theta).
struct AseSurface {
  std::vector<double> thetas;
  std::vector<double> betas;
  std::vector<double> phi_hat;  ///< one entry per theta
  std::vector<double> values;   ///< thetas.size() * betas.size()
  double at(std::size_t i, std::size_t j) const { return values[i * betas.size() + j]; }
};

struct AsymptoticSolution {
  double theta_bar = 0.0;
  double beta_star = 0.0;
};

/// Probability density of the distance to the nearest primary TX.
double nearest_distance_pdf(double r, double lambda1);

/// Average of an r-dependent integrand g(r) over the nearest-primary distance
/// distribution: int_0^inf g(r) f_r(r) dr.
double average_over_nearest(const RealFunction& g, const NetworkParams& params,
                            const QuadratureConfig& cfg = {});

double avg_access_prob(double theta, const NetworkParams& params,
                       const AnalysisOptions& opts = {});

/// exp(-pi lambda2 phi_hat^e d^2 rho0(beta)) with e set by the variant.
double secondary_interference_factor(double beta, double phi_hat,
                                     const NetworkParams& params, ThinningVariant variant);

double tx_success_prob(double r_i, double beta, double theta, const NetworkParams& params,
                       const AnalysisOptions& opts = {});

/// Primary outage for a given average access probability.
double primary_outage_given(double phi_hat, double theta, const NetworkParams& params,
                            OutageReading reading, const QuadratureConfig& cfg = {});

double primary_outage(double theta, const NetworkParams& params,
                      const AnalysisOptions& opts = {});

/// Minimum access threshold meeting the primary-protection budget.
/// Throws InfeasibleError when even theta = kThetaMax violates it.
double min_access_threshold(const NetworkParams& params, const AnalysisOptions& opts = {});

double ase(double theta, double beta, const NetworkParams& params,
           const AnalysisOptions& opts = {});

AseSurface ase_surface(const NetworkParams& params, std::span<const double> thetas,
                       std::span<const double> betas, const AnalysisOptions& opts = {});

/// Grid argmax of ase over {theta >= theta_bar} x beta followed by a
/// golden-section refinement in each coordinate. Grids are in dB, sorted.
/// The searched surface is copied to `surface` when given.
Optimum optimize(const NetworkParams& params, std::span<const double> theta_grid_db,
                 std::span<const double> beta_grid_db, const AnalysisOptions& opts = {},
                 bool refine = true, AseSurface* surface = nullptr);

/// Derivative condition whose root is the optimal beta when primary
/// interference dominates. Uses the lower-bound access probability and a
/// central difference of step max(1e-6, fd_rel_step * beta) in beta.
double d_function(double beta, double theta_bar, const NetworkParams& params,
                  const AnalysisOptions& opts = {}, double fd_rel_step = 1e-6);

/// theta_bar from min_access_threshold and the root of d_function found by
/// scanning beta over [0.01, 100]. Throws BracketError without a sign change.
AsymptoticSolution solve_beta_asymptotic(const NetworkParams& params,
                                         const AnalysisOptions& opts = {});

std::vector<double> db_grid(double lo_db, double hi_db, double step_db);

}  // namespace saplab
