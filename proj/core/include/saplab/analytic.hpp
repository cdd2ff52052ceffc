#pragma once

// Conditional access probability of a secondary link given the primary
// interference sensed at its transmitter.
//
// A sensed interference I is mapped to an empty-ball radius R_I: the
// nearest primary TX sits on a circle of radius R_I around the secondary TX
// and the remaining primaries form a PPP outside that disk. P_s(R_I, theta)
// is then the probability that the primary-only SIR at the paired RX, a
// distance d away, exceeds theta under unit-mean Rayleigh fading.

#include "saplab/model.hpp"
#include "saplab/numerics.hpp"

namespace saplab {

struct EmptyBall {
  double radius = 0.0;                 ///< R_I [m]
  double measured_interference = 0.0;  ///< I [W]
};

/// Which P_s expression to evaluate: the exact empty-ball integral or the
/// closed-form lower bound built on an RX-centred exclusion disk.
enum class AccessBackend { Exact, LowerBound };

/// Mean primary interference at a point whose nearest primary is at
/// distance R: P1 R^-alpha + 2 pi lambda1 P1 R^(2-alpha) / (alpha - 2).
double mean_interference(double radius, const NetworkParams& params);

/// Inverts mean_interference for R by bracketed root finding in log R.
/// I == 0 maps to an infinite radius. Throws ValidationError for I < 0.
EmptyBall empty_ball_radius(double interference, const NetworkParams& params);

/// Closed-form root of the quartic that mean_interference(R) == I reduces to
/// when alpha == 4.
double empty_ball_radius_alpha4(double interference, const NetworkParams& params);

/// Density of primary interferers on a ring of radius y around the secondary
/// RX, with the empty disk around the TX removed [TX per meter of radius].
double ring_intensity(double y, double r_i, double d, double lambda1);

/// Angular factor: the probability that the nearest primary (uniformly placed
/// on the empty-ball boundary) does not push the RX SIR below theta.
double nearest_interferer_factor(double r_i, double theta, const NetworkParams& params,
                                 const QuadratureConfig& cfg = {});

double access_prob_exact(double r_i, double theta, const NetworkParams& params,
                         const QuadratureConfig& cfg = {});

double access_prob_lb(double r_i, double theta, const NetworkParams& params,
                      const QuadratureConfig& cfg = {});

double access_prob(AccessBackend backend, double r_i, double theta,
                   const NetworkParams& params, const QuadratureConfig& cfg = {});

/// Small-interference asymptote (R_I >> d), evaluated exactly as the
/// published expression is written.
double access_prob_small_I(double r_i, double theta, const NetworkParams& params,
                           const QuadratureConfig& cfg = {});

/// Large-interference limit (R_I << d); independent of the sensed level.
double access_prob_large_I(double theta, const NetworkParams& params);

}  // namespace saplab
