#pragma once

// Reference implementations used to check the library. Nothing here calls
// the library's quadrature, root finder or RNG helpers.

#include <cstdint>
#include <functional>

#include "saplab/model.hpp"

namespace saplab::oracle {

/// Composite 8-point Gauss-Legendre rule with `panels` equal panels.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels);

/// Mean of P1 sum h |x|^-alpha for a nearest primary at `radius` and a PPP
/// outside the disk of that radius, truncated at `outer` (plus the closed
/// tail beyond `outer`), estimated over `drops` independent drops.
double campbell_mean_interference(double radius, const NetworkParams& params, double outer,
                                  int drops, std::uint64_t seed);

/// P_s(R_I, theta) by direct 2-D integration of the PPP Laplace functional
/// over TX-centred polar coordinates, times the angular nearest-primary term.
double access_prob_polar(double r_i, double theta, const NetworkParams& params,
                         int panels = 160);

/// Lower bound for d > R_I and its derivative in theta, both closed form up
/// to the angular integral.
struct ValueAndSlope {
  double value;
  double slope;
};
ValueAndSlope lower_bound_far_branch(double r_i, double theta, const NetworkParams& params);

/// Smallest theta on a log grid of `points` over [lo, hi] at which
/// predicate(theta) holds, or -1 if none does.
double first_on_log_grid(const std::function<bool(double)>& predicate, double lo, double hi,
                         int points);

/// Andrews-style primary-only outage at alpha = 4 through the arctan form
/// of the excluded coverage integral.
double cellular_outage_alpha4(double gamma);

}  // namespace saplab::oracle
