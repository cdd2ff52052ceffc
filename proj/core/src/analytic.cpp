#include "saplab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace saplab {

namespace {

constexpr double kPi = std::numbers::pi;

// Primary interference power at the RX, normalised by the secondary signal:
// P1 theta d^alpha / P2.
double normalized_threshold(double theta, const NetworkParams& p) {
  return p.p1 * theta * std::pow(p.d, p.alpha) / p.p2;
}

// Laplace-functional weight 1 - E[exp(-s h y^-alpha)] = s / (y^alpha + s).
double laplace_weight(double y, double s, double alpha) {
  return 1.0 / (1.0 + std::pow(y, alpha) / s);
}

void require_radius(double r_i) {
  if (!(r_i > 0.0)) throw ValidationError("r_i", "empty-ball radius must be positive");
}

}  // namespace

double mean_interference(double radius, const NetworkParams& p) {
  return p.p1 * std::pow(radius, -p.alpha) +
         2.0 * kPi * p.lambda1 * p.p1 * std::pow(radius, 2.0 - p.alpha) / (p.alpha - 2.0);
}

EmptyBall empty_ball_radius(double interference, const NetworkParams& p) {
  if (!(interference >= 0.0) || std::isnan(interference)) {
    throw ValidationError("interference", "measured interference must be non-negative");
  }
  if (interference == 0.0) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  const double log_i = std::log(interference);
  auto residual = [&](double log_r) {
    return std::log(mean_interference(std::exp(log_r), p)) - log_i;
  };
  // The nearest-TX term alone exceeds I below r_lo; splitting I evenly
  // between the two terms gives a radius where the sum is at most I.
  const double r_lo = 0.5 * std::pow(p.p1 / interference, 1.0 / p.alpha);
  double r_hi = std::pow(2.0 * p.p1 / interference, 1.0 / p.alpha);
  if (p.lambda1 > 0.0) {
    const double ring = 4.0 * kPi * p.lambda1 * p.p1 / ((p.alpha - 2.0) * interference);
    r_hi = std::max(r_hi, std::pow(ring, 1.0 / (p.alpha - 2.0)));
  }
  RootConfig cfg;
  cfg.x_tol = 1e-15;
  const double log_r = find_root(residual, std::log(r_lo), std::log(r_hi), cfg);
  return {std::exp(log_r), interference};
}

double empty_ball_radius_alpha4(double interference, const NetworkParams& p) {
  if (!(interference > 0.0)) {
    throw ValidationError("interference", "measured interference must be positive");
  }
  const double a = kPi * p.lambda1 * p.p1;
  return std::sqrt((a + std::sqrt(a * a + 4.0 * p.p1 * interference)) /
                   (2.0 * interference));
}

double ring_intensity(double y, double r_i, double d, double lambda1) {
  if (y <= 0.0) return 0.0;
  if (y <= std::max(0.0, r_i - d)) return 0.0;
  if (y > r_i + d || d == 0.0) return 2.0 * kPi * lambda1 * y;
  const double arc = 2.0 * safe_acos((r_i * r_i - d * d - y * y) / (2.0 * d * y));
  return arc * lambda1 * y;
}

double nearest_interferer_factor(double r_i, double theta, const NetworkParams& p,
                                 const QuadratureConfig& cfg) {
  if (theta <= 0.0 || p.d == 0.0) return 1.0;
  if (std::isinf(r_i)) return 1.0;
  const double s = normalized_threshold(theta, p);
  const double half_alpha = 0.5 * p.alpha;
  auto integrand = [&](double t) {
    const double dist2 = r_i * r_i - 2.0 * p.d * r_i * std::cos(t) + p.d * p.d;
    const double path = std::pow(std::max(dist2, 0.0), half_alpha);
    return path / (path + s);
  };
  // Symmetric in t -> -t, so integrate over [0, pi] only.
  return std::clamp(integrate(integrand, 0.0, kPi, cfg).value / kPi, 0.0, 1.0);
}

double access_prob_exact(double r_i, double theta, const NetworkParams& p,
                         const QuadratureConfig& cfg) {
  if (!(theta >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  if (theta == 0.0 || p.d == 0.0 || std::isinf(r_i)) return 1.0;
  require_radius(r_i);

  const double s = normalized_threshold(theta, p);
  const double alpha = p.alpha;
  const double d = p.d;
  const double outer = r_i + d;

  auto full_ring = [&](double y) {
    return 2.0 * kPi * p.lambda1 * y * laplace_weight(y, s, alpha);
  };
  auto partial_ring = [&](double y) {
    return ring_intensity(y, r_i, d, p.lambda1) * laplace_weight(y, s, alpha);
  };

  const double scale = std::max(outer, std::pow(s, 1.0 / alpha));
  double exponent = integrate_semi_infinite(full_ring, outer, cfg, scale).value;
  exponent += integrate(partial_ring, std::abs(r_i - d), outer, cfg).value;
  if (r_i < d) exponent += integrate(full_ring, 0.0, d - r_i, cfg).value;

  const double angular = nearest_interferer_factor(r_i, theta, p, cfg);
  return std::clamp(angular * std::exp(-exponent), 0.0, 1.0);
}

double access_prob_lb(double r_i, double theta, const NetworkParams& p,
                      const QuadratureConfig& cfg) {
  if (!(theta >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  if (theta == 0.0 || p.d == 0.0) return 1.0;
  if (std::isinf(r_i)) return 0.0;
  require_radius(r_i);

  const double s = normalized_threshold(theta, p);
  const double rho = rho_const(p.alpha);
  const double two_over_alpha = 2.0 / p.alpha;
  double exponent;
  if (p.d > r_i) {
    exponent = kPi * p.lambda1 * std::pow(s, two_over_alpha) * rho;
  } else {
    // (R-d)^2 [rho (1 + s/(R-d)^alpha)^(2/alpha) - 1], rewritten so that it
    // stays finite as R -> d.
    const double gap = r_i - p.d;
    exponent = kPi * p.lambda1 *
               (rho * std::pow(std::pow(gap, p.alpha) + s, two_over_alpha) - gap * gap);
  }
  const double angular = nearest_interferer_factor(r_i, theta, p, cfg);
  return std::clamp(angular * std::exp(-exponent), 0.0, 1.0);
}

double access_prob(AccessBackend backend, double r_i, double theta,
                   const NetworkParams& params, const QuadratureConfig& cfg) {
  return backend == AccessBackend::Exact ? access_prob_exact(r_i, theta, params, cfg)
                                         : access_prob_lb(r_i, theta, params, cfg);
}

double access_prob_small_I(double r_i, double theta, const NetworkParams& p,
                           const QuadratureConfig& cfg) {
  if (!(theta >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  if (theta == 0.0 || p.d == 0.0 || std::isinf(r_i)) return 1.0;
  require_radius(r_i);
  const double s = normalized_threshold(theta, p);
  const double two_over_alpha = 2.0 / p.alpha;
  const double lower = std::pow(r_i * r_i / s, two_over_alpha);
  const double half_alpha = 0.5 * p.alpha;
  auto tail = [half_alpha](double u) { return 1.0 / (1.0 + std::pow(u, half_alpha)); };
  const double integral =
      integrate_semi_infinite(tail, lower, cfg, std::max(1.0, lower)).value;
  const double numer =
      p.p2 * std::exp(-kPi * p.lambda1 * std::pow(s, two_over_alpha) * integral);
  const double ratio = p.d / r_i;
  return numer / (p.p2 + p.p1 * theta * ratio * ratio);
}

double access_prob_large_I(double theta, const NetworkParams& p) {
  if (!(theta >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  if (theta == 0.0) return 1.0;
  const double exponent = kPi * p.lambda1 * p.d * p.d *
                          std::pow(p.p1 * theta / p.p2, 2.0 / p.alpha) *
                          rho_const(p.alpha);
  return p.p2 * std::exp(-exponent) / (p.p2 + p.p1 * theta);
}

}  // namespace saplab
