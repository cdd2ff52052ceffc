#pragma once

// Numerical kernels: adaptive Gauss-Kronrod quadrature, Brent root finding
// and the coverage integrals that appear in every SIR expression.

#include <functional>
#include <vector>

namespace saplab {

using RealFunction = std::function<double(double)>;

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 40;         ///< deepest bisection level of any subinterval
  int max_intervals = 2000;   ///< total subinterval budget
  bool strict = false;        ///< throw ConvergenceError instead of flagging
};

struct RootConfig {
  double x_tol = 1e-10;
  int max_iters = 200;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = true;
};

/// Nodes and weights of a fixed quadrature rule.
struct FixedRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Throws ValidationError when a config field is out of range.
const QuadratureConfig& validate(const QuadratureConfig& cfg);
const RootConfig& validate(const RootConfig& cfg);

/// Globally adaptive G7/K15 quadrature on [a, b]. The integrand is only
/// evaluated at interior nodes, so integrable endpoint singularities are fine.
/// When the budget runs out the best estimate is returned with
/// `converged == false` (or ConvergenceError is thrown if `cfg.strict`).
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// Integral over [a, inf) through y = a + scale * t / (1 - t), t in [0, 1).
/// `scale` should roughly match the length over which f decays.
QuadratureResult integrate_semi_infinite(const RealFunction& f, double a,
                                         const QuadratureConfig& cfg = {},
                                         double scale = 1.0);

/// Composite 15-point Kronrod rule with `panels` equal panels on [a, b].
FixedRule composite_kronrod(double a, double b, int panels);

/// Brent's method on a sign-changing bracket. Throws BracketError when
/// f(lo) and f(hi) share a sign and ConvergenceError on the iteration cap.
double find_root(const RealFunction& f, double lo, double hi,
                 const RootConfig& cfg = {});

/// (2 pi / alpha) csc(2 pi / alpha) == int_0^inf du / (1 + u^(alpha/2)).
double rho_const(double alpha);

/// x^(2/alpha) * rho_const(alpha).
double rho_full(double x, double alpha);

/// x^(2/alpha) * int_{x^(-2/alpha)}^inf du / (1 + u^(alpha/2)): the coverage
/// integral with the nearest interferer excluded. Evaluated on a finite
/// interval after substituting for the slowly decaying tail.
double rho_excl(double x, double alpha, const QuadratureConfig& cfg = {});

/// acos with its argument clamped to [-1, 1].
double safe_acos(double x);

}  // namespace saplab
