#include "saplab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "saplab/parallel.hpp"

namespace saplab {

namespace {

constexpr double kPi = std::numbers::pi;

// Panels of the fixed rule used for tabulated surfaces: [0, d] in r and the
// tail r > d in w = exp(-pi lambda1 (r^2 - d^2)).
constexpr int kInnerPanels = 6;
constexpr int kTailPanels = 40;

double access(double r, double x, const NetworkParams& p, const AnalysisOptions& o) {
  return access_prob(o.backend, r, x, p, o.quad);
}

double tail_radius(double w, const NetworkParams& p) {
  return std::sqrt(p.d * p.d - std::log(w) / (kPi * p.lambda1));
}

void require_theta(double theta) {
  if (!(theta >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
}

void require_beta(double beta) {
  if (!(beta > 0.0)) throw ValidationError("beta", "beta must be positive");
}

// Nodes r_k and weights w_k with sum_k w_k g(r_k) ~ int g(r) f_r(r) dr.
struct NearestRule {
  std::vector<double> r;
  std::vector<double> w;
};

NearestRule nearest_rule(const NetworkParams& p) {
  NearestRule rule;
  if (p.d > 0.0) {
    const FixedRule inner = composite_kronrod(0.0, p.d, kInnerPanels);
    for (std::size_t k = 0; k < inner.nodes.size(); ++k) {
      rule.r.push_back(inner.nodes[k]);
      rule.w.push_back(inner.weights[k] * nearest_distance_pdf(inner.nodes[k], p.lambda1));
    }
  }
  const double tail_mass = std::exp(-kPi * p.lambda1 * p.d * p.d);
  const FixedRule tail = composite_kronrod(0.0, 1.0, kTailPanels);
  for (std::size_t k = 0; k < tail.nodes.size(); ++k) {
    rule.r.push_back(tail_radius(tail.nodes[k], p));
    rule.w.push_back(tail.weights[k] * tail_mass);
  }
  return rule;
}

double golden_section_max(const RealFunction& f, double lo, double hi, double tol,
                          double& best_x) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  if (f1 >= f2) {
    best_x = x1;
    return f1;
  }
  best_x = x2;
  return f2;
}

void require_sorted(std::span<const double> grid, const char* name) {
  if (grid.empty()) throw ValidationError(name, "grid must be nonempty");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw ValidationError(name, "grid must be sorted ascending");
  }
}

}  // namespace

double nearest_distance_pdf(double r, double lambda1) {
  if (r < 0.0) return 0.0;
  return 2.0 * kPi * lambda1 * r * std::exp(-kPi * lambda1 * r * r);
}

double average_over_nearest(const RealFunction& g, const NetworkParams& p,
                            const QuadratureConfig& cfg) {
  double total = 0.0;
  if (p.d > 0.0) {
    auto head = [&](double r) { return g(r) * nearest_distance_pdf(r, p.lambda1); };
    total += integrate(head, 0.0, p.d, cfg).value;
  }
  auto tail = [&](double w) { return g(tail_radius(w, p)); };
  total += std::exp(-kPi * p.lambda1 * p.d * p.d) * integrate(tail, 0.0, 1.0, cfg).value;
  return total;
}

double avg_access_prob(double theta, const NetworkParams& params, const AnalysisOptions& opts) {
  validate(params);
  require_theta(theta);
  if (theta == 0.0) return 1.0;
  auto g = [&](double r) { return access(r, theta, params, opts); };
  return std::clamp(average_over_nearest(g, params, opts.quad), 0.0, 1.0);
}

double secondary_interference_factor(double beta, double phi_hat, const NetworkParams& p,
                                     ThinningVariant variant) {
  if (p.lambda2 == 0.0 || beta == 0.0 || phi_hat == 0.0 || p.d == 0.0) return 1.0;
  const double e = variant == ThinningVariant::Linear ? 1.0 : 2.0 / p.alpha;
  return std::exp(-kPi * p.lambda2 * std::pow(phi_hat, e) * p.d * p.d *
                  rho_full(beta, p.alpha));
}

double tx_success_prob(double r_i, double beta, double theta, const NetworkParams& params,
                       const AnalysisOptions& opts) {
  validate(params);
  require_beta(beta);
  require_theta(theta);
  const double phi = params.lambda2 > 0.0 ? avg_access_prob(theta, params, opts) : 0.0;
  return access(r_i, beta, params, opts) *
         secondary_interference_factor(beta, phi, params, opts.thinning);
}

double primary_outage_given(double phi_hat, double theta, const NetworkParams& p,
                            OutageReading reading, const QuadratureConfig& cfg) {
  const double x = reading == OutageReading::Printed ? theta : p.gamma;
  if (x == 0.0) return 0.0;
  const double e = 2.0 / p.alpha;
  const bool physical = reading == OutageReading::Physical;
  const double own = p.lambda1 * std::pow(physical ? p.p1 : p.p2, e);
  const double other = std::pow(physical ? p.p2 : p.p1, e);
  const double secondary = p.lambda2 * phi_hat * rho_full(x, p.alpha) * other;
  return 1.0 - own / (secondary + own * (rho_excl(x, p.alpha, cfg) + 1.0));
}

double primary_outage(double theta, const NetworkParams& params, const AnalysisOptions& opts) {
  validate(params);
  require_theta(theta);
  const double phi = params.lambda2 > 0.0 ? avg_access_prob(theta, params, opts) : 0.0;
  return primary_outage_given(phi, theta, params, opts.outage, opts.quad);
}

double min_access_threshold(const NetworkParams& params, const AnalysisOptions& opts) {
  validate(params);
  constexpr double kLogLo = -12.0;
  const double log_hi = std::log10(kThetaMax);

  if (opts.threshold == ThresholdMethod::PrintedEquation) {
    const double e = 2.0 / params.alpha;
    auto h = [&](double log_theta) {
      const double theta = std::pow(10.0, log_theta);
      const double phi = avg_access_prob(theta, params, opts);
      const double rho = rho_excl(theta, params.alpha, opts.quad);
      return params.lambda2 * phi * std::pow(params.p1, e) * rho_full(theta, params.alpha) *
                 (1.0 - params.tau) -
             params.lambda1 * std::pow(params.p2, e) *
                 (params.tau + rho * params.tau - rho);
    };
    constexpr double kStep = 0.25;
    double prev_x = kLogLo;
    double prev_h = h(prev_x);
    for (double x = kLogLo + kStep; x <= log_hi + 1e-12; x += kStep) {
      const double hx = h(x);
      if (std::signbit(hx) != std::signbit(prev_h)) {
        return std::pow(10.0, find_root(h, prev_x, x, opts.root));
      }
      prev_x = x;
      prev_h = hx;
    }
    throw BracketError("printed threshold equation has no root for theta in [1e-12, 1e6]");
  }

  auto excess = [&](double theta) { return primary_outage(theta, params, opts) - params.tau; };
  if (excess(0.0) <= 0.0) return 0.0;
  const double at_max = excess(kThetaMax);
  if (at_max > 0.0) {
    throw InfeasibleError("primary outage " + std::to_string(at_max + params.tau) +
                          " exceeds tau = " + std::to_string(params.tau) +
                          " even with secondaries fully suppressed");
  }
  auto in_log = [&](double log_theta) { return excess(std::pow(10.0, log_theta)); };
  if (in_log(kLogLo) <= 0.0) return 0.0;
  return std::pow(10.0, find_root(in_log, kLogLo, log_hi, opts.root));
}

double ase(double theta, double beta, const NetworkParams& params, const AnalysisOptions& opts) {
  validate(params);
  require_theta(theta);
  require_beta(beta);
  if (params.lambda2 == 0.0) return 0.0;
  const double phi = avg_access_prob(theta, params, opts);
  auto g = [&](double r) {
    const double a = access(r, theta, params, opts);
    return a == 0.0 ? 0.0 : a * access(r, beta, params, opts);
  };
  const double joint = average_over_nearest(g, params, opts.quad);
  return params.lambda2 * std::log1p(beta) *
         secondary_interference_factor(beta, phi, params, opts.thinning) * joint;
}

AseSurface ase_surface(const NetworkParams& params, std::span<const double> thetas,
                       std::span<const double> betas, const AnalysisOptions& opts) {
  validate(params);
  for (double t : thetas) require_theta(t);
  for (double b : betas) require_beta(b);

  const NearestRule rule = nearest_rule(params);
  std::vector<double> levels(thetas.begin(), thetas.end());
  levels.insert(levels.end(), betas.begin(), betas.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const std::size_t n = rule.r.size();
  std::vector<std::vector<double>> table(levels.size());
  parallel_for(levels.size(), [&](std::size_t i) {
    table[i].resize(n);
    for (std::size_t k = 0; k < n; ++k) table[i][k] = access(rule.r[k], levels[i], params, opts);
  });
  auto row = [&](double x) -> const std::vector<double>& {
    const auto it = std::lower_bound(levels.begin(), levels.end(), x);
    return table[static_cast<std::size_t>(it - levels.begin())];
  };

  AseSurface out;
  out.thetas.assign(thetas.begin(), thetas.end());
  out.betas.assign(betas.begin(), betas.end());
  out.phi_hat.resize(thetas.size());
  out.values.resize(thetas.size() * betas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto& pt = row(thetas[i]);
    double phi = 0.0;
    for (std::size_t k = 0; k < n; ++k) phi += rule.w[k] * pt[k];
    phi = thetas[i] == 0.0 ? 1.0 : std::clamp(phi, 0.0, 1.0);
    out.phi_hat[i] = phi;
    for (std::size_t j = 0; j < betas.size(); ++j) {
      const auto& pb = row(betas[j]);
      double joint = 0.0;
      for (std::size_t k = 0; k < n; ++k) joint += rule.w[k] * pt[k] * pb[k];
      out.values[i * betas.size() + j] =
          params.lambda2 * std::log1p(betas[j]) *
          secondary_interference_factor(betas[j], phi, params, opts.thinning) * joint;
    }
  }
  return out;
}

Optimum optimize(const NetworkParams& params, std::span<const double> theta_grid_db,
                 std::span<const double> beta_grid_db, const AnalysisOptions& opts,
                 bool refine, AseSurface* surface_out) {
  validate(params);
  require_sorted(theta_grid_db, "theta_grid_db");
  require_sorted(beta_grid_db, "beta_grid_db");

  Optimum best;
  best.theta_bar = min_access_threshold(params, opts);

  std::vector<double> thetas;
  for (double t_db : theta_grid_db) {
    const double t = db_to_linear(t_db);
    if (t >= best.theta_bar) thetas.push_back(t);
  }
  if (thetas.empty()) thetas.push_back(best.theta_bar);
  std::vector<double> betas;
  for (double b_db : beta_grid_db) betas.push_back(db_to_linear(b_db));

  const AseSurface surface = ase_surface(params, thetas, betas, opts);
  std::size_t bi = 0;
  std::size_t bj = 0;
  double bv = -1.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = 0; j < betas.size(); ++j) {
      if (surface.at(i, j) > bv) {
        bv = surface.at(i, j);
        bi = i;
        bj = j;
      }
    }
  }
  best.grid_theta_star = thetas[bi];
  best.grid_beta_star = betas[bj];
  best.grid_ase = bv;
  best.theta_star = thetas[bi];
  best.beta_star = betas[bj];
  best.ase = bv;

  if (refine && (thetas.size() > 1 || betas.size() > 1)) {
    constexpr double kTolDb = 1e-3;
    double value = ase(best.theta_star, best.beta_star, params, opts);
    if (thetas.size() > 1 && best.theta_star > 0.0) {
      double lo = linear_to_db(thetas[bi > 0 ? bi - 1 : bi]);
      const double hi = linear_to_db(thetas[bi + 1 < thetas.size() ? bi + 1 : bi]);
      if (!std::isfinite(lo)) lo = linear_to_db(thetas[bi]);
      if (best.theta_bar > 0.0) lo = std::max(lo, linear_to_db(best.theta_bar));
      if (hi > lo) {
        auto f = [&](double t_db) { return ase(db_to_linear(t_db), best.beta_star, params, opts); };
        double x = 0.0;
        const double v = golden_section_max(f, lo, hi, kTolDb, x);
        if (v > value) {
          value = v;
          best.theta_star = db_to_linear(x);
        }
      }
    }
    if (betas.size() > 1) {
      const double lo = linear_to_db(betas[bj > 0 ? bj - 1 : bj]);
      const double hi = linear_to_db(betas[bj + 1 < betas.size() ? bj + 1 : bj]);
      if (hi > lo) {
        auto f = [&](double b_db) { return ase(best.theta_star, db_to_linear(b_db), params, opts); };
        double x = 0.0;
        const double v = golden_section_max(f, lo, hi, kTolDb, x);
        if (v > value) {
          value = v;
          best.beta_star = db_to_linear(x);
        }
      }
    }
    best.ase = value;
  }
  best.lambda2_star = params.lambda2 * avg_access_prob(best.theta_star, params, opts);
  if (surface_out != nullptr) *surface_out = surface;
  return best;
}

double d_function(double beta, double theta_bar, const NetworkParams& params,
                  const AnalysisOptions& opts, double fd_rel_step) {
  validate(params);
  require_beta(beta);
  require_theta(theta_bar);
  if (!(fd_rel_step > 0.0)) throw ValidationError("fd_rel_step", "step must be positive");

  AnalysisOptions lb = opts;
  lb.backend = AccessBackend::LowerBound;
  // Tighter inner tolerance keeps quadrature noise out of the difference quotient.
  lb.quad.rel_tol = std::min(opts.quad.rel_tol, 1e-12);
  lb.quad.abs_tol = std::min(opts.quad.abs_tol, 1e-15);

  const double phi = avg_access_prob(theta_bar, params, lb);
  const double c0 = kPi * params.lambda2 * phi * params.d * params.d * rho_const(params.alpha);
  double h = std::max(1e-6, fd_rel_step * beta);
  if (h >= beta) h = 0.5 * beta;
  const double weight = -2.0 * c0 * std::pow(beta, (2.0 - params.alpha) / params.alpha) /
                            params.alpha +
                        1.0 / ((1.0 + beta) * std::log1p(beta));
  auto g = [&](double r) {
    const double base = access(r, theta_bar, params, lb);
    if (base == 0.0) return 0.0;
    const double p = access(r, beta, params, lb);
    const double dp =
        (access(r, beta + h, params, lb) - access(r, beta - h, params, lb)) / (2.0 * h);
    return base * (p * weight + dp);
  };
  return average_over_nearest(g, params, opts.quad);
}

AsymptoticSolution solve_beta_asymptotic(const NetworkParams& params,
                                         const AnalysisOptions& opts) {
  AsymptoticSolution out;
  out.theta_bar = min_access_threshold(params, opts);
  auto f = [&](double log_beta) {
    return d_function(std::exp(log_beta), out.theta_bar, params, opts);
  };
  constexpr int kSteps = 160;  // 0.25 dB over [0.01, 100]
  const double lo = std::log(0.01);
  const double hi = std::log(100.0);
  double prev_x = lo;
  double prev_f = f(lo);
  for (int k = 1; k <= kSteps; ++k) {
    const double x = lo + (hi - lo) * k / kSteps;
    const double fx = f(x);
    if (prev_f > 0.0 && fx <= 0.0) {
      out.beta_star = std::exp(find_root(f, prev_x, x, opts.root));
      return out;
    }
    prev_x = x;
    prev_f = fx;
  }
  throw BracketError("D(beta) has no sign change for beta in [0.01, 100]");
}

std::vector<double> db_grid(double lo_db, double hi_db, double step_db) {
  if (!(step_db > 0.0)) throw ValidationError("step_db", "grid step must be positive");
  if (!(hi_db >= lo_db)) throw ValidationError("hi_db", "grid upper end below lower end");
  const auto n = static_cast<std::size_t>(std::floor((hi_db - lo_db) / step_db + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) grid[k] = lo_db + step_db * static_cast<double>(k);
  return grid;
}

}  // namespace saplab
