#include "saplab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "saplab/error.hpp"

namespace saplab {

namespace {

// 15-point Kronrod abscissae (positive half) and weights; the 7-point Gauss
// rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;  // deterministic order among equal errors
  }
};

Segment gauss_kronrod(const RealFunction& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double value = kronrod * half;
  const double resasc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * kEps * std::abs(value));
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return {a, b, value, err, depth};
}

}  // namespace

const QuadratureConfig& validate(const QuadratureConfig& cfg) {
  if (!(cfg.rel_tol > 0.0)) throw ValidationError("rel_tol", "rel_tol must be positive");
  if (!(cfg.abs_tol > 0.0)) throw ValidationError("abs_tol", "abs_tol must be positive");
  if (cfg.max_depth < 1) throw ValidationError("max_depth", "max_depth must be at least 1");
  if (cfg.max_intervals < 1) {
    throw ValidationError("max_intervals", "max_intervals must be at least 1");
  }
  return cfg;
}

const RootConfig& validate(const RootConfig& cfg) {
  if (!(cfg.x_tol > 0.0)) throw ValidationError("x_tol", "x_tol must be positive");
  if (cfg.max_iters < 1) throw ValidationError("max_iters", "max_iters must be at least 1");
  return cfg;
}

QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureConfig& cfg) {
  validate(cfg);
  if (!(a <= b)) throw ValidationError("a", "integrate requires a <= b");
  if (a == b) return {};

  std::priority_queue<Segment, std::vector<Segment>, ByError> open;
  std::vector<Segment> frozen;  // segments that hit max_depth
  Segment first = gauss_kronrod(f, a, b, 0);
  double total = first.value;
  double total_err = first.error;
  open.push(first);
  int intervals = 1;

  while (!open.empty()) {
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (total_err <= target) break;
    if (intervals >= cfg.max_intervals) break;
    Segment worst = open.top();
    open.pop();
    if (worst.depth >= cfg.max_depth) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid, worst.depth + 1);
    Segment right = gauss_kronrod(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++intervals;
  }

  // Re-sum in a fixed order so the result does not carry cancellation noise
  // from the running updates.
  std::vector<Segment> all = std::move(frozen);
  while (!open.empty()) {
    all.push_back(open.top());
    open.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  QuadratureResult out;
  for (const auto& s : all) {
    out.value += s.value;
    out.abs_error += s.error;
  }
  out.intervals = intervals;
  const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
  out.converged = std::isfinite(out.value) && out.abs_error <= target;
  if (!out.converged && cfg.strict) {
    throw ConvergenceError("quadrature tolerance not met on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "]");
  }
  return out;
}

QuadratureResult integrate_semi_infinite(const RealFunction& f, double a,
                                         const QuadratureConfig& cfg, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("scale", "scale must be positive and finite");
  }
  auto mapped = [&](double t) {
    const double u = 1.0 - t;
    if (u <= 0.0) return 0.0;
    const double y = a + scale * t / u;
    const double v = f(y);
    return v == 0.0 ? 0.0 : v * scale / (u * u);
  };
  return integrate(mapped, 0.0, 1.0, cfg);
}

FixedRule composite_kronrod(double a, double b, int panels) {
  if (panels < 1) throw ValidationError("panels", "panels must be at least 1");
  if (!(a <= b)) throw ValidationError("a", "composite_kronrod requires a <= b");
  FixedRule rule;
  rule.nodes.reserve(15 * static_cast<std::size_t>(panels));
  rule.weights.reserve(15 * static_cast<std::size_t>(panels));
  const double width = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double half = 0.5 * width;
    const double center = a + (k + 0.5) * width;
    for (int j = 0; j < 7; ++j) {
      rule.nodes.push_back(center - half * kXgk[j]);
      rule.weights.push_back(half * kWgk[j]);
    }
    rule.nodes.push_back(center);
    rule.weights.push_back(half * kWgk[7]);
    for (int j = 6; j >= 0; --j) {
      rule.nodes.push_back(center + half * kXgk[j]);
      rule.weights.push_back(half * kWgk[j]);
    }
  }
  return rule;
}

double find_root(const RealFunction& f, double lo, double hi, const RootConfig& cfg) {
  validate(cfg);
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) {
    throw BracketError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (std::signbit(fb) == std::signbit(fc)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * kEps * std::abs(b) + 0.5 * cfg.x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points.
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw ConvergenceError("find_root: iteration cap reached");
}

double rho_const(double alpha) {
  if (!(alpha > 2.0)) throw ValidationError("alpha", "alpha must exceed 2");
  const double x = 2.0 * std::numbers::pi / alpha;
  return x / std::sin(x);
}

double rho_full(double x, double alpha) {
  if (x <= 0.0) return 0.0;
  return std::pow(x, 2.0 / alpha) * rho_const(alpha);
}

double rho_excl(double x, double alpha, const QuadratureConfig& cfg) {
  if (!(alpha > 2.0)) throw ValidationError("alpha", "alpha must exceed 2");
  if (x <= 0.0) return 0.0;
  // v = t^(-1/(a-1)) with a = alpha/2 maps int_1^inf dv / (x + v^a) onto
  // (1/(a-1)) int_0^1 dt / (1 + x t^(a/(a-1))), which is smooth on [0, 1].
  const double a = 0.5 * alpha;
  const double b = a / (a - 1.0);
  auto integrand = [x, b](double t) { return 1.0 / (1.0 + x * std::pow(t, b)); };
  return x * integrate(integrand, 0.0, 1.0, cfg).value / (a - 1.0);
}

double safe_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

}  // namespace saplab
