#include "saplab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "saplab/parallel.hpp"

namespace saplab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZ95 = 1.959963984540054;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Logical RNG streams.
constexpr std::uint64_t kStreamAccess = 1;
constexpr std::uint64_t kStreamAse = 2;
constexpr std::uint64_t kStreamOutage = 3;

constexpr std::int64_t kAccessChunk = 2048;
constexpr std::int64_t kDropChunk = 16;

void validate_network(const NetworkParams& params) {
  if (!(params.lambda1 >= 0.0)) {
    throw ValidationError("lambda1", "lambda1 must be non-negative");
  }
  NetworkParams probe = params;
  if (probe.lambda1 == 0.0) probe.lambda1 = 1.0;
  validate(probe);
}

std::int64_t draw_poisson(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

double wrap(double v, double w) {
  v = std::fmod(v, w);
  return v < 0.0 ? v + w : v;
}

Point random_offset(Point from, double d, double window_side, Rng& rng) {
  const double angle = 2.0 * kPi * draw_uniform(rng);
  return {wrap(from.x + d * std::cos(angle), window_side),
          wrap(from.y + d * std::sin(angle), window_side)};
}

// Cluster-robust interval for a ratio of per-drop counts combined with the
// Wilson interval of the pooled proportion; the wider of the two is kept.
struct RatioAccumulator {
  std::int64_t hits = 0;
  std::int64_t total = 0;
  double s2 = 0.0;
  double sn = 0.0;
  double n2 = 0.0;

  void add_drop(std::int64_t k, std::int64_t n) {
    hits += k;
    total += n;
    s2 += static_cast<double>(k) * static_cast<double>(k);
    sn += static_cast<double>(k) * static_cast<double>(n);
    n2 += static_cast<double>(n) * static_cast<double>(n);
  }
  void merge(const RatioAccumulator& o) {
    hits += o.hits;
    total += o.total;
    s2 += o.s2;
    sn += o.sn;
    n2 += o.n2;
  }
  Estimate estimate(std::int64_t drops, double scale) const {
    Estimate e;
    if (total == 0) return e;
    const Estimate w = wilson_estimate(hits, total);
    const double p = w.mean;
    double lo = w.ci_low;
    double hi = w.ci_high;
    if (drops > 1) {
      const double resid = std::max(0.0, s2 - 2.0 * p * sn + p * p * n2);
      const double n = static_cast<double>(total);
      const double var = static_cast<double>(drops) / static_cast<double>(drops - 1) * resid /
                         (n * n);
      const double hw = kZ95 * std::sqrt(var);
      lo = std::min(lo, std::max(0.0, p - hw));
      hi = std::max(hi, std::min(1.0, p + hw));
    }
    e.mean = scale * p;
    e.ci_low = scale * lo;
    e.ci_high = scale * hi;
    e.half_width_95 = 0.5 * (e.ci_high - e.ci_low);
    e.trials = total;
    return e;
  }
};

struct Cell {
  RatioAccumulator access;
  RatioAccumulator success;
  double sir_sum = 0.0;
  double sir_db_sum = 0.0;
  std::int64_t sir_count = 0;

  void merge(const Cell& o) {
    access.merge(o.access);
    success.merge(o.success);
    sir_sum += o.sir_sum;
    sir_db_sum += o.sir_db_sum;
    sir_count += o.sir_count;
  }
};

struct SecondaryLink {
  Point tx;
  Point rx;
  double sensed_tx = 0.0;  // after measurement error
  double sensed_rx = 0.0;  // after measurement error
  double primary_at_rx = 0.0;
  double signal = 0.0;
  double r_i = kInf;
  double u = 0.0;
};

// Tables of P_s per theta for the SaP protocols that are actually requested.
struct AccessTables {
  std::vector<AccessTable> exact;
  std::vector<AccessTable> lower;

  AccessTables(std::span<const Protocol> protocols, std::span<const double> thetas,
               const NetworkParams& params) {
    const bool want_exact =
        std::find(protocols.begin(), protocols.end(), Protocol::SapExact) != protocols.end();
    const bool want_lower = std::find(protocols.begin(), protocols.end(),
                                      Protocol::SapLowerBound) != protocols.end();
    for (double t : thetas) {
      if (want_exact) exact.emplace_back(AccessBackend::Exact, t, params);
      if (want_lower) lower.emplace_back(AccessBackend::LowerBound, t, params);
    }
  }
};

bool needs_radius(std::span<const Protocol> protocols) {
  return std::any_of(protocols.begin(), protocols.end(), [](Protocol p) {
    return p == Protocol::SapExact || p == Protocol::SapLowerBound;
  });
}

bool grants_access(Protocol protocol, std::size_t t, double theta, const SecondaryLink& link,
                   double nominal_signal, const AccessTables& tables) {
  switch (protocol) {
    case Protocol::SapExact:
      return link.u < tables.exact[t](link.r_i);
    case Protocol::SapLowerBound:
      return link.u < tables.lower[t](link.r_i);
    case Protocol::TxThreshold:
      return theta == 0.0 || nominal_signal > theta * link.sensed_tx;
    case Protocol::RxThreshold:
      return theta == 0.0 || nominal_signal > theta * link.sensed_rx;
    case Protocol::AlwaysOn:
      return true;
  }
  return true;
}

// Samples one network drop: primaries, secondary links and their sensing.
// The draw order is fixed so every protocol sees the same realization.
void sample_secondaries(const Scenario& s, bool want_radius, Rng& rng,
                        std::vector<Point>& primaries, std::vector<SecondaryLink>& links) {
  const NetworkParams& p = s.params;
  const double w = s.window_side;
  primaries = sample_ppp(p.lambda1, w, rng);
  const std::vector<Point> txs = sample_ppp(p.lambda2, w, rng);
  links.assign(txs.size(), SecondaryLink{});
  const double nominal_signal = p.p2 * path_gain(p.d * p.d, p.alpha);
  for (std::size_t l = 0; l < txs.size(); ++l) {
    SecondaryLink& link = links[l];
    link.tx = txs[l];
    link.rx = random_offset(link.tx, p.d, w, rng);
    const double at_tx = measure_interference(link.tx, primaries, p, w, rng, s.sensing);
    double faded_rx = 0.0;
    double mean_rx = 0.0;
    for (const Point& q : primaries) {
      const double g = p.p1 * path_gain(toroidal_distance2(q, link.rx, w), p.alpha);
      faded_rx += g * draw_fading(rng);
      mean_rx += g;
    }
    link.primary_at_rx = faded_rx;
    // Error draws happen even at sigma = 0 so runs that differ only in sigma
    // share every other random number.
    const double eps_tx = std::normal_distribution<double>(0.0, 1.0)(rng);
    const double eps_rx = std::normal_distribution<double>(0.0, 1.0)(rng);
    link.sensed_tx = at_tx * std::pow(10.0, s.error_sigma_db * eps_tx / 10.0);
    link.sensed_rx = (s.sensing == SensingMode::Faded ? faded_rx : mean_rx) *
                     std::pow(10.0, s.error_sigma_db * eps_rx / 10.0);
    link.signal = nominal_signal * draw_fading(rng);
    link.u = draw_uniform(rng);
    if (want_radius) {
      link.r_i = link.sensed_tx > 0.0 ? empty_ball_radius(link.sensed_tx, p).radius : kInf;
    }
  }
}

struct SweepContext {
  const Scenario& scenario;
  std::span<const Protocol> protocols;
  std::span<const double> thetas;
  const AccessTables& tables;
  bool want_radius;
};

void simulate_drop(const SweepContext& ctx, std::int64_t drop, std::vector<Cell>& cells,
                   std::vector<TrialRecord>* records, std::size_t max_records) {
  const Scenario& s = ctx.scenario;
  const NetworkParams& p = s.params;
  const double w = s.window_side;
  Rng rng = make_rng(s.master_seed, kStreamAse, static_cast<std::uint64_t>(drop));
  std::vector<Point> primaries;
  std::vector<SecondaryLink> links;
  sample_secondaries(s, ctx.want_radius, rng, primaries, links);

  const std::size_t n = links.size();
  std::vector<double> cross(n * n, 0.0);  // cross[j * n + l]: TX j -> RX l
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      if (j == l) continue;
      cross[j * n + l] = p.p2 * path_gain(toroidal_distance2(links[j].tx, links[l].rx, w),
                                          p.alpha) *
                         draw_fading(rng);
    }
  }

  const double nominal_signal = p.p2 * path_gain(p.d * p.d, p.alpha);
  const double beta = s.policy.beta;
  std::vector<char> active(n);
  for (std::size_t pi = 0; pi < ctx.protocols.size(); ++pi) {
    for (std::size_t t = 0; t < ctx.thetas.size(); ++t) {
      const double theta = ctx.thetas[t];
      std::int64_t granted = 0;
      for (std::size_t l = 0; l < n; ++l) {
        active[l] = grants_access(ctx.protocols[pi], t, theta, links[l], nominal_signal,
                                  ctx.tables);
        granted += active[l];
      }
      Cell& cell = cells[pi * ctx.thetas.size() + t];
      std::int64_t decoded = 0;
      const bool record = records != nullptr && pi == 0 && t == 0;
      for (std::size_t l = 0; l < n; ++l) {
        double sir = 0.0;
        bool ok = false;
        if (active[l]) {
          double interference = links[l].primary_at_rx;
          for (std::size_t j = 0; j < n; ++j) {
            if (active[j] && j != l) interference += cross[j * n + l];
          }
          sir = interference > 0.0 ? links[l].signal / interference : kInf;
          ok = sir > beta;
          decoded += ok;
          cell.sir_sum += sir;
          cell.sir_db_sum += 10.0 * std::log10(sir);
          ++cell.sir_count;
        }
        if (record && records->size() < max_records) {
          records->push_back(
              {links[l].sensed_tx, links[l].r_i, active[l] != 0, sir, ok});
        }
      }
      cell.access.add_drop(granted, static_cast<std::int64_t>(n));
      cell.success.add_drop(decoded, static_cast<std::int64_t>(n));
    }
  }
}

AseResult finish(const Cell& cell, Protocol protocol, double theta, const Scenario& s,
                 std::int64_t drops) {
  AseResult r;
  r.protocol = protocol;
  r.theta = theta;
  r.drops = drops;
  r.access_rate = cell.access.estimate(drops, 1.0);
  r.success = cell.success.estimate(drops, 1.0);
  r.ase = cell.success.estimate(drops, s.params.lambda2 * std::log1p(s.policy.beta));
  if (cell.sir_count > 0) {
    r.mean_sir_linear = cell.sir_sum / static_cast<double>(cell.sir_count);
    r.mean_sir_db = cell.sir_db_sum / static_cast<double>(cell.sir_count);
  }
  return r;
}

}  // namespace

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::SapExact:
      return "sap_exact";
    case Protocol::SapLowerBound:
      return "sap_lower_bound";
    case Protocol::TxThreshold:
      return "tx_threshold";
    case Protocol::RxThreshold:
      return "rx_threshold";
    case Protocol::AlwaysOn:
      return "always_on";
  }
  return "unknown";
}

const char* to_string(SensingMode mode) {
  return mode == SensingMode::Faded ? "faded" : "mean";
}

const Scenario& validate(const Scenario& s) {
  validate_network(s.params);
  validate(s.policy);
  if (!(s.window_side > 0.0) || !std::isfinite(s.window_side)) {
    throw ValidationError("window_side", "window_side must be positive");
  }
  if (s.trials < 1) throw ValidationError("trials", "trials must be at least 1");
  if (!(s.error_sigma_db >= 0.0)) {
    throw ValidationError("error_sigma_db", "error_sigma_db must be non-negative");
  }
  const double nn = s.params.lambda1 > 0.0 ? 0.5 / std::sqrt(s.params.lambda1) : 0.0;
  const double required = 20.0 * std::max(s.params.d, nn);
  if (s.window_side < required) {
    throw ValidationError("window_side", "window_side must be at least " +
                                             std::to_string(required) +
                                             " m to bound edge effects");
  }
  return s;
}

Estimate wilson_estimate(std::int64_t successes, std::int64_t trials) {
  if (trials < 1) throw ValidationError("trials", "trials must be at least 1");
  if (successes < 0 || successes > trials) {
    throw ValidationError("successes", "successes must lie in [0, trials]");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Estimate e;
  e.mean = p;
  e.ci_low = std::max(0.0, std::min(p, center - half));
  e.ci_high = std::min(1.0, std::max(p, center + half));
  e.half_width_95 = half;
  e.trials = trials;
  return e;
}

std::vector<Point> sample_ppp(double density, double window_side, Rng& rng) {
  if (!(density >= 0.0)) throw ValidationError("density", "density must be non-negative");
  const std::int64_t count = draw_poisson(density * window_side * window_side, rng);
  std::vector<Point> pts(static_cast<std::size_t>(count));
  std::uniform_real_distribution<double> coord(0.0, window_side);
  for (auto& pt : pts) {
    pt.x = coord(rng);
    pt.y = coord(rng);
  }
  return pts;
}

double toroidal_distance2(Point a, Point b, double window_side) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  dx = std::min(dx, window_side - dx);
  dy = std::min(dy, window_side - dy);
  return dx * dx + dy * dy;
}

double path_gain(double distance2, double alpha) {
  if (alpha == 4.0) return 1.0 / (distance2 * distance2);
  if (alpha == 3.0) return 1.0 / (distance2 * std::sqrt(distance2));
  return std::pow(distance2, -0.5 * alpha);
}

double measure_interference(Point at, std::span<const Point> primaries,
                            const NetworkParams& params, double window_side, Rng& rng,
                            SensingMode mode) {
  double total = 0.0;
  for (const Point& q : primaries) {
    const double g = params.p1 * path_gain(toroidal_distance2(q, at, window_side), params.alpha);
    total += mode == SensingMode::Faded ? g * draw_fading(rng) : g;
  }
  return total;
}

double inject_measurement_error(double interference, double sigma_db, Rng& rng) {
  if (!(interference >= 0.0)) {
    throw ValidationError("interference", "interference must be non-negative");
  }
  if (!(sigma_db >= 0.0)) throw ValidationError("sigma_db", "sigma_db must be non-negative");
  if (sigma_db == 0.0) return interference;
  const double eps = std::normal_distribution<double>(0.0, sigma_db)(rng);
  return interference * std::pow(10.0, eps / 10.0);
}

AccessTable::AccessTable(AccessBackend backend, double theta, const NetworkParams& params,
                         std::size_t points, const QuadratureConfig& cfg)
    : backend_(backend), theta_(theta), params_(params), cfg_(cfg) {
  if (!(theta >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  if (points < 2) throw ValidationError("points", "an access table needs at least 2 points");
  if (theta == 0.0 || params.d == 0.0) return;
  const double near = 1e-2 * params.d;
  const double far = 100.0 * std::max(params.d, params.lambda1 > 0.0
                                                     ? 1.0 / std::sqrt(params.lambda1)
                                                     : 1.0);
  log_lo_ = std::log(near);
  log_hi_ = std::log(far);
  step_ = (log_hi_ - log_lo_) / static_cast<double>(points - 1);
  values_.resize(points);
  parallel_for(points, [&](std::size_t k) {
    const double r = std::exp(log_lo_ + step_ * static_cast<double>(k));
    values_[k] = access_prob(backend_, r, theta_, params_, cfg_);
  });
}

double AccessTable::operator()(double r_i) const {
  if (values_.empty()) return 1.0;
  const double lr = std::log(r_i);
  if (!(lr >= log_lo_ && lr <= log_hi_)) return access_prob(backend_, r_i, theta_, params_, cfg_);
  const double pos = (lr - log_lo_) / step_;
  const auto k = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  const double frac = pos - static_cast<double>(k);
  return values_[k] + frac * (values_[k + 1] - values_[k]);
}

std::vector<Estimate> run_access_prob_experiment(const AccessExperimentConfig& cfg) {
  validate_network(cfg.params);
  if (!(cfg.r_i > 0.0)) throw ValidationError("r_i", "r_i must be positive");
  if (cfg.trials < 1) throw ValidationError("trials", "trials must be at least 1");
  for (double t : cfg.thetas) {
    if (!(t >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  }
  const double radius = 0.5 * cfg.window_side;
  if (!(radius > cfg.r_i + cfg.params.d)) {
    throw ValidationError("window_side", "sampling disk must contain the empty ball and RX");
  }
  if (!(cfg.bin_rel_width > 0.0 && cfg.bin_rel_width < 1.0)) {
    throw ValidationError("bin_rel_width", "bin_rel_width must lie in (0,1)");
  }

  const NetworkParams& p = cfg.params;
  const std::size_t nt = cfg.thetas.size();
  const bool empty_ball = cfg.mode == AccessExperimentMode::EmptyBall;
  const double signal_gain = p.p2 * path_gain(p.d * p.d, p.alpha);
  // The bin on R_I is an interval on I because mean_interference is decreasing.
  const double i_lo = mean_interference(cfg.r_i * (1.0 + cfg.bin_rel_width), p);
  const double i_hi = mean_interference(cfg.r_i * (1.0 - cfg.bin_rel_width), p);

  const std::int64_t chunks = (cfg.trials + kAccessChunk - 1) / kAccessChunk;
  std::vector<std::vector<std::int64_t>> hits(static_cast<std::size_t>(chunks),
                                              std::vector<std::int64_t>(nt, 0));
  std::vector<std::int64_t> binned(static_cast<std::size_t>(chunks), 0);

  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    Rng rng = make_rng(cfg.seed, kStreamAccess, c);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kAccessChunk;
    const std::int64_t end = std::min(cfg.trials, begin + kAccessChunk);
    std::vector<Point> pts;
    auto& h = hits[c];
    for (std::int64_t trial = begin; trial < end; ++trial) {
      Point rx{p.d, 0.0};
      double at_rx = 0.0;
      if (empty_ball) {
        const double a0 = 2.0 * kPi * draw_uniform(rng);
        const Point nearest{cfg.r_i * std::cos(a0), cfg.r_i * std::sin(a0)};
        const double dx0 = nearest.x - rx.x;
        at_rx += p.p1 * path_gain(dx0 * dx0 + nearest.y * nearest.y, p.alpha) * draw_fading(rng);
        const double inner2 = cfg.r_i * cfg.r_i;
        const double outer2 = radius * radius;
        const std::int64_t count = draw_poisson(p.lambda1 * kPi * (outer2 - inner2), rng);
        for (std::int64_t k = 0; k < count; ++k) {
          const double rr = std::sqrt(inner2 + draw_uniform(rng) * (outer2 - inner2));
          const double a = 2.0 * kPi * draw_uniform(rng);
          const double dx = rr * std::cos(a) - rx.x;
          const double dy = rr * std::sin(a);
          at_rx += p.p1 * path_gain(dx * dx + dy * dy, p.alpha) * draw_fading(rng);
        }
      } else {
        const std::int64_t count = draw_poisson(p.lambda1 * kPi * radius * radius, rng);
        pts.resize(static_cast<std::size_t>(count));
        double at_tx = 0.0;
        for (auto& q : pts) {
          const double rr = radius * std::sqrt(draw_uniform(rng));
          const double a = 2.0 * kPi * draw_uniform(rng);
          q = {rr * std::cos(a), rr * std::sin(a)};
          const double g = p.p1 * path_gain(q.x * q.x + q.y * q.y, p.alpha);
          at_tx += cfg.sensing == SensingMode::Faded ? g * draw_fading(rng) : g;
        }
        if (!(at_tx >= i_lo && at_tx <= i_hi)) continue;
        ++binned[c];
        const double a = 2.0 * kPi * draw_uniform(rng);
        rx = {p.d * std::cos(a), p.d * std::sin(a)};
        for (const auto& q : pts) {
          const double dx = q.x - rx.x;
          const double dy = q.y - rx.y;
          at_rx += p.p1 * path_gain(dx * dx + dy * dy, p.alpha) * draw_fading(rng);
        }
      }
      const double signal = signal_gain * draw_fading(rng);
      for (std::size_t t = 0; t < nt; ++t) {
        const double theta = cfg.thetas[t];
        if (theta == 0.0 || signal > theta * at_rx) ++h[t];
      }
    }
  });

  std::int64_t n = cfg.trials;
  if (!empty_ball) {
    n = 0;
    for (auto b : binned) n += b;
    if (n < cfg.min_bin_trials) {
      throw SamplingError("only " + std::to_string(n) + " trials landed within " +
                          std::to_string(cfg.bin_rel_width * 100.0) + "% of r_i (need " +
                          std::to_string(cfg.min_bin_trials) + ")");
    }
  }
  std::vector<Estimate> out(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    std::int64_t k = 0;
    for (const auto& h : hits) k += h[t];
    out[t] = wilson_estimate(k, n);
  }
  return out;
}

std::int64_t drops_for_trials(const Scenario& s) {
  const double per_drop = s.params.lambda2 * s.window_side * s.window_side;
  if (!(per_drop > 0.0)) return 1;
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(static_cast<double>(s.trials) / per_drop)));
}

AseSweep run_ase_sweep(const Scenario& scenario, std::span<const Protocol> protocols,
                       std::span<const double> thetas) {
  validate(scenario);
  if (protocols.empty()) throw ValidationError("protocols", "at least one protocol required");
  for (double t : thetas) {
    if (!(t >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  }
  const AccessTables tables(protocols, thetas, scenario.params);
  const SweepContext ctx{scenario, protocols, thetas, tables, needs_radius(protocols)};
  const std::size_t ncell = protocols.size() * thetas.size();
  const std::int64_t drops = drops_for_trials(scenario);
  const std::int64_t chunks = (drops + kDropChunk - 1) / kDropChunk;

  std::vector<std::vector<Cell>> partial(static_cast<std::size_t>(chunks),
                                         std::vector<Cell>(ncell));
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kDropChunk;
    const std::int64_t end = std::min(drops, begin + kDropChunk);
    for (std::int64_t d = begin; d < end; ++d) simulate_drop(ctx, d, partial[c], nullptr, 0);
  });
  std::vector<Cell> total(ncell);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < ncell; ++i) total[i].merge(part[i]);
  }

  AseSweep out;
  out.protocols.assign(protocols.begin(), protocols.end());
  out.thetas.assign(thetas.begin(), thetas.end());
  for (std::size_t pi = 0; pi < protocols.size(); ++pi) {
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      out.results.push_back(
          finish(total[pi * thetas.size() + t], protocols[pi], thetas[t], scenario, drops));
    }
  }
  return out;
}

AseResult run_ase_experiment(const Scenario& scenario) {
  const Protocol protocols[] = {scenario.protocol};
  const double thetas[] = {scenario.policy.theta};
  return run_ase_sweep(scenario, protocols, thetas).results.front();
}

std::vector<TrialRecord> collect_trial_records(const Scenario& scenario,
                                               std::size_t max_records) {
  validate(scenario);
  const Protocol protocols[] = {scenario.protocol};
  const double thetas[] = {scenario.policy.theta};
  const AccessTables tables(protocols, thetas, scenario.params);
  const SweepContext ctx{scenario, protocols, thetas, tables, needs_radius(protocols)};
  std::vector<Cell> cells(1);
  std::vector<TrialRecord> records;
  const std::int64_t drops = drops_for_trials(scenario);
  for (std::int64_t d = 0; d < drops && records.size() < max_records; ++d) {
    simulate_drop(ctx, d, cells, &records, max_records);
  }
  return records;
}

Estimate run_primary_outage_experiment(const Scenario& scenario, double theta) {
  validate(scenario);
  if (!(theta >= 0.0)) throw ValidationError("theta", "theta must be non-negative");
  const Protocol protocols[] = {scenario.protocol};
  const double thetas[] = {theta};
  const AccessTables tables(protocols, thetas, scenario.params);
  const bool want_radius = needs_radius(protocols);
  const NetworkParams& p = scenario.params;
  const double w = scenario.window_side;
  const Point center{0.5 * w, 0.5 * w};
  const double nominal_signal = p.p2 * path_gain(p.d * p.d, p.alpha);

  const std::int64_t drops = scenario.trials;
  const std::int64_t chunks = (drops + kAccessChunk - 1) / kAccessChunk;
  std::vector<std::int64_t> outages(static_cast<std::size_t>(chunks), 0);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kAccessChunk;
    const std::int64_t end = std::min(drops, begin + kAccessChunk);
    std::vector<Point> primaries;
    std::vector<SecondaryLink> links;
    for (std::int64_t d = begin; d < end; ++d) {
      Rng rng = make_rng(scenario.master_seed, kStreamOutage, static_cast<std::uint64_t>(d));
      sample_secondaries(scenario, want_radius, rng, primaries, links);
      if (primaries.empty()) {
        ++outages[c];
        continue;
      }
      std::size_t serving = 0;
      double best = kInf;
      for (std::size_t i = 0; i < primaries.size(); ++i) {
        const double r2 = toroidal_distance2(primaries[i], center, w);
        if (r2 < best) {
          best = r2;
          serving = i;
        }
      }
      const double signal = p.p1 * path_gain(best, p.alpha) * draw_fading(rng);
      double interference = 0.0;
      for (std::size_t i = 0; i < primaries.size(); ++i) {
        if (i == serving) continue;
        interference += p.p1 * path_gain(toroidal_distance2(primaries[i], center, w), p.alpha) *
                        draw_fading(rng);
      }
      for (const auto& link : links) {
        const double h = draw_fading(rng);
        if (grants_access(scenario.protocol, 0, theta, link, nominal_signal, tables)) {
          interference += p.p2 * path_gain(toroidal_distance2(link.tx, center, w), p.alpha) * h;
        }
      }
      if (signal <= p.gamma * interference) ++outages[c];
    }
  });
  std::int64_t k = 0;
  for (auto o : outages) k += o;
  return wilson_estimate(k, drops);
}

}  // namespace saplab
