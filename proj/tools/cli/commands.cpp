#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "output.hpp"

namespace saplab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) { return format_number(v); }

std::string db(double linear) { return format_number(linear_to_db(linear)); }

std::vector<double> to_linear(const std::vector<double>& grid_db) {
  std::vector<double> out;
  out.reserve(grid_db.size());
  for (double v : grid_db) out.push_back(db_to_linear(v));
  return out;
}

const std::vector<double>& default_grid() {
  static const std::vector<double> grid = db_grid(-20.0, 30.0, 0.5);
  return grid;
}

std::vector<std::string> estimate_cells(const Estimate& e) {
  return {num(e.mean), num(e.ci_low), num(e.ci_high), std::to_string(e.trials)};
}

const char* variant_label(ThinningVariant v) {
  return v == ThinningVariant::Linear ? "linear" : "printed";
}

std::string canonical_for(const std::string& figure, const ExperimentConfig& c) {
  return "figure=" + figure + "\n" + c.canonical();
}

// ---------------------------------------------------------------- analyze

Files analyze_impl(const ExperimentConfig& c, const fs::path& dir, const std::string& stem,
                   const std::string& prov) {
  const NetworkParams p = c.network();
  const std::vector<double> thetas_db = c.theta_db.value_or(std::vector<double>{0.0});
  std::vector<double> interference;
  for (double i_dbm : c.i_dbm) interference.push_back(dbm_to_watts(i_dbm));
  if (c.r_i_m) {
    if (!(*c.r_i_m > 0.0)) throw ValidationError("r_i_m", "r_i_m must be positive");
    interference.push_back(mean_interference(*c.r_i_m, p));
  }
  if (interference.empty()) {
    throw ValidationError("i_dbm", "analyze needs i_dbm values or r_i_m");
  }
  const fs::path path = dir / (stem + "_access.csv");
  CsvWriter csv(path, prov,
                {"theta_db", "i_dbm", "r_i_m", "ps_exact", "ps_lb", "ps_small_i", "ps_large_i"});
  for (double i_w : interference) {
    const double r = empty_ball_radius(i_w, p).radius;
    for (double t_db : thetas_db) {
      const double t = db_to_linear(t_db);
      csv.row({num(t_db), num(watts_to_dbm(i_w)), num(r), num(access_prob_exact(r, t, p)),
               num(access_prob_lb(r, t, p)), num(access_prob_small_I(r, t, p)),
               num(access_prob_large_I(t, p))});
    }
  }
  return {path};
}

// --------------------------------------------------------------- optimize

struct SweepPoint {
  std::string variable = "none";
  double value = 0.0;
  NetworkParams params;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& c) {
  std::vector<SweepPoint> pts;
  const NetworkParams base = c.network();
  if (!c.lambda2_sweep_per_km2.empty()) {
    for (double v : c.lambda2_sweep_per_km2) {
      NetworkParams p = base;
      p.lambda2 = per_km2_to_per_m2(v);
      pts.push_back({"lambda2_per_km2", v, validate(p)});
    }
  } else if (!c.p2_sweep_dbm.empty()) {
    for (double v : c.p2_sweep_dbm) {
      NetworkParams p = base;
      p.p2 = dbm_to_watts(v);
      pts.push_back({"p2_dbm", v, validate(p)});
    }
  } else {
    pts.push_back({"none", 0.0, base});
  }
  return pts;
}

Files optimize_impl(const ExperimentConfig& c, const fs::path& dir, const std::string& stem,
                    const std::string& prov) {
  const std::vector<double> thetas = c.theta_db.value_or(default_grid());
  const std::vector<double> betas = c.beta_db.value_or(default_grid());
  std::vector<ThinningVariant> variants{c.variant};
  if (c.both_variants) variants = {ThinningVariant::Linear, ThinningVariant::AsPrintedLemma2};

  const fs::path csv_path = dir / (stem + "_optimum.csv");
  const fs::path surface_path = dir / (stem + "_surface.csv");
  const fs::path json_path = dir / (stem + "_optimum.json");
  CsvWriter csv(csv_path, prov,
                {"variant", "sweep", "sweep_value", "theta_bar_db", "theta_star_db",
                 "beta_star_db", "grid_theta_star_db", "grid_beta_star_db", "ase",
                 "lambda2_star_per_km2", "asymptotic_theta_bar_db", "asymptotic_beta_star_db"});
  CsvWriter surf(surface_path, prov,
                 {"variant", "sweep", "sweep_value", "theta_db", "beta_db", "phi_hat", "ase"});
  json doc;
  doc["provenance"] = prov;
  doc["results"] = json::array();

  for (ThinningVariant v : variants) {
    AnalysisOptions opts = c.analysis();
    opts.thinning = v;
    for (const SweepPoint& pt : sweep_points(c)) {
      AseSurface surface;
      const Optimum o = optimize(pt.params, thetas, betas, opts, true, &surface);
      std::string asym_theta = "";
      std::string asym_beta = "";
      json entry = {{"variant", variant_label(v)},
                    {"sweep", pt.variable},
                    {"sweep_value", pt.value},
                    {"theta_bar", o.theta_bar},
                    {"theta_star", o.theta_star},
                    {"beta_star", o.beta_star},
                    {"grid_theta_star", o.grid_theta_star},
                    {"grid_beta_star", o.grid_beta_star},
                    {"ase", o.ase},
                    {"lambda2_star", o.lambda2_star}};
      if (c.asymptotic) {
        AnalysisOptions lb = opts;
        lb.backend = AccessBackend::LowerBound;
        const AsymptoticSolution a = solve_beta_asymptotic(pt.params, lb);
        asym_theta = db(a.theta_bar);
        asym_beta = db(a.beta_star);
        entry["asymptotic"] = {{"theta_bar", a.theta_bar}, {"beta_star", a.beta_star}};
      }
      doc["results"].push_back(entry);
      csv.row({variant_label(v), pt.variable, num(pt.value), db(o.theta_bar), db(o.theta_star),
               db(o.beta_star), db(o.grid_theta_star), db(o.grid_beta_star), num(o.ase),
               num(per_m2_to_per_km2(o.lambda2_star)), asym_theta, asym_beta});
      for (std::size_t i = 0; i < surface.thetas.size(); ++i) {
        for (std::size_t j = 0; j < surface.betas.size(); ++j) {
          surf.row({variant_label(v), pt.variable, num(pt.value), db(surface.thetas[i]),
                    db(surface.betas[j]), num(surface.phi_hat[i]), num(surface.at(i, j))});
        }
      }
    }
  }
  std::ofstream(json_path, std::ios::binary | std::ios::trunc) << doc.dump(2) << '\n';
  return {csv_path, surface_path, json_path};
}

// --------------------------------------------------------------- simulate

const std::vector<std::string> kSimulationHeader = {
    "experiment", "protocol", "theta_db", "sigma_db", "estimand",
    "value",      "ci_low",   "ci_high",  "trials",   "seed"};

void estimate_row(CsvWriter& csv, const std::string& experiment, const std::string& protocol,
                  double theta_db, double sigma_db, const std::string& estimand,
                  const Estimate& e, std::uint64_t seed) {
  csv.row({experiment, protocol, num(theta_db), num(sigma_db), estimand, num(e.mean),
           num(e.ci_low), num(e.ci_high), std::to_string(e.trials), std::to_string(seed)});
}

void value_row(CsvWriter& csv, const std::string& experiment, const std::string& protocol,
               double theta_db, double sigma_db, const std::string& estimand, double value,
               std::uint64_t seed) {
  csv.row({experiment, protocol, num(theta_db), num(sigma_db), estimand, num(value), "", "", "",
           std::to_string(seed)});
}

Files simulate_impl(const ExperimentConfig& c, const fs::path& dir, const std::string& stem,
                    const std::string& prov) {
  const std::vector<double> thetas_db = c.theta_db.value_or(std::vector<double>{0.0});
  const std::vector<double> thetas = to_linear(thetas_db);
  const fs::path path = dir / (stem + "_simulation.csv");
  Scenario s = c.scenario();

  if (c.experiment == "access") {
    if (!c.r_i_m) throw ValidationError("r_i_m", "the access experiment needs r_i_m");
    AccessExperimentConfig a;
    a.params = c.network();
    a.thetas = thetas;
    a.r_i = *c.r_i_m;
    a.trials = c.trials;
    a.seed = c.seed;
    a.mode = c.mode;
    a.window_side = c.window_m;
    a.sensing = c.sensing;
    const auto est = run_access_prob_experiment(a);
    CsvWriter csv(path, prov, kSimulationHeader);
    const std::string mode =
        c.mode == AccessExperimentMode::EmptyBall ? "empty_ball" : "ppp_conditional";
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      estimate_row(csv, "access", mode, thetas_db[t], 0.0, "access_prob", est[t], c.seed);
      value_row(csv, "access", "analysis", thetas_db[t], 0.0, "ps_exact",
                access_prob_exact(a.r_i, thetas[t], a.params), c.seed);
      value_row(csv, "access", "analysis", thetas_db[t], 0.0, "ps_lb",
                access_prob_lb(a.r_i, thetas[t], a.params), c.seed);
    }
    return {path};
  }

  CsvWriter csv(path, prov, kSimulationHeader);
  if (c.experiment == "outage") {
    validate(s);
    AnalysisOptions opts = c.analysis();
    for (double sigma : c.sigma_db) {
      s.error_sigma_db = sigma;
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        const Estimate e = run_primary_outage_experiment(s, thetas[t]);
        estimate_row(csv, "outage", to_string(s.protocol), thetas_db[t], sigma, "primary_outage",
                     e, c.seed);
      }
    }
    const NetworkParams& p = s.params;
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      const double phi = p.lambda2 > 0.0 ? avg_access_prob(thetas[t], p, opts) : 0.0;
      const std::pair<const char*, OutageReading> readings[] = {
          {"outage_printed", OutageReading::Printed},
          {"outage_corrected", OutageReading::Corrected},
          {"outage_physical", OutageReading::Physical}};
      for (const auto& [label, reading] : readings) {
        value_row(csv, "outage", "analysis", thetas_db[t], 0.0, label,
                  primary_outage_given(phi, thetas[t], p, reading), c.seed);
      }
    }
    return {path};
  }

  for (double sigma : c.sigma_db) {
    s.error_sigma_db = sigma;
    const AseSweep sweep = run_ase_sweep(s, c.protocols, thetas);
    for (std::size_t pi = 0; pi < c.protocols.size(); ++pi) {
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        const AseResult& r = sweep.at(pi, t);
        const std::string proto = to_string(r.protocol);
        estimate_row(csv, "ase", proto, thetas_db[t], sigma, "ase", r.ase, c.seed);
        estimate_row(csv, "ase", proto, thetas_db[t], sigma, "access_rate", r.access_rate,
                     c.seed);
        estimate_row(csv, "ase", proto, thetas_db[t], sigma, "success", r.success, c.seed);
        value_row(csv, "ase", proto, thetas_db[t], sigma, "mean_sir_linear", r.mean_sir_linear,
                  c.seed);
        value_row(csv, "ase", proto, thetas_db[t], sigma, "mean_sir_db", r.mean_sir_db, c.seed);
      }
    }
  }
  return {path};
}

// -------------------------------------------------------------- reproduce

struct FigureContext {
  std::string figure;
  fs::path dir;
  std::uint64_t seed;
  std::optional<std::int64_t> trials;
  const CommandOptions* opts;
};

ExperimentConfig figure_base(const FigureContext& f) {
  ExperimentConfig c;
  c.name = f.figure;
  c.seed = f.seed;
  if (f.opts->variant) apply_setting(c, "variant", *f.opts->variant);
  if (f.opts->sensing) apply_setting(c, "sensing", *f.opts->sensing);
  if (f.opts->outage) apply_setting(c, "outage", *f.opts->outage);
  return c;
}

Files reproduce_fig5(const FigureContext& f) {
  ExperimentConfig c = figure_base(f);
  c.lambda1_per_km2 = 10.0;
  c.window_m = 1000.0;
  const NetworkParams p = c.network();
  const std::string prov = provenance("reproduce", canonical_for(f.figure, c), f.seed);
  const double normalization = dbm_to_watts(kDefaultSirNormalizationDbm);

  Rng rng = make_rng(f.seed, 5, 0);
  const std::vector<Point> primaries = sample_ppp(p.lambda1, c.window_m, rng);
  const fs::path path = f.dir / "fig5_points.csv";
  CsvWriter csv(path, prov,
                {"point", "x_m", "y_m", "measured_i_dbm", "sir_tx_db", "r_i_m",
                 "predicted_median_sir_rx_db", "simulated_mean_sir_rx_db"});
  constexpr int kSide = 5;
  constexpr int kRxAngles = 8;
  const double spacing = c.window_m / kSide;
  for (int k = 0; k < kSide * kSide; ++k) {
    const Point tx{spacing * (k % kSide + 0.5), spacing * (k / kSide + 0.5)};
    const double i_tx =
        measure_interference(tx, primaries, p, c.window_m, rng, SensingMode::Faded);
    const double r = empty_ball_radius(i_tx, p).radius;
    // Median RX SIR: the theta at which the predicted access probability is 1/2.
    auto half = [&](double log_theta) {
      return access_prob_exact(r, std::exp(log_theta), p) - 0.5;
    };
    const double median = std::exp(find_root(half, std::log(1e-6), std::log(1e9)));
    double sir_db_sum = 0.0;
    for (int a = 0; a < kRxAngles; ++a) {
      const double ang = 2.0 * std::numbers::pi * a / kRxAngles;
      const Point rx{tx.x + p.d * std::cos(ang), tx.y + p.d * std::sin(ang)};
      const double i_rx =
          measure_interference(rx, primaries, p, c.window_m, rng, SensingMode::Faded);
      const double sig = p.p2 * path_gain(p.d * p.d, p.alpha) * draw_fading(rng);
      sir_db_sum += linear_to_db(sig / i_rx);
    }
    csv.row({std::to_string(k), num(tx.x), num(tx.y), num(watts_to_dbm(i_tx)),
             db(normalization / i_tx), num(r), db(median), num(sir_db_sum / kRxAngles)});
  }
  return {path};
}

Files reproduce_fig6(const FigureContext& f) {
  ExperimentConfig c = figure_base(f);
  c.theta_db = db_grid(-10.0, 20.0, 2.0);
  c.trials = f.trials.value_or(100000);
  c.protocols = {Protocol::SapExact, Protocol::TxThreshold, Protocol::RxThreshold};
  const std::string prov = provenance("reproduce", canonical_for(f.figure, c), f.seed);
  const Scenario s = c.scenario();
  const std::vector<double> thetas = to_linear(*c.theta_db);
  const AseSweep sweep = run_ase_sweep(s, c.protocols, thetas);
  Files files;
  for (std::size_t pi = 0; pi < c.protocols.size(); ++pi) {
    const fs::path path =
        f.dir / ("fig6_" + std::string(to_string(c.protocols[pi])) + ".csv");
    CsvWriter csv(path, prov,
                  {"theta_db", "mean_sir_linear", "mean_sir_db", "access_rate", "trials", "seed"});
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      const AseResult& r = sweep.at(pi, t);
      csv.row({num((*c.theta_db)[t]), num(r.mean_sir_linear), num(r.mean_sir_db),
               num(r.access_rate.mean), std::to_string(r.access_rate.trials),
               std::to_string(f.seed)});
    }
    files.push_back(path);
  }
  return files;
}

Files reproduce_fig7(const FigureContext& f) {
  ExperimentConfig c = figure_base(f);
  c.lambda1_per_km2 = 7000.0;
  c.p1_dbm = 11.3;
  c.p2_dbm = 5.0;
  c.alpha = 3.0;
  c.r_i_m = 3.6;
  c.theta_db = db_grid(-10.0, 20.0, 2.0);
  c.trials = f.trials.value_or(200000);
  const std::string prov = provenance("reproduce", canonical_for(f.figure, c), f.seed);
  const std::vector<double> thetas = to_linear(*c.theta_db);
  Files files;
  for (double d : {1.2, 2.0}) {
    c.d_m = d;
    const NetworkParams p = c.network();
    const std::string tag = "d" + num(d);
    const fs::path analysis = f.dir / ("fig7_analysis_" + tag + ".csv");
    CsvWriter a(analysis, prov, {"theta_db", "ps_exact", "ps_lb"});
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      a.row({num((*c.theta_db)[t]), num(access_prob_exact(*c.r_i_m, thetas[t], p)),
             num(access_prob_lb(*c.r_i_m, thetas[t], p))});
    }
    AccessExperimentConfig e;
    e.params = p;
    e.thetas = thetas;
    e.r_i = *c.r_i_m;
    e.trials = c.trials;
    e.seed = f.seed;
    e.window_side = c.window_m;
    const auto est = run_access_prob_experiment(e);
    const fs::path simulation = f.dir / ("fig7_simulation_" + tag + ".csv");
    CsvWriter s(simulation, prov, {"theta_db", "value", "ci_low", "ci_high", "trials", "seed"});
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      auto cells = estimate_cells(est[t]);
      cells.insert(cells.begin(), num((*c.theta_db)[t]));
      cells.push_back(std::to_string(f.seed));
      s.row(cells);
    }
    files.push_back(analysis);
    files.push_back(simulation);
  }
  return files;
}

Files reproduce_fig8(const FigureContext& f) {
  ExperimentConfig c = figure_base(f);
  c.theta_db = db_grid(-10.0, 20.0, 1.0);
  c.beta_db = std::vector<double>{0.0};
  c.trials = f.trials.value_or(200000);
  c.protocols = {Protocol::SapExact, Protocol::SapLowerBound, Protocol::TxThreshold,
                 Protocol::RxThreshold, Protocol::AlwaysOn};
  const std::string prov = provenance("reproduce", canonical_for(f.figure, c), f.seed);
  const NetworkParams p = c.network();
  const std::vector<double> thetas = to_linear(*c.theta_db);
  const double beta = db_to_linear(c.beta_db->front());
  Files files;
  for (AccessBackend b : {AccessBackend::Exact, AccessBackend::LowerBound}) {
    AnalysisOptions opts = c.analysis();
    opts.backend = b;
    const fs::path path = f.dir / (std::string("fig8_analysis_") +
                                   (b == AccessBackend::Exact ? "exact" : "lower_bound") + ".csv");
    CsvWriter csv(path, prov, {"theta_db", "ase", "phi_hat"});
    const std::vector<double> one_beta{beta};
    const AseSurface surface = ase_surface(p, thetas, one_beta, opts);
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      csv.row({num((*c.theta_db)[t]), num(surface.at(t, 0)), num(surface.phi_hat[t])});
    }
    files.push_back(path);
  }
  const Scenario s = c.scenario();
  const AseSweep sweep = run_ase_sweep(s, c.protocols, thetas);
  for (std::size_t pi = 0; pi < c.protocols.size(); ++pi) {
    const fs::path path =
        f.dir / ("fig8_simulation_" + std::string(to_string(c.protocols[pi])) + ".csv");
    CsvWriter csv(path, prov, {"theta_db", "value", "ci_low", "ci_high", "trials", "seed"});
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      auto cells = estimate_cells(sweep.at(pi, t).ase);
      cells.insert(cells.begin(), num((*c.theta_db)[t]));
      cells.push_back(std::to_string(f.seed));
      csv.row(cells);
    }
    files.push_back(path);
  }
  return files;
}

Files reproduce_fig9(const FigureContext& f) {
  ExperimentConfig c = figure_base(f);
  c.gamma_db = -10.0;
  c.tau = 0.1;
  c.lambda2_sweep_per_km2 = {50.0, 100.0, 200.0, 400.0};
  const std::string prov = provenance("reproduce", canonical_for(f.figure, c), f.seed);
  const fs::path search = f.dir / "fig9_search.csv";
  const fs::path asym = f.dir / "fig9_asymptotic.csv";
  CsvWriter s(search, prov,
              {"lambda2_per_km2", "theta_bar_db", "theta_star_db", "beta_star_db",
               "grid_theta_star_db", "grid_beta_star_db", "ase", "lambda2_star_per_km2"});
  CsvWriter a(asym, prov, {"lambda2_per_km2", "theta_bar_db", "beta_star_db"});
  AnalysisOptions opts = c.analysis();
  AnalysisOptions lb = opts;
  lb.backend = AccessBackend::LowerBound;
  for (const SweepPoint& pt : sweep_points(c)) {
    const Optimum o = optimize(pt.params, db_grid(-20.0, 50.0, 0.5), default_grid(), opts);
    s.row({num(pt.value), db(o.theta_bar), db(o.theta_star), db(o.beta_star),
           db(o.grid_theta_star), db(o.grid_beta_star), num(o.ase),
           num(per_m2_to_per_km2(o.lambda2_star))});
    const AsymptoticSolution r = solve_beta_asymptotic(pt.params, lb);
    a.row({num(pt.value), db(r.theta_bar), db(r.beta_star)});
  }
  return {search, asym};
}

Files reproduce_fig10(const FigureContext& f) {
  ExperimentConfig c = figure_base(f);
  c.theta_db = std::vector<double>{10.0};
  c.beta_db = std::vector<double>{0.0};
  c.sigma_db = db_grid(0.0, 6.0, 1.0);
  c.trials = f.trials.value_or(100000);
  c.protocols = {Protocol::SapExact, Protocol::TxThreshold};
  const std::string prov = provenance("reproduce", canonical_for(f.figure, c), f.seed);
  Scenario s = c.scenario();
  const std::vector<double> thetas{s.policy.theta};
  std::vector<AseSweep> runs;
  for (double sigma : c.sigma_db) {
    s.error_sigma_db = sigma;
    runs.push_back(run_ase_sweep(s, c.protocols, thetas));
  }
  Files files;
  for (std::size_t pi = 0; pi < c.protocols.size(); ++pi) {
    const fs::path path = f.dir / ("fig10_" + std::string(to_string(c.protocols[pi])) + ".csv");
    CsvWriter csv(path, prov, {"sigma_db", "value", "ci_low", "ci_high", "trials", "seed"});
    for (std::size_t k = 0; k < c.sigma_db.size(); ++k) {
      auto cells = estimate_cells(runs[k].at(pi, 0).ase);
      cells.insert(cells.begin(), num(c.sigma_db[k]));
      cells.push_back(std::to_string(f.seed));
      csv.row(cells);
    }
    files.push_back(path);
  }
  return files;
}

}  // namespace

ExperimentConfig effective_config(const CommandOptions& opts) {
  ExperimentConfig c = opts.config ? load_config(*opts.config) : ExperimentConfig{};
  if (opts.out) c.out_dir = *opts.out;
  if (opts.seed) c.seed = *opts.seed;
  if (opts.trials) {
    if (*opts.trials < 1) throw ValidationError("trials", "trials must be at least 1");
    c.trials = *opts.trials;
  }
  if (opts.variant) apply_setting(c, "variant", *opts.variant);
  if (opts.sensing) apply_setting(c, "sensing", *opts.sensing);
  if (opts.outage) apply_setting(c, "outage", *opts.outage);
  return c;
}

Files cmd_analyze(const CommandOptions& opts) {
  const ExperimentConfig c = effective_config(opts);
  return analyze_impl(c, c.out_dir, c.name, provenance("analyze", c.canonical(), c.seed));
}

Files cmd_optimize(const CommandOptions& opts) {
  const ExperimentConfig c = effective_config(opts);
  return optimize_impl(c, c.out_dir, c.name, provenance("optimize", c.canonical(), c.seed));
}

Files cmd_simulate(const CommandOptions& opts) {
  const ExperimentConfig c = effective_config(opts);
  return simulate_impl(c, c.out_dir, c.name, provenance("simulate", c.canonical(), c.seed));
}

const std::vector<std::string>& known_figures() {
  static const std::vector<std::string> figures = {"fig5", "fig6", "fig7",
                                                   "fig8", "fig9", "fig10"};
  return figures;
}

Files cmd_reproduce(const std::string& figure, const CommandOptions& opts) {
  const FigureContext f{figure, opts.out.value_or("results") / figure, opts.seed.value_or(1), opts.trials, &opts};
  if (f.trials && *f.trials < 1) throw ValidationError("trials", "trials must be at least 1");
  if (figure == "fig5") return reproduce_fig5(f);
  if (figure == "fig6") return reproduce_fig6(f);
  if (figure == "fig7") return reproduce_fig7(f);
  if (figure == "fig8") return reproduce_fig8(f);
  if (figure == "fig9") return reproduce_fig9(f);
  if (figure == "fig10") return reproduce_fig10(f);
  std::string names;
  for (const auto& n : known_figures()) names += (names.empty() ? "" : ", ") + n;
  throw ValidationError("figure", "unknown figure '" + figure + "' (expected one of " + names + ")");
}

int run_guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: invalid " << e.field() << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const InfeasibleError& e) {
    err << "error: infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConvergenceError& e) {
    err << "error: no convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const SamplingError& e) {
    err << "error: sampling: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace saplab::cli
