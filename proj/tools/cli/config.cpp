#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "output.hpp"

namespace saplab::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ValidationError(key, key + ": '" + t + "' is not a number");
  }
  if (used != t.size() || !std::isfinite(v)) {
    throw ValidationError(key, key + ": '" + t + "' is not a finite number");
  }
  return v;
}

std::int64_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v < 1.0 || v != std::floor(v)) {
    throw ValidationError(key, key + " must be a positive integer");
  }
  return static_cast<std::int64_t>(v);
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const auto v = std::stoull(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(key, key + " must be an unsigned 64-bit integer");
}

template <typename E>
E parse_enum(const std::string& key, const std::string& text,
             std::initializer_list<std::pair<const char*, E>> options) {
  const std::string t = trim(text);
  std::string names;
  for (const auto& [name, value] : options) {
    if (t == name) return value;
    names += names.empty() ? name : std::string("|") + name;
  }
  throw ValidationError(key, key + " must be one of " + names + ", got '" + t + "'");
}

bool parse_bool(const std::string& key, const std::string& text) {
  return parse_enum<bool>(key, text, {{"true", true}, {"false", false}, {"1", true}, {"0", false}});
}

Protocol parse_protocol(const std::string& key, const std::string& text) {
  return parse_enum<Protocol>(key, text,
                              {{"sap_exact", Protocol::SapExact},
                               {"sap_lower_bound", Protocol::SapLowerBound},
                               {"tx_threshold", Protocol::TxThreshold},
                               {"rx_threshold", Protocol::RxThreshold},
                               {"always_on", Protocol::AlwaysOn}});
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ",") + format_number(x);
  return out;
}

const char* backend_name(AccessBackend b) {
  return b == AccessBackend::Exact ? "exact" : "lower_bound";
}

const char* variant_name(ThinningVariant v) {
  return v == ThinningVariant::Linear ? "linear" : "printed";
}

const char* outage_name(OutageReading r) {
  switch (r) {
    case OutageReading::Printed:
      return "printed";
    case OutageReading::Corrected:
      return "corrected";
    case OutageReading::Physical:
      return "physical";
  }
  return "corrected";
}

}  // namespace

std::vector<double> parse_number_list(const std::string& key, const std::string& value) {
  const std::string t = trim(value);
  std::vector<double> out;
  if (t.empty()) return out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ValidationError(key, key + ": ranges are written lo:hi:step");
    try {
      return db_grid(parse_number(key, parts[0]), parse_number(key, parts[1]),
                     parse_number(key, parts[2]));
    } catch (const ValidationError& e) {
      throw ValidationError(key, key + ": " + e.what());
    }
  }
  std::stringstream ss(t);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_number(key, item));
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  using Setter = std::function<void()>;
  const std::map<std::string, Setter> setters = {
      {"name", [&] { c.name = value; }},
      {"experiment",
       [&] {
         c.experiment = parse_enum<std::string>(
             key, value, {{"ase", "ase"}, {"access", "access"}, {"outage", "outage"}});
       }},
      {"lambda1_per_km2", [&] { c.lambda1_per_km2 = parse_number(key, value); }},
      {"lambda2_per_km2", [&] { c.lambda2_per_km2 = parse_number(key, value); }},
      {"p1_dbm", [&] { c.p1_dbm = parse_number(key, value); }},
      {"p2_dbm", [&] { c.p2_dbm = parse_number(key, value); }},
      {"alpha", [&] { c.alpha = parse_number(key, value); }},
      {"d_m", [&] { c.d_m = parse_number(key, value); }},
      {"tau", [&] { c.tau = parse_number(key, value); }},
      {"gamma_db", [&] { c.gamma_db = parse_number(key, value); }},
      {"theta_db", [&] { c.theta_db = parse_number_list(key, value); }},
      {"beta_db", [&] { c.beta_db = parse_number_list(key, value); }},
      {"i_dbm", [&] { c.i_dbm = parse_number_list(key, value); }},
      {"r_i_m", [&] { c.r_i_m = parse_number(key, value); }},
      {"sigma_db", [&] { c.sigma_db = parse_number_list(key, value); }},
      {"lambda2_sweep_per_km2", [&] { c.lambda2_sweep_per_km2 = parse_number_list(key, value); }},
      {"p2_sweep_dbm", [&] { c.p2_sweep_dbm = parse_number_list(key, value); }},
      {"trials", [&] { c.trials = parse_count(key, value); }},
      {"seed", [&] { c.seed = parse_seed(key, value); }},
      {"window_m", [&] { c.window_m = parse_number(key, value); }},
      {"out_dir", [&] { c.out_dir = value; }},
      {"protocols",
       [&] {
         c.protocols.clear();
         std::stringstream ss(value);
         for (std::string item; std::getline(ss, item, ',');) {
           c.protocols.push_back(parse_protocol(key, item));
         }
         if (c.protocols.empty()) throw ValidationError(key, "protocols must not be empty");
       }},
      {"backend",
       [&] {
         c.backend = parse_enum<AccessBackend>(
             key, value,
             {{"exact", AccessBackend::Exact}, {"lower_bound", AccessBackend::LowerBound}});
       }},
      {"variant",
       [&] {
         c.both_variants = value == "both";
         if (!c.both_variants) {
           c.variant = parse_enum<ThinningVariant>(
               key, value,
               {{"linear", ThinningVariant::Linear}, {"printed", ThinningVariant::AsPrintedLemma2}});
         }
       }},
      {"sensing",
       [&] {
         c.sensing = parse_enum<SensingMode>(
             key, value, {{"faded", SensingMode::Faded}, {"mean", SensingMode::Mean}});
       }},
      {"outage",
       [&] {
         c.outage = parse_enum<OutageReading>(key, value,
                                              {{"printed", OutageReading::Printed},
                                               {"corrected", OutageReading::Corrected},
                                               {"physical", OutageReading::Physical}});
       }},
      {"threshold",
       [&] {
         c.threshold = parse_enum<ThresholdMethod>(
             key, value,
             {{"operational", ThresholdMethod::Operational},
              {"printed", ThresholdMethod::PrintedEquation}});
       }},
      {"mode",
       [&] {
         c.mode = parse_enum<AccessExperimentMode>(
             key, value,
             {{"empty_ball", AccessExperimentMode::EmptyBall},
              {"ppp_conditional", AccessExperimentMode::PppConditional}});
       }},
      {"asymptotic", [&] { c.asymptotic = parse_bool(key, value); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ValidationError(key, "unknown config key '" + key + "'");
  it->second();
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::stringstream ss{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(ss, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(line_no),
                            "line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

NetworkParams ExperimentConfig::network() const {
  if (lambda1_per_km2 < 0.0) throw ValidationError("lambda1", "lambda1 must be positive");
  if (lambda2_per_km2 < 0.0) throw ValidationError("lambda2", "lambda2 must be non-negative");
  NetworkParams p;
  p.lambda1 = per_km2_to_per_m2(lambda1_per_km2);
  p.lambda2 = per_km2_to_per_m2(lambda2_per_km2);
  p.p1 = dbm_to_watts(p1_dbm);
  p.p2 = dbm_to_watts(p2_dbm);
  p.alpha = alpha;
  p.d = d_m;
  p.tau = tau;
  p.gamma = db_to_linear(gamma_db);
  return validate(p);
}

AnalysisOptions ExperimentConfig::analysis() const {
  AnalysisOptions o;
  o.backend = backend;
  o.thinning = variant;
  o.outage = outage;
  o.threshold = threshold;
  return o;
}

Scenario ExperimentConfig::scenario() const {
  Scenario s;
  s.params = network();
  s.protocol = protocols.front();
  s.policy.theta = db_to_linear(theta_db ? theta_db->front() : 0.0);
  s.policy.beta = db_to_linear(beta_db ? beta_db->front() : 0.0);
  s.window_side = window_m;
  s.trials = trials;
  s.master_seed = seed;
  s.error_sigma_db = sigma_db.empty() ? 0.0 : sigma_db.front();
  s.sensing = sensing;
  return s;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "name=" << name << "\nexperiment=" << experiment
      << "\nlambda1_per_km2=" << format_number(lambda1_per_km2)
      << "\nlambda2_per_km2=" << format_number(lambda2_per_km2)
      << "\np1_dbm=" << format_number(p1_dbm) << "\np2_dbm=" << format_number(p2_dbm)
      << "\nalpha=" << format_number(alpha) << "\nd_m=" << format_number(d_m)
      << "\ntau=" << format_number(tau) << "\ngamma_db=" << format_number(gamma_db)
      << "\ntheta_db=" << (theta_db ? join(*theta_db) : "default")
      << "\nbeta_db=" << (beta_db ? join(*beta_db) : "default") << "\ni_dbm=" << join(i_dbm)
      << "\nr_i_m=" << (r_i_m ? format_number(*r_i_m) : "none")
      << "\nsigma_db=" << join(sigma_db)
      << "\nlambda2_sweep_per_km2=" << join(lambda2_sweep_per_km2)
      << "\np2_sweep_dbm=" << join(p2_sweep_dbm) << "\ntrials=" << trials
      << "\nseed=" << seed << "\nwindow_m=" << format_number(window_m) << "\nprotocols=";
  for (std::size_t i = 0; i < protocols.size(); ++i) {
    out << (i ? "," : "") << to_string(protocols[i]);
  }
  out << "\nbackend=" << backend_name(backend)
      << "\nvariant=" << (both_variants ? "both" : variant_name(variant))
      << "\nsensing=" << to_string(sensing) << "\noutage=" << outage_name(outage)
      << "\nthreshold="
      << (threshold == ThresholdMethod::Operational ? "operational" : "printed")
      << "\nmode=" << (mode == AccessExperimentMode::EmptyBall ? "empty_ball" : "ppp_conditional")
      << "\nasymptotic=" << (asymptotic ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace saplab::cli
