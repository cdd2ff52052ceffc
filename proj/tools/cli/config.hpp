#pragma once

// Experiment configuration in boundary units (dBm, per km^2, dB).
//
// Files are flat `key = value` text with `#` comments. Numeric lists accept
// either `a, b, c` or an inclusive range `lo:hi:step`.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saplab/optimizer.hpp"
#include "saplab/simulator.hpp"

namespace saplab::cli {

struct ExperimentConfig {
  std::string name = "experiment";
  std::string experiment = "ase";  // simulate: ase | access | outage

  double lambda1_per_km2 = 500.0;
  double lambda2_per_km2 = 200.0;
  double p1_dbm = 43.0;
  double p2_dbm = 23.0;
  double alpha = 4.0;
  double d_m = 2.0;
  double tau = 0.1;
  double gamma_db = 0.0;

  std::optional<std::vector<double>> theta_db;
  std::optional<std::vector<double>> beta_db;
  std::vector<double> i_dbm;
  std::optional<double> r_i_m;
  std::vector<double> sigma_db{0.0};
  std::vector<double> lambda2_sweep_per_km2;
  std::vector<double> p2_sweep_dbm;

  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  double window_m = 500.0;
  std::filesystem::path out_dir = "results";

  std::vector<Protocol> protocols{Protocol::SapExact};
  AccessBackend backend = AccessBackend::Exact;
  ThinningVariant variant = ThinningVariant::Linear;
  bool both_variants = false;
  SensingMode sensing = SensingMode::Faded;
  OutageReading outage = OutageReading::Corrected;
  ThresholdMethod threshold = ThresholdMethod::Operational;
  AccessExperimentMode mode = AccessExperimentMode::EmptyBall;
  bool asymptotic = false;

  /// SI parameters; throws ValidationError naming the offending field.
  NetworkParams network() const;
  AnalysisOptions analysis() const;
  Scenario scenario() const;
  /// Stable `key=value` listing of every field, used for the config hash.
  std::string canonical() const;
};

/// Applies `key = value` lines on top of the defaults. Unknown keys and
/// malformed values raise ValidationError with the key as field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one setting; shared by the file parser and command-line flags.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::vector<double> parse_number_list(const std::string& key, const std::string& value);

}  // namespace saplab::cli
