#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"

using namespace saplab;
using namespace saplab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("saplab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "experiment.cfg";
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

using Row = std::vector<std::string>;

// Data rows after the provenance comment and header.
std::vector<Row> read_rows(const fs::path& path, Row* header = nullptr) {
  std::ifstream in(path);
  std::string line;
  std::vector<Row> rows;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    Row cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!seen_header) {
      seen_header = true;
      if (header) *header = cells;
      continue;
    }
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const Row& header, const std::string& name) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

int run_exe(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(SAP_LAB_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, ParsesListsRangesAndComments) {
  const ExperimentConfig c = parse_config(
      "# comment\n"
      "name = demo\n"
      "theta_db = -10:10:5   # inline\n"
      "beta_db = 1, 2.5,4\n"
      "protocols = sap_exact, always_on\n"
      "\n"
      "lambda1_per_km2 = 7e3\n");
  EXPECT_EQ(c.name, "demo");
  ASSERT_TRUE(c.theta_db);
  EXPECT_EQ(*c.theta_db, (std::vector<double>{-10, -5, 0, 5, 10}));
  EXPECT_EQ(*c.beta_db, (std::vector<double>{1, 2.5, 4}));
  ASSERT_EQ(c.protocols.size(), 2u);
  EXPECT_EQ(c.protocols[1], Protocol::AlwaysOn);
  EXPECT_NEAR(c.network().lambda1, 7e-3, 1e-18);
}

TEST(Config, BoundaryUnitsConvert) {
  ExperimentConfig c;
  c.p1_dbm = 43.0;
  c.gamma_db = -10.0;
  c.lambda2_per_km2 = 200.0;
  const NetworkParams p = c.network();
  EXPECT_NEAR(p.p1, dbm_to_watts(43.0), 1e-12);
  EXPECT_NEAR(p.gamma, 0.1, 1e-15);
  EXPECT_NEAR(p.lambda2, 2e-4, 1e-18);
}

TEST(Config, Errors) {
  auto field_of = [](const std::string& text) {
    try {
      parse_config(text).network();
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string();
  };
  EXPECT_EQ(field_of("bogus = 1\n"), "bogus");
  EXPECT_EQ(field_of("alpha = two\n"), "alpha");
  EXPECT_EQ(field_of("alpha = 2\n"), "alpha");
  EXPECT_EQ(field_of("theta_db = 1:0:1\n"), "theta_db");
  EXPECT_EQ(field_of("protocols = magic\n"), "protocols");
  EXPECT_EQ(field_of("no equals sign\n"), "line 1");
  EXPECT_EQ(field_of("trials = 0\n"), "trials");
}

TEST(Output, NumbersAndHash) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 0.0), "inf");
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  const std::string line = provenance("simulate", "a=1\n", 7);
  EXPECT_EQ(line.rfind("# sap_lab ", 0), 0u);
  EXPECT_NE(line.find("seed=7"), std::string::npos);
  EXPECT_NE(provenance("simulate", "a=1\n", 7), provenance("simulate", "a=2\n", 7));
}

TEST(Output, CsvEscapingAndWidth) {
  const fs::path dir = scratch("csv");
  {
    CsvWriter w(dir / "x.csv", "# p", {"a", "b"});
    w.row({"1", "has,comma"});
    EXPECT_THROW(w.row({"1"}), std::exception);
  }
  EXPECT_EQ(slurp(dir / "x.csv"), "# p\na,b\n1,\"has,comma\"\n");
}

TEST(Analyze, FigureSevenCurves) {
  const fs::path dir = scratch("analyze");
  CommandOptions opts;
  opts.config = write_config(dir,
                             "name = fig7\nlambda1_per_km2 = 7000\np1_dbm = 11.3\np2_dbm = 5\n"
                             "alpha = 3\nr_i_m = 3.6\ntheta_db = -90, 0\n");
  opts.out = dir;
  const Files files = cmd_analyze(opts);
  ASSERT_EQ(files.size(), 1u);
  Row header;
  const auto rows = read_rows(files[0], &header);
  ASSERT_EQ(rows.size(), 2u);
  const std::vector<std::string> expected{"theta_db", "i_dbm",    "r_i_m",    "ps_exact",
                                          "ps_lb",    "ps_small_i", "ps_large_i"};
  EXPECT_EQ(header, expected);
  const std::size_t ex = column(header, "ps_exact");
  for (const char* name : {"ps_exact", "ps_small_i", "ps_large_i"}) {
    EXPECT_NEAR(std::stod(rows[0][column(header, name)]), 1.0, 1e-3) << name;
  }
  // With R_I > d the bound keeps a positive exponent as theta -> 0.
  const double lb = std::stod(rows[0][column(header, "ps_lb")]);
  EXPECT_LT(lb, 1.0);
  EXPECT_LE(lb, std::stod(rows[0][ex]));
  const double at_zero = std::stod(rows[1][ex]);
  EXPECT_GT(at_zero, 0.0);
  EXPECT_LT(at_zero, 1.0);
  EXPECT_NEAR(std::stod(rows[1][column(header, "r_i_m")]), 3.6, 1e-6);
}

TEST(Optimize, SinglePointGridAndVariants) {
  const fs::path dir = scratch("optimize");
  CommandOptions opts;
  opts.config = write_config(dir,
                             "name = one\ngamma_db = -10\nbackend = lower_bound\n"
                             "theta_db = 45\nbeta_db = 3\nvariant = both\n");
  opts.out = dir;
  const Files files = cmd_optimize(opts);
  ASSERT_EQ(files.size(), 3u);
  Row header;
  const auto rows = read_rows(dir / "one_optimum.csv", &header);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "linear");
  EXPECT_EQ(rows[1][0], "printed");
  for (const auto& r : rows) {
    EXPECT_NEAR(std::stod(r[column(header, "theta_star_db")]), 45.0, 1e-9);
    EXPECT_NEAR(std::stod(r[column(header, "beta_star_db")]), 3.0, 1e-9);
  }
  EXPECT_EQ(read_rows(dir / "one_surface.csv").size(), 2u);
  EXPECT_NE(slurp(dir / "one_optimum.json").find("\"theta_star\""), std::string::npos);
}

TEST(Simulate, OneTrialGivesWideIntervals) {
  const fs::path dir = scratch("simulate_one");
  CommandOptions opts;
  opts.config = write_config(dir, "name = tiny\ntheta_db = 0, 10\ntrials = 1\n");
  opts.out = dir;
  cmd_simulate(opts);
  Row header;
  const auto rows = read_rows(dir / "tiny_simulation.csv", &header);
  const std::size_t est = column(header, "estimand");
  int ase_rows = 0;
  for (const auto& r : rows) {
    if (r[est] != "ase") continue;
    ++ase_rows;
    const double lo = std::stod(r[column(header, "ci_low")]);
    const double hi = std::stod(r[column(header, "ci_high")]);
    const double v = std::stod(r[column(header, "value")]);
    EXPECT_LE(lo, v);
    EXPECT_LE(v, hi);
    EXPECT_GT(hi - lo, 0.0);
  }
  EXPECT_EQ(ase_rows, 2);
}

TEST(Simulate, AllProtocolsAndReplay) {
  const fs::path a = scratch("simulate_a");
  const fs::path b = scratch("simulate_b");
  const std::string text =
      "name = fig8\ntheta_db = 0, 5\ntrials = 3000\nsigma_db = 0, 3\nseed = 42\n"
      "protocols = sap_exact, sap_lower_bound, tx_threshold, rx_threshold, always_on\n";
  CommandOptions opts;
  opts.config = write_config(a, text);
  opts.out = a;
  cmd_simulate(opts);
  opts.out = b;
  cmd_simulate(opts);
  const std::string first = slurp(a / "fig8_simulation.csv");
  EXPECT_EQ(first, slurp(b / "fig8_simulation.csv"));
  for (const char* p : {"sap_exact", "sap_lower_bound", "tx_threshold", "rx_threshold",
                        "always_on"}) {
    EXPECT_NE(first.find(std::string(",") + p + ","), std::string::npos) << p;
  }
  EXPECT_NE(first.find("seed=42"), std::string::npos);
}

TEST(Simulate, SeedOverrideChangesData) {
  const fs::path dir = scratch("simulate_seed");
  CommandOptions opts;
  opts.config = write_config(dir, "name = s\ntrials = 2000\n");
  opts.out = dir;
  cmd_simulate(opts);
  const std::string one = slurp(dir / "s_simulation.csv");
  opts.seed = 2;
  cmd_simulate(opts);
  EXPECT_NE(one, slurp(dir / "s_simulation.csv"));
}

TEST(Reproduce, UnknownFigure) {
  CommandOptions opts;
  EXPECT_THROW(cmd_reproduce("fig99", opts), ValidationError);
}

TEST(Reproduce, SensingMapIsDeterministic) {
  const fs::path a = scratch("fig5_a");
  const fs::path b = scratch("fig5_b");
  CommandOptions opts;
  opts.out = a;
  const Files files = cmd_reproduce("fig5", opts);
  opts.out = b;
  cmd_reproduce("fig5", opts);
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(read_rows(files[0]).size(), 25u);
  EXPECT_EQ(slurp(files[0]), slurp(b / "fig5" / "fig5_points.csv"));
}

TEST(Guard, MapsErrorsToExitCodes) {
  std::ostringstream err;
  EXPECT_EQ(run_guarded([] {}, err), kExitOk);
  EXPECT_EQ(run_guarded([] { throw ValidationError("alpha", "bad"); }, err), kExitValidation);
  EXPECT_EQ(run_guarded([] { throw InfeasibleError("x"); }, err), kExitInfeasible);
  EXPECT_EQ(run_guarded([] { throw ConvergenceError("x"); }, err), kExitNonConvergence);
  EXPECT_EQ(run_guarded([] { throw BracketError("x"); }, err), kExitNonConvergence);
  EXPECT_EQ(run_guarded([] { throw SamplingError("x"); }, err), kExitNonConvergence);
  EXPECT_NE(err.str().find("alpha"), std::string::npos);
}

TEST(Executable, ExitCodes) {
  const fs::path dir = scratch("exe");
  const fs::path log = dir / "log.txt";
  const std::string out = " --out " + dir.string();

  std::ofstream(dir / "bad.cfg") << "alpha = 2\n";
  EXPECT_EQ(run_exe("analyze --config " + (dir / "bad.cfg").string() + out, log), 2);
  EXPECT_NE(slurp(log).find("alpha"), std::string::npos);

  std::ofstream(dir / "infeasible.cfg") << "tau = 1e-9\nlambda1_per_km2 = 5000\n"
                                        << "theta_db = 0\nbeta_db = 0\n";
  EXPECT_EQ(run_exe("optimize --config " + (dir / "infeasible.cfg").string() + out, log), 3);

  std::ofstream(dir / "sparse.cfg") << "experiment = access\nmode = ppp_conditional\n"
                                    << "r_i_m = 3.6\ntrials = 200\n";
  EXPECT_EQ(run_exe("simulate --config " + (dir / "sparse.cfg").string() + out, log), 4);

  EXPECT_EQ(run_exe("reproduce fig99" + out, log), 2);
  EXPECT_EQ(run_exe("frobnicate", log), 2);

  std::ofstream(dir / "ok.cfg") << "name = ok\nr_i_m = 5\ntheta_db = 0\n";
  EXPECT_EQ(run_exe("analyze --config " + (dir / "ok.cfg").string() + out, log), 0);
  EXPECT_TRUE(fs::exists(dir / "ok_access.csv"));
}
