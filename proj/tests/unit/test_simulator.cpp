#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "saplab/optimizer.hpp"
#include "saplab/parallel.hpp"
#include "saplab/simulator.hpp"

using namespace saplab;
using std::numbers::pi;

namespace {

NetworkParams fig7_params(double d) {
  NetworkParams p;
  p.lambda1 = per_km2_to_per_m2(7e3);
  p.p1 = dbm_to_watts(11.3);
  p.p2 = dbm_to_watts(5.0);
  p.alpha = 3.0;
  p.d = d;
  return p;
}

class ThreadsGuard {
 public:
  explicit ThreadsGuard(const char* value) {
    if (const char* old = std::getenv("SAP_LAB_THREADS")) saved_ = old;
    setenv("SAP_LAB_THREADS", value, 1);
  }
  ~ThreadsGuard() {
    if (saved_.empty()) {
      unsetenv("SAP_LAB_THREADS");
    } else {
      setenv("SAP_LAB_THREADS", saved_.c_str(), 1);
    }
  }

 private:
  std::string saved_;
};

}  // namespace

TEST(Ppp, EmptyAndDeterministic) {
  Rng a = make_rng(1, 0, 0);
  EXPECT_TRUE(sample_ppp(0.0, 100.0, a).empty());
  Rng b = make_rng(9, 2, 3);
  Rng c = make_rng(9, 2, 3);
  const auto x = sample_ppp(1e-3, 300.0, b);
  const auto y = sample_ppp(1e-3, 300.0, c);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    EXPECT_EQ(x[k].x, y[k].x);
    EXPECT_EQ(x[k].y, y[k].y);
  }
}

TEST(Ppp, MeanCount) {
  const int draws = 10000;
  double total = 0.0;
  for (int k = 0; k < draws; ++k) {
    Rng rng = make_rng(4, 0, k);
    const auto pts = sample_ppp(5e-4, 2000.0, rng);
    total += static_cast<double>(pts.size());
    for (const Point& q : pts) {
      ASSERT_GE(q.x, 0.0);
      ASSERT_LT(q.x, 2000.0);
    }
  }
  const double mean = total / draws;
  EXPECT_NEAR(mean, 2000.0, 3.0 * std::sqrt(2000.0 / draws));
}

TEST(Geometry, ToroidalDistance) {
  EXPECT_DOUBLE_EQ(toroidal_distance2({1.0, 1.0}, {99.0, 1.0}, 100.0), 4.0);
  EXPECT_DOUBLE_EQ(toroidal_distance2({10.0, 10.0}, {13.0, 14.0}, 100.0), 25.0);
  EXPECT_DOUBLE_EQ(toroidal_distance2({0.0, 0.0}, {50.0, 50.0}, 100.0), 5000.0);
}

TEST(Geometry, PathGain) {
  for (double alpha : {2.5, 3.0, 4.0, 5.5}) {
    EXPECT_NEAR(path_gain(9.0, alpha), std::pow(3.0, -alpha), 1e-15);
  }
}

TEST(Sensing, NoPrimariesAndSingle) {
  const NetworkParams p;
  Rng rng = make_rng(1, 0, 0);
  EXPECT_EQ(measure_interference({5.0, 5.0}, {}, p, 100.0, rng, SensingMode::Faded), 0.0);
  const std::vector<Point> one{{10.0, 5.0}};
  EXPECT_NEAR(measure_interference({5.0, 5.0}, one, p, 100.0, rng, SensingMode::Mean),
              p.p1 * std::pow(5.0, -4.0), 1e-15);
}

TEST(Sensing, CampbellMean) {
  const NetworkParams p;
  const double w = 500.0;
  const double eps = 5.0;
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, w);
  double total = 0.0;
  int locations = 0;
  for (int drop = 0; drop < 1000; ++drop) {
    Rng rng = make_rng(12, 0, drop);
    const auto primaries = sample_ppp(p.lambda1, w, rng);
    for (int k = 0; k < 100; ++k) {
      const Point at{u(gen), u(gen)};
      std::vector<Point> annulus;
      for (const Point& q : primaries) {
        const double r2 = toroidal_distance2(at, q, w);
        if (r2 >= eps * eps && r2 <= 0.25 * w * w) annulus.push_back(q);
      }
      total += measure_interference(at, annulus, p, w, rng, SensingMode::Faded);
      ++locations;
    }
  }
  const double campbell = 2.0 * pi * p.lambda1 * p.p1 *
                          (std::pow(eps, 2.0 - p.alpha) - std::pow(0.5 * w, 2.0 - p.alpha)) /
                          (p.alpha - 2.0);
  EXPECT_NEAR(total / locations, campbell, 0.03 * campbell);
}

TEST(MeasurementError, IdentityAndMedian) {
  Rng rng = make_rng(3, 0, 0);
  EXPECT_EQ(inject_measurement_error(2.5, 0.0, rng), 2.5);
  std::vector<double> draws(100000);
  for (double& v : draws) v = inject_measurement_error(1.0, 3.0, rng);
  std::nth_element(draws.begin(), draws.begin() + draws.size() / 2, draws.end());
  EXPECT_NEAR(draws[draws.size() / 2], 1.0, 0.02);
  EXPECT_THROW(inject_measurement_error(1.0, -1.0, rng), ValidationError);
}

TEST(Wilson, Basics) {
  const Estimate e = wilson_estimate(0, 10);
  EXPECT_EQ(e.mean, 0.0);
  EXPECT_EQ(e.ci_low, 0.0);
  EXPECT_GT(e.ci_high, 0.0);
  const Estimate f = wilson_estimate(1, 1);
  EXPECT_EQ(f.mean, 1.0);
  EXPECT_LE(f.ci_low, f.mean);
  EXPECT_GE(f.half_width_95, 0.0);
  EXPECT_THROW(wilson_estimate(1, 0), ValidationError);
}

TEST(Wilson, Coverage) {
  std::mt19937_64 rng(77);
  for (double prob : {0.1, 0.5, 0.9}) {
    std::bernoulli_distribution coin(prob);
    int covered = 0;
    for (int rep = 0; rep < 1000; ++rep) {
      int k = 0;
      for (int i = 0; i < 400; ++i) k += coin(rng);
      const Estimate e = wilson_estimate(k, 400);
      covered += (e.ci_low <= prob && prob <= e.ci_high);
    }
    EXPECT_GE(covered, 930) << prob;
    EXPECT_LE(covered, 970) << prob;
  }
}

TEST(Scenario, Validation) {
  Scenario s;
  EXPECT_NO_THROW(validate(s));
  s.window_side = 30.0;
  EXPECT_THROW(validate(s), ValidationError);
  s = {};
  s.trials = 0;
  EXPECT_THROW(validate(s), ValidationError);
  s = {};
  s.error_sigma_db = -1.0;
  EXPECT_THROW(validate(s), ValidationError);
  s = {};
  s.params.lambda1 = 0.0;
  EXPECT_NO_THROW(validate(s));
}

TEST(AccessTable, MatchesDirectEvaluation) {
  const NetworkParams p;
  for (AccessBackend b : {AccessBackend::Exact, AccessBackend::LowerBound}) {
    const AccessTable table(b, 2.0, p);
    for (double r = 0.05; r < 2000.0; r *= 1.37) {
      EXPECT_NEAR(table(r), access_prob(b, r, 2.0, p), 2e-4) << r;
    }
  }
}

TEST(AccessExperiment, ZeroThresholdIsCertain) {
  AccessExperimentConfig cfg;
  cfg.params = fig7_params(2.0);
  cfg.thetas = {0.0, 1.0};
  cfg.r_i = 3.6;
  cfg.trials = 2000;
  const auto est = run_access_prob_experiment(cfg);
  EXPECT_EQ(est[0].mean, 1.0);
  EXPECT_LT(est[1].mean, 1.0);
}

TEST(AccessExperiment, MatchesExactAtFigureSetting) {
  for (double d : {1.2, 2.0}) {
    AccessExperimentConfig cfg;
    cfg.params = fig7_params(d);
    for (double db = -10.0; db <= 20.0; db += 5.0) cfg.thetas.push_back(db_to_linear(db));
    cfg.r_i = 3.6;
    cfg.trials = 20000;
    const auto est = run_access_prob_experiment(cfg);
    for (std::size_t k = 0; k < cfg.thetas.size(); ++k) {
      EXPECT_NEAR(est[k].mean, access_prob_exact(cfg.r_i, cfg.thetas[k], cfg.params), 0.02)
          << "d=" << d << " theta=" << cfg.thetas[k];
    }
  }
}

TEST(AccessExperiment, ZeroDistanceMatchesBound) {
  AccessExperimentConfig cfg;
  cfg.params = fig7_params(0.0);
  cfg.thetas = {0.1, 1.0, 10.0};
  cfg.r_i = 3.6;
  cfg.trials = 2000;
  const auto est = run_access_prob_experiment(cfg);
  for (std::size_t k = 0; k < cfg.thetas.size(); ++k) {
    const double lb = access_prob_lb(cfg.r_i, cfg.thetas[k], cfg.params);
    EXPECT_GE(lb, est[k].ci_low);
    EXPECT_LE(lb, est[k].ci_high);
  }
}

TEST(AccessExperiment, WindowDoublingWithinHalfWidth) {
  AccessExperimentConfig cfg;
  cfg.params = fig7_params(2.0);
  cfg.thetas = {1.0};
  cfg.r_i = 3.6;
  cfg.trials = 20000;
  cfg.window_side = 250.0;
  const Estimate small = run_access_prob_experiment(cfg)[0];
  cfg.window_side = 500.0;
  const Estimate large = run_access_prob_experiment(cfg)[0];
  EXPECT_LT(std::abs(small.mean - large.mean), large.half_width_95);
}

TEST(AccessExperiment, SparseBinIsReported) {
  AccessExperimentConfig cfg;
  cfg.params = fig7_params(2.0);
  cfg.thetas = {1.0};
  cfg.r_i = 3.6;
  cfg.trials = 500;
  cfg.mode = AccessExperimentMode::PppConditional;
  EXPECT_THROW(run_access_prob_experiment(cfg), SamplingError);
}

TEST(AseExperiment, IsolatedLinksAlwaysSucceed) {
  Scenario s;
  s.params.lambda1 = 0.0;
  s.params.lambda2 = 1e-7;
  s.protocol = Protocol::SapExact;
  s.policy = {1.0, 1.0};
  s.trials = 2000;
  const AseResult r = run_ase_experiment(s);
  EXPECT_EQ(r.access_rate.mean, 1.0);
  EXPECT_GT(r.success.mean, 0.99);
  EXPECT_NEAR(r.ase.mean, s.params.lambda2 * r.success.mean * std::log(2.0), 1e-18);
}

TEST(AseExperiment, SweepSharesRandomNumbers) {
  Scenario s;
  s.trials = 3000;
  s.policy = {2.0, 1.0};
  const std::vector<Protocol> protocols{Protocol::SapExact, Protocol::TxThreshold};
  const std::vector<double> thetas{0.5, 2.0};
  const AseSweep sweep = run_ase_sweep(s, protocols, thetas);
  s.protocol = Protocol::TxThreshold;
  const AseResult single = run_ase_experiment(s);
  EXPECT_EQ(sweep.at(1, 1).ase.mean, single.ase.mean);
  EXPECT_EQ(sweep.at(1, 1).success.trials, single.success.trials);
}

TEST(AseExperiment, AlwaysOnHasHighestAccess) {
  Scenario s;
  s.trials = 5000;
  const std::vector<Protocol> protocols{Protocol::SapExact, Protocol::SapLowerBound,
                                        Protocol::TxThreshold, Protocol::RxThreshold,
                                        Protocol::AlwaysOn};
  const std::vector<double> thetas{0.3, 3.0, 30.0};
  const AseSweep sweep = run_ase_sweep(s, protocols, thetas);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    for (std::size_t k = 0; k + 1 < protocols.size(); ++k) {
      EXPECT_GE(sweep.at(4, t).access_rate.mean, sweep.at(k, t).access_rate.mean);
    }
    EXPECT_EQ(sweep.at(4, t).access_rate.mean, 1.0);
  }
}

TEST(AseExperiment, MatchesAnalyticAse) {
  Scenario s;
  s.trials = 200000;
  s.policy = {1.0, 1.0};
  const AseResult r = run_ase_experiment(s);
  const double analytic = ase(1.0, 1.0, s.params);
  EXPECT_NEAR(r.ase.mean, analytic, 0.05 * analytic);
}

TEST(AseExperiment, IndependentOfThreadCount) {
  Scenario s;
  s.trials = 4000;
  s.error_sigma_db = 2.0;
  std::vector<TrialRecord> one;
  std::vector<TrialRecord> many;
  AseResult a;
  AseResult b;
  {
    ThreadsGuard g("1");
    a = run_ase_experiment(s);
    one = collect_trial_records(s, 3000);
  }
  {
    ThreadsGuard g("4");
    b = run_ase_experiment(s);
    many = collect_trial_records(s, 3000);
  }
  EXPECT_EQ(a.ase.mean, b.ase.mean);
  EXPECT_EQ(a.mean_sir_linear, b.mean_sir_linear);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].measured_i, many[k].measured_i);
    EXPECT_EQ(one[k].access, many[k].access);
    EXPECT_EQ(one[k].sir_rx, many[k].sir_rx);
  }
}

TEST(AseExperiment, ZeroErrorMatchesDefault) {
  Scenario s;
  s.trials = 2000;
  const AseResult a = run_ase_experiment(s);
  s.error_sigma_db = 0.0;
  const AseResult b = run_ase_experiment(s);
  EXPECT_EQ(a.ase.mean, b.ase.mean);
}

TEST(OutageExperiment, NoSecondaries) {
  Scenario s;
  s.params.lambda2 = 0.0;
  s.trials = 20000;
  s.params.gamma = 1e-9;
  EXPECT_LT(run_primary_outage_experiment(s, 1.0).mean, 1e-3);
  s.params.gamma = 1.0;
  const Estimate e = run_primary_outage_experiment(s, 1.0);
  const double closed = oracle::cellular_outage_alpha4(1.0);
  EXPECT_GE(closed, e.ci_low);
  EXPECT_LE(closed, e.ci_high);
}

TEST(OutageExperiment, ProtectionHoldsAtMinimumThreshold) {
  Scenario s;
  s.params.gamma = db_to_linear(-10.0);
  s.trials = 10000;
  const double theta_bar = min_access_threshold(s.params);
  const Estimate e = run_primary_outage_experiment(s, theta_bar);
  EXPECT_LE(e.mean, s.params.tau + e.half_width_95);
}
