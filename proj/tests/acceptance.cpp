// Copyright 2026 The rbkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance suite. Each criterion is a self-contained
// experiment with frozen seeds and pinned tolerances; the binary prints one
// PASS/FAIL line per criterion and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rbkit/adaptive.hpp"
#include "rbkit/design.hpp"
#include "rbkit/estimate.hpp"
#include "rbkit/rng.hpp"
#include "rbkit/sampler.hpp"
#include "rbkit/stats.hpp"
#include "rbkit/validate.hpp"

using namespace rbkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome& outcome;

  void require(bool ok, const std::string& metric) {
    if (!outcome.detail.empty()) outcome.detail += "; ";
    outcome.detail += metric;
    if (!ok) {
      outcome.pass = false;
      outcome.detail += " <-- FAIL";
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Noiseless model values invert exactly through the two-point ratio
//    estimator: 50 random parameter tuples, 1e-12 relative error.
Outcome criterion_exact_inversion() {
  Outcome out;
  Check check{out};
  Rng rng = derived_stream(101, "inversion");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double A = 0.2 + 0.7 * unit(rng);
    const double B = unit(rng) * (1.0 - A);
    const double p = 0.9 + 0.0999 * unit(rng);
    const int m1 = 1 + static_cast<int>(unit(rng) * 10);
    const int reach = static_cast<int>(std::log(A / 1e-3) / -std::log(p));
    const int span = std::max(1, std::min(200, reach - m1));
    const int m2 = m1 + 1 + static_cast<int>(unit(rng) * span);

    TwoPointSummary s;
    s.m1 = m1;
    s.m2 = m2;
    s.q1 = A * std::pow(p, m1) + B;
    s.q2 = A * std::pow(p, m2) + B;
    s.B = B;
    const Estimate est =
        ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off);
    worst = std::max(worst, std::abs(est.p_hat - p) / p);
    worst = std::max(worst, std::abs(est.A_hat - A) / A);
  }
  check.require(worst <= 1e-12, "max rel err " + fmt(worst) + " <= 1e-12");
  return out;
}

// --------------------------------------------------------------------------
// 2. The exponential decay emerges from the gate-level simulator: fitted
//    decay within 3 propagated standard errors of the depolarizing retention.
Outcome criterion_decay_emergence() {
  Outcome out;
  Check check{out};
  const double strength = 0.02;  // retention 0.98
  const GateLevelSource source{1, NoiseSpec::depolarizing(strength)};
  const int k = 2000, n = 50;
  const auto ds =
      generate({{4, 0, k, n}, {20, 0, k, n}}, source, std::nullopt, 202);
  const TwoPointSummary s = two_point_from_dataset(ds, 4, 20, 0.5);
  const Estimate est =
      ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off);
  const double err = std::abs(est.p_hat - (1.0 - strength));
  const double band = 3.0 * std::sqrt(est.variance_p);
  check.require(err <= band,
                "|p_hat - 0.98| = " + fmt(err) + " <= 3 se = " + fmt(band));
  return out;
}

// --------------------------------------------------------------------------
// 3. Offset elimination: difference-mode estimates agree across branch
//    offsets, and the estimator mean carries no offset dependence.
Outcome criterion_offset_elimination() {
  Outcome out;
  Check check{out};
  const double branch_A = 0.25, p = 0.99;
  const int m1 = 4, m2 = 50, k = 500, n = 25;
  const std::vector<double> offsets{0.3, 0.5, 0.7};
  std::vector<double> p_hats, variances;
  for (double B : offsets) {
    const AnalyticSource source{DecayParams(branch_A, B, p), std::nullopt};
    const auto ds = generate(
        {{m1, 0, k, n}, {m1, 1, k, n}, {m2, 0, k, n}, {m2, 1, k, n}}, source,
        std::nullopt, derived_stream(303, fmt(B))());
    const TwoPointSummary s = two_point_from_dataset(ds, m1, m2, std::nullopt);
    const Estimate est =
        ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off);
    p_hats.push_back(est.p_hat);
    variances.push_back(est.variance_p);
  }
  double worst_z = 0.0;
  for (std::size_t i = 0; i < p_hats.size(); ++i) {
    for (std::size_t j = i + 1; j < p_hats.size(); ++j) {
      const double z = std::abs(p_hats[i] - p_hats[j]) /
                       std::sqrt(variances[i] + variances[j]);
      worst_z = std::max(worst_z, z);
    }
  }
  check.require(worst_z <= 3.0,
                "max pairwise |dp| = " + fmt(worst_z) + " sigma <= 3");
  const auto fit = stats::weighted_line_fit(offsets, p_hats, variances);
  const double slope_z = std::abs(fit.slope) / std::sqrt(fit.slope_variance);
  check.require(slope_z <= 3.0,
                "offset-slope " + fmt(slope_z) + " sigma <= 3");
  return out;
}

// --------------------------------------------------------------------------
// 4. Small-k bias matches the second-order prediction and the plug-in
//    correction removes at least half of it.
Outcome criterion_bias_correction() {
  Outcome out;
  Check check{out};
  const double A = 0.4, B = 0.5, p = 0.99;
  const int m1 = 4, m2 = 50, k = 10, n = 15, reps = 10000;
  const AnalyticSource source{DecayParams(A, B, p), std::nullopt};

  double sum_unc = 0.0, sum_cor = 0.0, sum_sq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto ds =
        generate({{m1, 0, k, n}, {m2, 0, k, n}}, source, std::nullopt,
                 SeedSequence(404).with(std::uint64_t(rep)).value());
    const TwoPointSummary s = two_point_from_dataset(ds, m1, m2, B);
    const double unc =
        ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off).p_hat;
    sum_unc += unc;
    sum_sq += unc * unc;
    sum_cor += ratio_estimate(s, kDefaultTruncation, BiasCorrection::On).p_hat;
  }
  const double mean_unc = sum_unc / reps;
  const double mean_cor = sum_cor / reps;
  const double se =
      std::sqrt((sum_sq / reps - mean_unc * mean_unc) / (reps - 1.0));

  // Second-order oracle for the mean of the uncorrected estimate, computed
  // from the true model values and the true binomial variances.
  const double dm = m2 - m1;
  const double x1 = A * std::pow(p, m1), x2 = A * std::pow(p, m2);
  const double q1 = x1 + B, q2 = x2 + B;
  const double v1 = q1 * (1 - q1) / (double(k) * n);
  const double v2 = q2 * (1 - q2) / (double(k) * n);
  const double a1 = -1.0 / dm, a2 = 1.0 / dm;
  const double predicted_mean =
      (std::pow(x1, a1) + 0.5 * a1 * (a1 - 1) * std::pow(x1, a1 - 2) * v1) *
      (std::pow(x2, a2) + 0.5 * a2 * (a2 - 1) * std::pow(x2, a2 - 2) * v2);

  const double z = std::abs(mean_unc - predicted_mean) / se;
  check.require(z <= 3.0, "bias prediction off by " + fmt(z) + " se <= 3");
  const double ratio = std::abs(mean_unc - p) / std::abs(mean_cor - p);
  check.require(ratio >= 2.0,
                "correction shrinks |bias| by " + fmt(ratio) + "x >= 2x");
  return out;
}

// --------------------------------------------------------------------------
// 5. The 3-sigma-of-the-means interval covers at the distribution-free rate.
Outcome criterion_chebyshev_coverage() {
  Outcome out;
  Check check{out};
  const double branch_A = 0.48, B = 0.5, p = 0.99;  // difference amplitude 0.96
  const int m1 = 4, m2 = 50, k = 100, n = 20, reps = 10000;
  const AnalyticSource source{DecayParams(branch_A, B, p), std::nullopt};
  int covered = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto ds = generate(
        {{m1, 0, k, n}, {m1, 1, k, n}, {m2, 0, k, n}, {m2, 1, k, n}}, source,
        std::nullopt, SeedSequence(505).with(std::uint64_t(rep)).value());
    const TwoPointSummary s = two_point_from_dataset(ds, m1, m2, std::nullopt);
    const Estimate est =
        ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off);
    if (est.interval.lo <= p && p <= est.interval.hi) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  check.require(coverage >= 8.0 / 9.0,
                "coverage " + fmt(coverage) + " >= 8/9 = " + fmt(8.0 / 9.0));
  return out;
}

// --------------------------------------------------------------------------
// 6. The exact single-shot estimator CDF is close to its log-normal
//    approximation, and smaller amplitudes give heavier tails.
Outcome criterion_cdf_comparison() {
  Outcome out;
  Check check{out};
  const double B = 0.5, p = 0.995;
  const int m1 = 4, k = 200;
  const int m2 = heuristic_m2(p);

  const DesignInput wide{DifferenceDesign(0.8, B, p), m1, double(k), double(k)};
  const CdfTable exact = estimator_cdf_exact(wide, m2, k);
  const double ks = ks_distance(exact, lognormal_approx(wide, m2, k));
  check.require(ks <= 0.02, "KS " + fmt(ks) + " <= 0.02 at A = 0.8");

  const DesignInput small{DifferenceDesign(0.3, B, p), m1, double(k), double(k)};
  const CdfTable heavy = estimator_cdf_exact(small, m2, k);
  const double width_wide = exact.quantile(0.9) - exact.quantile(0.1);
  const double width_small = heavy.quantile(0.9) - heavy.quantile(0.1);
  check.require(width_small > width_wide,
                "10-90 width " + fmt(width_small) + " (A=0.3) > " +
                    fmt(width_wide) + " (A=0.8)");
  return out;
}

// --------------------------------------------------------------------------
// 7. The numerical optimum equals brute force everywhere tested, and the
//    heuristic length stays within 25% excess variance near ideal contrast.
Outcome criterion_optimal_m2() {
  Outcome out;
  Check check{out};
  int mismatches = 0;
  for (double A : {0.2, 0.35, 0.5}) {
    for (double B : {0.0, 0.25, 0.5}) {
      for (double p : {0.99, 0.995, 0.999}) {
        const DesignInput input{DecayParams(A, B, p), 4, 1, 1};
        if (optimal_m2(input) != optimal_m2_bruteforce(input)) ++mismatches;
      }
    }
  }
  check.require(mismatches == 0,
                "known-offset lattice mismatches " + std::to_string(mismatches));

  int diff_mismatches = 0;
  double worst_excess = 0.0;
  for (double A : {0.99, 0.995, 1.0}) {
    for (double B : {0.4995, 0.5, 0.5005}) {
      for (double p : {0.99, 0.995, 0.999}) {
        const DesignInput input{DifferenceDesign(A, B, p), 4, 1, 1};
        const int opt = optimal_m2(input);
        if (opt != optimal_m2_bruteforce(input)) ++diff_mismatches;
        const double excess =
            variance_objective(input, heuristic_m2(p)) /
                variance_objective(input, opt) -
            1.0;
        worst_excess = std::max(worst_excess, excess);
      }
    }
  }
  check.require(diff_mismatches == 0,
                "difference lattice mismatches " + std::to_string(diff_mismatches));
  check.require(worst_excess <= 0.25,
                "heuristic excess " + fmt(worst_excess) + " <= 0.25");
  return out;
}

// --------------------------------------------------------------------------
// 8. The doubling estimator achieves multiplicative precision with the
//    promised shot scaling and termination window.
Outcome criterion_adaptive() {
  Outcome out;
  Check check{out};
  AdaptiveConfig cfg;
  cfg.epsilon = 0.05;
  cfg.delta = 0.1;
  cfg.t = 0;  // derived from the shot rule
  const int reps = 200;

  std::vector<double> median_rel, median_shots;
  double min_window_rate = 1.0;
  for (double r : {1e-2, 1e-3}) {
    const double p = 1.0 - r;
    AnalyticShotOracle oracle(DecayParams::difference(1.0, p));
    std::vector<double> rel_errors, shots;
    int in_window = 0;
    for (int rep = 0; rep < reps; ++rep) {
      Rng rng = SeedSequence(808).with(fmt(r)).with(std::uint64_t(rep)).stream();
      const AdaptiveResult res = run_adaptive(oracle, cfg, rng);
      rel_errors.push_back(std::abs(res.r_hat - r) / r);
      shots.push_back(static_cast<double>(res.total_shots));
      if (check_pm_window(p, res.m, cfg.epsilon)) ++in_window;
    }
    median_rel.push_back(stats::median(rel_errors));
    median_shots.push_back(stats::median(shots));
    min_window_rate =
        std::min(min_window_rate, static_cast<double>(in_window) / reps);
  }
  const double ratio =
      std::max(median_rel[0], median_rel[1]) /
      std::min(median_rel[0], median_rel[1]);
  check.require(ratio < 2.0,
                "median rel-err ratio across r " + fmt(ratio) + " < 2");
  check.require(min_window_rate >= 0.9,
                "termination-window rate " + fmt(min_window_rate) + " >= 0.9");
  const double slope =
      (std::log(median_shots[1]) - std::log(median_shots[0])) /
      (std::log(std::log(1e3)) - std::log(std::log(1e2)));
  check.require(slope >= 0.7 && slope <= 1.3,
                "shots scaling exponent " + fmt(slope) + " in [0.7, 1.3]");
  return out;
}

// --------------------------------------------------------------------------
// 9. The unitarity and leakage decays are recovered from gate-level data.
Outcome criterion_unitarity_recovery() {
  Outcome out;
  Check check{out};
  const double strength = 0.01;  // retention 0.99, unitarity 0.99^2
  const GateLevelSource source{1, NoiseSpec::depolarizing(strength)};
  const UnitarityDataset ds = generate_unitarity({2, 20}, 2000, source, 909);
  const UnitaritySummaries s1 = unitarity_summaries(ds, 2);
  const UnitaritySummaries s2 = unitarity_summaries(ds, 20);
  const UnitarityEstimate est = unitarity_estimate(
      s1.a_trace, s2.a_trace, s1.b_spread, s2.b_spread, 2, 20);
  const double u_true = std::pow(1.0 - strength, 2);
  const double u_err = std::abs(est.u_hat - u_true) / u_true;
  check.require(u_err <= 0.01, "u_hat rel err " + fmt(u_err) + " <= 0.01");
  const double l_err = std::abs(est.l_hat - 1.0);
  check.require(l_err <= 0.01, "|l_hat - 1| = " + fmt(l_err) + " <= 0.01");
  return out;
}

// --------------------------------------------------------------------------
// 10. The consistency test is calibrated under static noise and detects a
//     strong drift ramp.
Outcome criterion_validation() {
  Outcome out;
  Check check{out};
  const double branch_A = 0.4, B = 0.5, p = 0.99;
  const int m1 = 4, m2 = 50, k = 100, n = 25;
  const std::vector<int> holdout{10, 20, 100};
  const double alpha = 0.05;
  const AnalyticSource source{DecayParams(branch_A, B, p), std::nullopt};

  std::vector<DesignRow> design;
  for (int m : {m1, m2, 10, 20, 100}) {
    design.push_back({m, 0, k, n});
    design.push_back({m, 1, k, n});
  }

  const auto run_one = [&](std::uint64_t seed,
                           const std::optional<DriftSpec>& drift) {
    const auto ds = generate(design, source, drift, seed);
    const TwoPointSummary s = two_point_from_dataset(ds, m1, m2, std::nullopt);
    const Estimate est =
        ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off);
    return consistency_test(ds, est, std::nullopt, holdout, alpha).reject;
  };

  const int null_reps = 2000;
  int null_rejects = 0;
  for (int rep = 0; rep < null_reps; ++rep) {
    if (run_one(SeedSequence(1010).with(std::uint64_t(rep)).value(),
                std::nullopt)) {
      ++null_rejects;
    }
  }
  const double null_rate = static_cast<double>(null_rejects) / null_reps;
  const double band = 3.0 * std::sqrt(alpha * (1 - alpha) / null_reps);
  check.require(std::abs(null_rate - alpha) <= band,
                "null rejection " + fmt(null_rate) + " within " + fmt(band) +
                    " of " + fmt(alpha));

  const int power_reps = 300;
  int drift_rejects = 0;
  for (int rep = 0; rep < power_reps; ++rep) {
    if (run_one(SeedSequence(1111).with(std::uint64_t(rep)).value(),
                DriftSpec(0.99, 0.95))) {
      ++drift_rejects;
    }
  }
  const double power = static_cast<double>(drift_rejects) / power_reps;
  check.require(power >= 0.8, "drift power " + fmt(power) + " >= 0.8");
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"exact inversion of noiseless values", criterion_exact_inversion},
      {"decay-model emergence (gate level)", criterion_decay_emergence},
      {"offset elimination via paired differences", criterion_offset_elimination},
      {"second-order bias prediction and correction", criterion_bias_correction},
      {"distribution-free interval coverage", criterion_chebyshev_coverage},
      {"exact vs log-normal estimator CDF", criterion_cdf_comparison},
      {"optimal second length vs brute force", criterion_optimal_m2},
      {"adaptive estimator multiplicative precision", criterion_adaptive},
      {"unitarity and leakage recovery", criterion_unitarity_recovery},
      {"validation calibration and drift power", criterion_validation},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%2zu] %-46s %s (%.1fs) %s\n", i + 1, criteria[i].name,
                outcome.pass ? "PASS" : "FAIL", seconds,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
