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

#include "rbkit/studies.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbkit/adaptive.hpp"
#include "rbkit/design.hpp"
#include "rbkit/errors.hpp"
#include "rbkit/estimate.hpp"
#include "rbkit/rng.hpp"
#include "rbkit/sampler.hpp"
#include "rbkit/validate.hpp"

namespace rbkit {

namespace {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct StudyContext {
  std::string name;
  std::uint64_t seed = 0;
  int replicates = 1;
  Json params;
  std::filesystem::path out_dir;
  std::vector<std::string> written;

  void write(const std::string& filename, const std::string& content) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / filename;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw DataError("cannot write " + path.string());
    }
    out << content;
    written.push_back(path.string());
  }
};

std::vector<double> lattice(const Json& params, const char* key,
                            std::vector<double> fallback) {
  if (!params.contains(key)) return fallback;
  return params.at(key).get<std::vector<double>>();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// cdf_comparison: exact vs log-normal estimator CDFs over an (A, p) lattice
// in the offset-eliminated regime, single-shot sampling with k sequences.
void study_cdf_comparison(StudyContext& ctx) {
  const auto As = lattice(ctx.params, "A", {0.3, 0.8});
  const auto ps = lattice(ctx.params, "p", {0.99, 0.995});
  const auto Bs = lattice(ctx.params, "B", {0.5});
  const int k = ctx.params.value("k", 200);
  const int m1 = ctx.params.value("m1", 4);
  const int max_rows = ctx.params.value("max_rows_per_cell", 400);

  std::ostringstream csv;
  csv << "A,B,p,k,m1,m2,p_hat,cdf_exact,cdf_normal\n";
  for (double B : Bs) {
    for (double p : ps) {
      for (double A : As) {
        const int m2 = heuristic_m2(p);
        const DesignInput input{DifferenceDesign(A, B, p), m1, double(k),
                                double(k)};
        const CdfTable exact = estimator_cdf_exact(input, m2, k);
        const LognormalApprox approx = lognormal_approx(input, m2, k);
        const std::size_t stride =
            std::max<std::size_t>(1, exact.grid.size() / max_rows);
        for (std::size_t i = 0; i < exact.grid.size(); i += stride) {
          csv << fmt(A) << "," << fmt(B) << "," << fmt(p) << "," << k << ","
              << m1 << "," << m2 << "," << fmt(exact.grid[i]) << ","
              << fmt(exact.probs[i]) << "," << fmt(approx.cdf(exact.grid[i]))
              << "\n";
        }
      }
    }
  }
  ctx.write("cdf_comparison.csv", csv.str());
}

// ---------------------------------------------------------------------------
// m2_landscape: variance of the estimate against m2, with the optimum marked.
void study_m2_landscape(StudyContext& ctx) {
  const auto As = lattice(ctx.params, "A", {0.2, 0.5, 0.8});
  const auto Bs = lattice(ctx.params, "B", {0.0, 0.5});
  const auto ps = lattice(ctx.params, "p", {0.99, 0.999});
  const int m1 = ctx.params.value("m1", 4);
  const bool difference = ctx.params.value("difference", true);

  std::ostringstream csv;
  csv << "A,B,p,m1,m2,variance,is_optimal\n";
  for (double A : As) {
    for (double B : Bs) {
      for (double p : ps) {
        DesignInput input{DecayParams(0.5, 0.0, p), m1, 1, 1};
        if (difference) {
          if (B - 0.5 * A < 0.0 || B + 0.5 * A > 1.0) continue;
          input.model = DifferenceDesign(A, B, p);
        } else {
          if (A + B > 1.0) continue;
          input.model = DecayParams(A, B, p);
        }
        const int opt = optimal_m2(input);
        const int hi = std::max(3 * opt, heuristic_m2(p) * 2);
        for (int m2 = m1 + 1; m2 <= hi;
             m2 = std::max(m2 + 1, m2 + (m2 - m1) / 50)) {
          csv << fmt(A) << "," << fmt(B) << "," << fmt(p) << "," << m1 << ","
              << m2 << "," << fmt(variance_objective(input, m2)) << ","
              << (m2 == opt ? 1 : 0) << "\n";
        }
      }
    }
  }
  ctx.write("m2_landscape.csv", csv.str());
}

// ---------------------------------------------------------------------------
// adaptive_scaling: replicated runs of the doubling estimator across error
// rates, with shot accounting and the termination-window check.
void study_adaptive_scaling(StudyContext& ctx) {
  const auto rs = lattice(ctx.params, "r", {1e-1, 1e-2, 1e-3});
  const double epsilon = ctx.params.value("epsilon", 0.05);
  const double delta = ctx.params.value("delta", 0.1);
  const double A = ctx.params.value("A", 1.0);

  std::ostringstream csv;
  csv << "r,epsilon,delta,replicate,p_hat,r_hat,ell,m,total_shots,in_window\n";
  for (double r : rs) {
    const double p = 1.0 - r;
    AnalyticShotOracle oracle(DecayParams::difference(A, p));
    AdaptiveConfig cfg;
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    for (int rep = 0; rep < ctx.replicates; ++rep) {
      Rng rng = SeedSequence(ctx.seed)
                    .with("adaptive")
                    .with(fmt(r))
                    .with(std::uint64_t(rep))
                    .stream();
      const AdaptiveResult res = run_adaptive(oracle, cfg, rng);
      csv << fmt(r) << "," << fmt(epsilon) << "," << fmt(delta) << "," << rep
          << "," << fmt(res.p_hat) << "," << fmt(res.r_hat) << "," << res.ell
          << "," << res.m << "," << res.total_shots << ","
          << (check_pm_window(p, res.m, epsilon) ? 1 : 0) << "\n";
    }
  }
  ctx.write("adaptive_scaling.csv", csv.str());
}

// ---------------------------------------------------------------------------
// coverage: empirical interval coverage for both interval constructions.
void study_coverage(StudyContext& ctx) {
  const double A = ctx.params.value("A", 0.96);  // difference amplitude
  const double B = ctx.params.value("B", 0.5);   // branch offset
  const double p = ctx.params.value("p", 0.99);
  const int m1 = ctx.params.value("m1", 4);
  const int m2 = ctx.params.value("m2", heuristic_m2(p));
  const int k = ctx.params.value("k", 100);
  const int n = ctx.params.value("n", 20);

  const DecayParams branch(A / 2, B, p);
  const AnalyticSource source{branch, std::nullopt};
  int cheb_cover = 0, logn_cover = 0;
  for (int rep = 0; rep < ctx.replicates; ++rep) {
    const std::uint64_t seed =
        SeedSequence(ctx.seed).with("coverage").with(std::uint64_t(rep)).value();
    const auto ds = generate(
        {{m1, 0, k, n}, {m1, 1, k, n}, {m2, 0, k, n}, {m2, 1, k, n}}, source,
        std::nullopt, seed);
    const TwoPointSummary s = two_point_from_dataset(ds, m1, m2, std::nullopt);
    const Estimate cheb =
        ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off);
    if (cheb.interval.lo <= p && p <= cheb.interval.hi) ++cheb_cover;

    const auto arb = generate(
        {{m1, 0, k, 1}, {m1, 1, k, 1}, {m2, 0, k, 1}, {m2, 1, k, 1}}, source,
        std::nullopt, seed ^ 0x5eedULL);
    const Estimate logn = lognormal_interval(
        arb_difference_counts_from_dataset(arb, m1, m2), 0.9);
    if (logn.interval.lo <= p && p <= logn.interval.hi) ++logn_cover;
  }
  std::ostringstream csv;
  csv << "A,B,p,k,n,m1,m2,method,replicates,covered,coverage,nominal\n";
  csv << fmt(A) << "," << fmt(B) << "," << fmt(p) << "," << k << "," << n
      << "," << m1 << "," << m2 << ",chebyshev," << ctx.replicates << ","
      << cheb_cover << "," << fmt(double(cheb_cover) / ctx.replicates) << ","
      << fmt(8.0 / 9.0) << "\n";
  csv << fmt(A) << "," << fmt(B) << "," << fmt(p) << "," << k << ",1," << m1
      << "," << m2 << ",lognormal," << ctx.replicates << "," << logn_cover
      << "," << fmt(double(logn_cover) / ctx.replicates) << "," << fmt(0.9)
      << "\n";
  ctx.write("coverage.csv", csv.str());
}

// ---------------------------------------------------------------------------
// bias: small-k bias of the ratio estimate, prediction, and correction.
void study_bias(StudyContext& ctx) {
  const double A = ctx.params.value("A", 0.4);
  const double B = ctx.params.value("B", 0.5);
  const double p = ctx.params.value("p", 0.99);
  const int m1 = ctx.params.value("m1", 4);
  const int m2 = ctx.params.value("m2", 50);
  const int k = ctx.params.value("k", 10);
  const int n = ctx.params.value("n", 15);

  const DecayParams params(A, B, p);
  const AnalyticSource source{params, std::nullopt};
  double sum_unc = 0.0, sum_cor = 0.0, sum_sq = 0.0;
  for (int rep = 0; rep < ctx.replicates; ++rep) {
    const std::uint64_t seed =
        SeedSequence(ctx.seed).with("bias").with(std::uint64_t(rep)).value();
    const auto ds =
        generate({{m1, 0, k, n}, {m2, 0, k, n}}, source, std::nullopt, seed);
    const TwoPointSummary s = two_point_from_dataset(ds, m1, m2, B);
    const double unc =
        ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off).p_hat;
    sum_unc += unc;
    sum_sq += unc * unc;
    sum_cor += ratio_estimate(s, kDefaultTruncation, BiasCorrection::On).p_hat;
  }
  const double reps = ctx.replicates;
  const double mean_unc = sum_unc / reps;
  const double se =
      std::sqrt(std::max(0.0, sum_sq / reps - mean_unc * mean_unc) / reps);

  // Second-order prediction of the uncorrected mean from the true model.
  const double dm = m2 - m1;
  const double x1 = A * std::pow(p, m1), x2 = A * std::pow(p, m2);
  const double q1 = x1 + B, q2 = x2 + B;
  const double v1 = q1 * (1 - q1) / (double(k) * n);
  const double v2 = q2 * (1 - q2) / (double(k) * n);
  const double a1 = -1.0 / dm, a2 = 1.0 / dm;
  const double predicted =
      (std::pow(x1, a1) + 0.5 * a1 * (a1 - 1) * std::pow(x1, a1 - 2) * v1) *
      (std::pow(x2, a2) + 0.5 * a2 * (a2 - 1) * std::pow(x2, a2 - 2) * v2);

  std::ostringstream csv;
  csv << "A,B,p,k,n,m1,m2,replicates,mean_p_uncorrected,mean_p_corrected,"
         "predicted_mean_uncorrected,true_p,se_mean\n";
  csv << fmt(A) << "," << fmt(B) << "," << fmt(p) << "," << k << "," << n
      << "," << m1 << "," << m2 << "," << ctx.replicates << ","
      << fmt(mean_unc) << "," << fmt(sum_cor / reps) << "," << fmt(predicted)
      << "," << fmt(p) << "," << fmt(se) << "\n";
  ctx.write("bias.csv", csv.str());
}

// ---------------------------------------------------------------------------
// validation_power: rejection rate of the consistency test against drift.
void study_validation_power(StudyContext& ctx) {
  const double A = ctx.params.value("A", 0.4);  // branch amplitude
  const double B = ctx.params.value("B", 0.5);
  const double p = ctx.params.value("p", 0.99);
  const auto p_ends = lattice(ctx.params, "p_end", {0.99, 0.97, 0.95});
  const int k = ctx.params.value("k", 100);
  const int n = ctx.params.value("n", 25);
  const double alpha = ctx.params.value("alpha", 0.05);
  const int m1 = ctx.params.value("m1", 4);
  const int m2 = ctx.params.value("m2", 50);
  const std::vector<int> holdout =
      ctx.params.value("holdout", std::vector<int>{10, 20, 100});

  std::vector<DesignRow> design;
  design.push_back({m1, 0, k, n});
  design.push_back({m1, 1, k, n});
  design.push_back({m2, 0, k, n});
  design.push_back({m2, 1, k, n});
  for (int m : holdout) {
    design.push_back({m, 0, k, n});
    design.push_back({m, 1, k, n});
  }

  std::ostringstream csv;
  csv << "p_start,p_end,k,n,alpha,replicates,rejections,rate\n";
  const AnalyticSource source{DecayParams(A, B, p), std::nullopt};
  for (double p_end : p_ends) {
    int rejects = 0;
    for (int rep = 0; rep < ctx.replicates; ++rep) {
      const std::uint64_t seed = SeedSequence(ctx.seed)
                                     .with("power")
                                     .with(fmt(p_end))
                                     .with(std::uint64_t(rep))
                                     .value();
      std::optional<DriftSpec> drift;
      if (p_end != p) drift = DriftSpec(p, p_end);
      const auto ds = generate(design, source, drift, seed);
      const TwoPointSummary s =
          two_point_from_dataset(ds, m1, m2, std::nullopt);
      const Estimate est =
          ratio_estimate(s, kDefaultTruncation, BiasCorrection::Off);
      if (consistency_test(ds, est, std::nullopt, holdout, alpha).reject) {
        ++rejects;
      }
    }
    csv << fmt(p) << "," << fmt(p_end) << "," << k << "," << n << ","
        << fmt(alpha) << "," << ctx.replicates << "," << rejects << ","
        << fmt(double(rejects) / ctx.replicates) << "\n";
  }
  ctx.write("validation_power.csv", csv.str());
}

}  // namespace

std::vector<std::string> run_study(const std::string& config_json,
                                   const std::string& out_dir_override) {
  Json config = Json::parse(config_json, nullptr, false);
  if (config.is_discarded()) {
    throw DataError("malformed study config");
  }
  if (config.value("schema", std::string()) != "rb-study/1") {
    throw DataError("expected schema rb-study/1");
  }
  if (!config.contains("seed")) {
    throw DataError("study config requires an explicit seed");
  }

  StudyContext ctx;
  ctx.name = config.value("study", std::string());
  ctx.seed = config.at("seed").get<std::uint64_t>();
  ctx.replicates = config.value("replicates", 1);
  if (ctx.replicates < 1) {
    throw DataError("replicates must be >= 1");
  }
  ctx.params = config.value("params", Json::object());
  const std::string out_dir = !out_dir_override.empty()
                                  ? out_dir_override
                                  : config.value("out_dir", std::string("study-out"));
  ctx.out_dir = out_dir;

  if (ctx.name == "cdf_comparison") {
    study_cdf_comparison(ctx);
  } else if (ctx.name == "m2_landscape") {
    study_m2_landscape(ctx);
  } else if (ctx.name == "adaptive_scaling") {
    study_adaptive_scaling(ctx);
  } else if (ctx.name == "coverage") {
    study_coverage(ctx);
  } else if (ctx.name == "bias") {
    study_bias(ctx);
  } else if (ctx.name == "validation_power") {
    study_validation_power(ctx);
  } else {
    throw DataError("unknown study: " + ctx.name);
  }

  Json manifest;
  manifest["schema"] = "rb-study-manifest/1";
  manifest["study"] = ctx.name;
  manifest["toolkit_version"] = kToolkitVersion;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  manifest["config_hash"] = hash;
  manifest["config"] = config;
  ctx.write("manifest.json", manifest.dump(2) + "\n");
  return ctx.written;
}

}  // namespace rbkit
