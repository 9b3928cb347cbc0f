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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbkit/adaptive.hpp"
#include "rbkit/design.hpp"
#include "rbkit/errors.hpp"
#include "rbkit/estimate.hpp"
#include "rbkit/sampler.hpp"
#include "rbkit/studies.hpp"
#include "rbkit/validate.hpp"

namespace {

using namespace rbkit;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  out << content;
}

DesignRow parse_design_row(const std::string& text) {
  DesignRow row;
  if (std::sscanf(text.c_str(), "%d:%d:%d:%d", &row.m, &row.b, &row.k,
                  &row.n) != 4) {
    throw CLI::ValidationError("--design expects m:b:k:n, got '" + text + "'");
  }
  return row;
}

DriftSpec parse_drift(const std::string& text) {
  char kind[16];
  double p0 = 0.0, p1 = 0.0;
  if (std::sscanf(text.c_str(), "%15[a-z]:%lf:%lf", kind, &p0, &p1) != 3 ||
      std::string(kind) != "linear") {
    throw CLI::ValidationError("--drift expects linear:p_start:p_end");
  }
  return DriftSpec(p0, p1);
}

struct SimulateArgs {
  std::string backend = "analytic";
  std::string protocol = "survival";
  double A = 0.5, B = 0.5, p = 0.99;
  std::string noise = "depolarizing:0.01";
  int qubits = 1;
  std::vector<std::string> design_rows;
  std::vector<int> lengths;
  int k = 100;
  std::string drift;
  double spread = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  if (args.protocol == "unitarity") {
    if (args.backend != "gate-level") {
      throw DataError("unitarity protocol needs the gate-level backend");
    }
    const GateLevelSource source{args.qubits, NoiseSpec::parse(args.noise)};
    const UnitarityDataset ds =
        generate_unitarity(args.lengths, args.k, source, args.seed);
    write_file(args.out, ds.to_json());
    std::cout << "wrote " << args.out << " (" << ds.points.size()
              << " lengths, k=" << args.k << ")\n";
    return 0;
  }

  std::vector<DesignRow> design;
  design.reserve(args.design_rows.size());
  for (const auto& text : args.design_rows) {
    design.push_back(parse_design_row(text));
  }
  std::optional<DriftSpec> drift;
  if (!args.drift.empty()) drift = parse_drift(args.drift);

  RBDataset ds;
  if (args.backend == "analytic") {
    AnalyticSource source{DecayParams(args.A, args.B, args.p), std::nullopt};
    if (args.spread > 0.0) source.spread_concentration = args.spread;
    ds = generate(design, source, drift, args.seed);
  } else if (args.backend == "gate-level") {
    const GateLevelSource source{args.qubits, NoiseSpec::parse(args.noise)};
    ds = generate(design, source, drift, args.seed);
  } else {
    throw CLI::ValidationError("--backend must be analytic or gate-level");
  }
  write_file(args.out, ds.to_json());
  std::size_t sequences = 0;
  for (const auto& pt : ds.points) sequences += pt.sequences.size();
  std::cout << "wrote " << args.out << " (" << ds.points.size() << " groups, "
            << sequences << " sequences)\n";
  return 0;
}

struct EstimateArgs {
  std::string data;
  int m1 = 4, m2 = 0;
  std::string mode = "difference";
  double B = 0.5;
  std::string bias = "auto";
  std::string interval = "chebyshev";
  double coverage = 0.9;
  double delta_trunc = kDefaultTruncation;
  std::string out;
};

Estimate make_estimate(const RBDataset& ds, const EstimateArgs& args) {
  std::optional<double> known_B;
  if (args.mode == "known-B") {
    known_B = args.B;
  } else if (args.mode != "difference") {
    throw CLI::ValidationError("--mode must be known-B or difference");
  }

  if (args.interval == "lognormal") {
    if (known_B) {
      return lognormal_interval(arb_counts_from_dataset(ds, args.m1, args.m2),
                                *known_B, args.coverage, args.delta_trunc);
    }
    return lognormal_interval(
        arb_difference_counts_from_dataset(ds, args.m1, args.m2),
        args.coverage, args.delta_trunc);
  }
  if (args.interval != "chebyshev") {
    throw CLI::ValidationError("--interval must be chebyshev or lognormal");
  }
  BiasCorrection bias = BiasCorrection::Auto;
  if (args.bias == "on") bias = BiasCorrection::On;
  else if (args.bias == "off") bias = BiasCorrection::Off;
  else if (args.bias != "auto") {
    throw CLI::ValidationError("--bias-correct must be auto, on, or off");
  }
  const TwoPointSummary s =
      two_point_from_dataset(ds, args.m1, args.m2, known_B);
  return ratio_estimate(s, args.delta_trunc, bias);
}

int cmd_estimate(const EstimateArgs& args) {
  const RBDataset ds = RBDataset::from_json(read_file(args.data));
  const Estimate est = make_estimate(ds, args);
  std::cout << "p_hat = " << est.p_hat << "  r_hat = " << est.r_hat
            << "  A_hat = " << est.A_hat << "\n"
            << "sd(p_hat) ~ " << std::sqrt(est.variance_p) << "  interval ["
            << est.interval.lo << ", " << est.interval.hi << "] ("
            << est.interval.method << ", coverage " << est.interval.coverage
            << ")\n";
  if (est.flags.truncated_m1 || est.flags.truncated_m2) {
    std::cout << "note: truncation floor engaged\n";
  }
  if (est.flags.bias_corrected) {
    std::cout << "note: second-order bias correction applied\n";
  }
  if (!args.out.empty()) write_file(args.out, est.to_json());
  return 0;
}

struct UnitarityArgs {
  std::string data;
  int m1 = 2, m2 = 20;
  bool pauli_average = false;
  double delta_trunc = kDefaultTruncation;
  std::string out;
};

int cmd_unitarity(const UnitarityArgs& args) {
  const UnitarityDataset ds = UnitarityDataset::from_json(read_file(args.data));
  const UnitaritySummaries s1 =
      unitarity_summaries(ds, args.m1, args.pauli_average);
  const UnitaritySummaries s2 =
      unitarity_summaries(ds, args.m2, args.pauli_average);
  const UnitarityEstimate est =
      unitarity_estimate(s1.a_trace, s2.a_trace, s1.b_spread, s2.b_spread,
                         args.m1, args.m2, args.delta_trunc);
  std::cout << "l_hat = " << est.l_hat << "  u_hat = " << est.u_hat
            << "  A_l_hat = " << est.A_l_hat << "  A_u_hat = " << est.A_u_hat
            << "\n";
  if (est.truncated) std::cout << "note: truncation floor engaged\n";
  if (!args.out.empty()) {
    nlohmann::ordered_json j;
    j["schema"] = "rb-unitarity-estimate/1";
    j["l_hat"] = est.l_hat;
    j["u_hat"] = est.u_hat;
    j["A_l_hat"] = est.A_l_hat;
    j["A_u_hat"] = est.A_u_hat;
    j["m1"] = args.m1;
    j["m2"] = args.m2;
    j["truncated"] = est.truncated;
    write_file(args.out, j.dump(2) + "\n");
  }
  return 0;
}

struct DesignArgs {
  double A = 0.5, B = 0.5, p = 0.99;
  int m1 = 4;
  double k1 = 1.0, k2 = 1.0;
  std::string mode = "difference";
  std::string landscape;
  int m2_max = 0;
};

int cmd_design(const DesignArgs& args) {
  DesignInput input{DecayParams(0.5, 0.0, args.p), args.m1, args.k1, args.k2};
  if (args.mode == "difference") {
    input.model = DifferenceDesign(args.A, args.B, args.p);
  } else if (args.mode == "known-B") {
    input.model = DecayParams(args.A, args.B, args.p);
  } else {
    throw CLI::ValidationError("--mode must be known-B or difference");
  }
  const int opt = optimal_m2(input);
  const int weighted = optimal_m2_weighted(input);
  std::cout << "optimal m2 = " << opt << "\n"
            << "optimal m2 (k-weighted) = " << weighted << "\n"
            << "heuristic m2 = " << heuristic_m2(args.p) << "\n"
            << "alternative heuristic m2 = " << heuristic_m2_alternative(args.p)
            << "\n";
  if (!args.landscape.empty()) {
    std::ostringstream csv;
    csv << "m2,variance\n";
    const int hi = args.m2_max > 0 ? args.m2_max : 3 * opt;
    for (int m2 = args.m1 + 1; m2 <= hi; ++m2) {
      csv << m2 << "," << variance_objective(input, m2) << "\n";
    }
    write_file(args.landscape, csv.str());
    std::cout << "wrote " << args.landscape << "\n";
  }
  return 0;
}

struct AdaptiveArgs {
  std::string oracle = "analytic";
  double A = 1.0, p = 0.99;
  std::string noise = "depolarizing:0.01";
  int qubits = 1;
  std::string data;
  double B = 0.0;
  double epsilon = 0.05, delta = 0.1;
  std::int64_t t = 0;
  int max_doublings = 40;
  double ap_lower = 0.25;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_adaptive(const AdaptiveArgs& args) {
  AdaptiveConfig cfg;
  cfg.epsilon = args.epsilon;
  cfg.delta = args.delta;
  cfg.t = args.t;
  cfg.max_doublings = args.max_doublings;
  cfg.ap_lower = args.ap_lower;

  std::unique_ptr<ShotOracle> oracle;
  if (args.oracle == "analytic") {
    oracle = std::make_unique<AnalyticShotOracle>(
        DecayParams::difference(args.A, args.p));
  } else if (args.oracle == "gate-level") {
    oracle = std::make_unique<GateLevelShotOracle>(args.qubits,
                                                   NoiseSpec::parse(args.noise));
  } else if (args.oracle == "replay") {
    oracle = std::make_unique<ReplayShotOracle>(
        RBDataset::from_json(read_file(args.data)), args.B);
  } else {
    throw CLI::ValidationError(
        "--oracle must be analytic, gate-level, or replay");
  }

  Rng rng = derived_stream(args.seed, "adaptive-cli");
  const AdaptiveResult res = run_adaptive(*oracle, cfg, rng);
  std::cout << "p_hat = " << res.p_hat << "  r_hat = " << res.r_hat
            << "  doublings = " << res.ell << "  m = " << res.m
            << "  total shots = " << res.total_shots << "\n";
  if (!args.out.empty()) write_file(args.out, res.to_json());
  return 0;
}

struct ValidateArgs {
  std::string data;
  int m1 = 4, m2 = 0;
  std::string mode = "difference";
  double B = 0.5;
  std::vector<int> holdout;
  double alpha = 0.05;
  std::string out;
};

int cmd_validate(const ValidateArgs& args) {
  const RBDataset ds = RBDataset::from_json(read_file(args.data));
  std::optional<double> known_B;
  if (args.mode == "known-B") {
    known_B = args.B;
  } else if (args.mode != "difference") {
    throw CLI::ValidationError("--mode must be known-B or difference");
  }
  const TwoPointSummary s =
      two_point_from_dataset(ds, args.m1, args.m2, known_B);
  const Estimate est = ratio_estimate(s);
  const ValidationReport report =
      consistency_test(ds, est, known_B, args.holdout, args.alpha);
  std::cout << report.to_table();
  if (!args.out.empty()) write_file(args.out, report.to_json());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistics toolkit for randomized-benchmarking experiments"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a dataset");
  simulate->add_option("--backend", sim.backend, "analytic or gate-level");
  simulate->add_option("--protocol", sim.protocol, "survival or unitarity");
  simulate->add_option("--A", sim.A, "amplitude (analytic backend)");
  simulate->add_option("--B", sim.B, "offset (analytic backend)");
  simulate->add_option("--p", sim.p, "decay parameter (analytic backend)");
  simulate->add_option("--noise", sim.noise,
                       "gate-level noise, e.g. depolarizing:0.02");
  simulate->add_option("--qubits", sim.qubits, "1 or 2 (gate-level backend)");
  simulate->add_option("--design", sim.design_rows,
                       "design row m:b:k:n (repeatable)");
  simulate->add_option("--lengths", sim.lengths,
                       "sequence lengths (unitarity protocol)")
      ->delimiter(',');
  simulate->add_option("--k", sim.k, "sequences per length (unitarity)");
  simulate->add_option("--drift", sim.drift, "linear:p_start:p_end");
  simulate->add_option("--spread", sim.spread,
                       "beta concentration for sequence-to-sequence spread");
  simulate->add_option("--seed", sim.seed, "root seed")->required();
  simulate->add_option("--out", sim.out, "output JSON path")->required();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "two-point decay estimate");
  estimate->add_option("--data", est.data, "dataset JSON")->required();
  estimate->add_option("--m1", est.m1, "short length");
  estimate->add_option("--m2", est.m2, "long length")->required();
  estimate->add_option("--mode", est.mode, "known-B or difference");
  estimate->add_option("--B", est.B, "known offset (known-B mode)");
  estimate->add_option("--bias-correct", est.bias, "auto, on, or off");
  estimate->add_option("--interval", est.interval, "chebyshev or lognormal");
  estimate->add_option("--coverage", est.coverage,
                       "coverage for the lognormal interval");
  estimate->add_option("--delta-trunc", est.delta_trunc, "truncation floor");
  estimate->add_option("--out", est.out, "estimate JSON path");

  UnitarityArgs uni;
  auto* unitarity =
      app.add_subcommand("unitarity", "leakage and unitarity estimates");
  unitarity->add_option("--data", uni.data, "unitarity dataset JSON")
      ->required();
  unitarity->add_option("--m1", uni.m1, "short length");
  unitarity->add_option("--m2", uni.m2, "long length");
  unitarity->add_flag("--pauli-average", uni.pauli_average,
                      "normalize the spread statistic by the Pauli count");
  unitarity->add_option("--delta-trunc", uni.delta_trunc, "truncation floor");
  unitarity->add_option("--out", uni.out, "estimate JSON path");

  DesignArgs des;
  auto* design = app.add_subcommand("design", "choose the second length");
  design->add_option("--A", des.A, "assumed amplitude")->required();
  design->add_option("--B", des.B, "assumed offset")->required();
  design->add_option("--p", des.p, "assumed decay parameter")->required();
  design->add_option("--m1", des.m1, "short length");
  design->add_option("--k1", des.k1, "sequences at m1 (weighted variant)");
  design->add_option("--k2", des.k2, "sequences at m2 (weighted variant)");
  design->add_option("--mode", des.mode, "known-B or difference");
  design->add_option("--landscape", des.landscape, "variance landscape CSV");
  design->add_option("--m2-max", des.m2_max, "landscape upper bound");

  AdaptiveArgs ada;
  auto* adaptive =
      app.add_subcommand("adaptive", "self-terminating doubling estimator");
  adaptive->add_option("--oracle", ada.oracle,
                       "analytic, gate-level, or replay");
  adaptive->add_option("--A", ada.A, "difference amplitude (analytic)");
  adaptive->add_option("--p", ada.p, "decay parameter (analytic)");
  adaptive->add_option("--noise", ada.noise, "gate-level noise");
  adaptive->add_option("--qubits", ada.qubits, "gate-level qubit count");
  adaptive->add_option("--data", ada.data, "dataset for the replay oracle");
  adaptive->add_option("--B", ada.B, "known offset subtracted on replay");
  adaptive->add_option("--epsilon", ada.epsilon, "target relative precision");
  adaptive->add_option("--delta", ada.delta, "failure probability");
  adaptive->add_option("--t", ada.t, "shots per estimate (0 = auto)");
  adaptive->add_option("--max-doublings", ada.max_doublings, "safety cap");
  adaptive->add_option("--ap-lower", ada.ap_lower,
                       "assumed lower bound on A p");
  adaptive->add_option("--seed", ada.seed, "root seed")->required();
  adaptive->add_option("--out", ada.out, "result JSON path");

  ValidateArgs val;
  auto* validate =
      app.add_subcommand("validate", "test holdout lengths against the fit");
  validate->add_option("--data", val.data, "dataset JSON")->required();
  validate->add_option("--m1", val.m1, "fit short length");
  validate->add_option("--m2", val.m2, "fit long length")->required();
  validate->add_option("--mode", val.mode, "known-B or difference");
  validate->add_option("--B", val.B, "known offset (known-B mode)");
  validate->add_option("--holdout", val.holdout, "holdout lengths")
      ->delimiter(',')
      ->required();
  validate->add_option("--alpha", val.alpha, "significance level");
  validate->add_option("--out", val.out, "report JSON path");

  std::string study_config;
  std::string study_out;
  auto* study = app.add_subcommand("study", "run a named study from a config");
  study->add_option("config", study_config, "study config JSON")->required();
  study->add_option("--out-dir", study_out, "override the output directory");

  std::string summary_data, summary_out;
  auto* summary = app.add_subcommand("summary", "per-group summary CSV");
  summary->add_option("--data", summary_data, "dataset JSON")->required();
  summary->add_option("--out", summary_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (estimate->parsed()) return cmd_estimate(est);
    if (unitarity->parsed()) return cmd_unitarity(uni);
    if (design->parsed()) return cmd_design(des);
    if (adaptive->parsed()) return cmd_adaptive(ada);
    if (validate->parsed()) return cmd_validate(val);
    if (study->parsed()) {
      for (const auto& path :
           rbkit::run_study(read_file(study_config), study_out)) {
        std::cout << "wrote " << path << "\n";
      }
      return 0;
    }
    if (summary->parsed()) {
      const RBDataset ds = RBDataset::from_json(read_file(summary_data));
      const std::string csv = ds.summary_csv();
      if (summary_out.empty()) {
        std::cout << csv;
      } else {
        write_file(summary_out, csv);
        std::cout << "wrote " << summary_out << "\n";
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const rbkit::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const rbkit::NumericError& e) {
    std::cerr << "numerical degeneracy: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
