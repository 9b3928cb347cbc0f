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

#ifndef RBKIT_DATASET_HPP
#define RBKIT_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbkit/model.hpp"

namespace rbkit {

/// Slow drift of the decay parameter across the experiment: p is a linear
/// ramp in the global sequence counter (the order sequences are run).
struct DriftSpec {
  double p_start = 1.0;
  double p_end = 1.0;

  DriftSpec() = default;
  DriftSpec(double start, double end);

  double p_at(std::size_t sequence_index, std::size_t total_sequences) const;
};

struct SequenceCounts {
  int n = 1;          // shots for this sequence
  int successes = 0;  // 0 <= successes <= n
};

struct RBPoint {
  int m = 1;
  int b = 0;
  std::vector<SequenceCounts> sequences;
};

struct DatasetMeta {
  std::string backend;  // "analytic" or "gate-level"
  std::uint64_t seed = 0;
  int n_qubits = 1;
  std::optional<DecayParams> params;        // analytic backend
  std::optional<std::string> noise;         // gate-level backend
  std::optional<DriftSpec> drift;
  std::optional<double> spread_concentration;
};

/// Raw per-sequence shot outcomes grouped by sequence length and compiled bit.
struct RBDataset {
  DatasetMeta meta;
  std::vector<RBPoint> points;

  bool has_point(int m, int b) const;
  const RBPoint& point(int m, int b) const;  // DataError if absent
  std::vector<int> lengths() const;

  /// True when every sequence is measured exactly once.
  bool is_single_shot() const;

  std::string to_json() const;
  static RBDataset from_json(const std::string& text);

  /// Columns: m, b, k, n, mean, variance.
  std::string summary_csv() const;
};

struct GroupSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance of per-sequence means
  int k = 0;
  int n = 0;  // shots per sequence; -1 if mixed
  bool insufficient_replicates = false;  // k < 2: variance reported as 0
};

GroupSummary summarize(const RBDataset& ds, int m, int b);

struct DifferenceSummary {
  double mean = 0.0;      // q_hat(m|0) - q_hat(m|1)
  double variance = 0.0;  // variance of that mean difference
  int k0 = 0;
  int k1 = 0;
};

DifferenceSummary difference_summary(const RBDataset& ds, int m);

/// One raw (inversion-free) sequence of the unitarity protocol: exact
/// estimates of every non-identity Pauli expectation, plus the trace
/// component (the identity expectation; 1 under trace-preserving noise).
struct UnitaritySequence {
  std::vector<double> pauli_values;
  double trace = 1.0;
};

struct UnitarityPoint {
  int m = 1;
  std::vector<UnitaritySequence> sequences;
};

struct UnitarityDataset {
  std::string backend = "gate-level";
  std::uint64_t seed = 0;
  int n_qubits = 1;
  std::optional<std::string> noise;
  std::vector<UnitarityPoint> points;

  bool has_point(int m) const;
  const UnitarityPoint& point(int m) const;

  std::string to_json() const;
  static UnitarityDataset from_json(const std::string& text);
};

struct UnitaritySummaries {
  /// Mean over sequences of the trace component; the leakage-decay
  /// statistic (its expected value is A_l l^m).
  double a_trace = 1.0;
  /// Per-Pauli sequence means and their average over Paulis.
  std::vector<double> a_pauli;
  double a_pauli_mean = 0.0;
  /// Spread statistic sum_{P,s} q^2 / k  -  sum_P a(m|P)^2; decays as
  /// A_u u^m. With `pauli_average` the whole statistic is divided by
  /// 4^n - 1 (rescales the amplitude only, never the fitted u).
  double b_spread = 0.0;
  int k = 0;
};

UnitaritySummaries unitarity_summaries(const UnitarityDataset& ds, int m,
                                       bool pauli_average = false);

}  // namespace rbkit

#endif  // RBKIT_DATASET_HPP
