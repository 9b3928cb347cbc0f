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

#ifndef RBKIT_SAMPLER_HPP
#define RBKIT_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rbkit/dataset.hpp"
#include "rbkit/model.hpp"
#include "rbkit/superop.hpp"

namespace rbkit {

struct DesignRow {
  int m = 1;
  int b = 0;
  int k = 1;  // sequences
  int n = 1;  // shots per sequence
};

/// Analytic source. The b = 0 branch succeeds with probability
/// A p^m + B; the b = 1 branch is the orthogonal-outcome mirror with
/// probability B - A p^m, so the paired difference decays as (2A) p^m with
/// no offset. Optional Beta-distributed per-sequence spread around the mean
/// (concentration parameter kappa) models sequence-to-sequence variation.
struct AnalyticSource {
  DecayParams params;
  std::optional<double> spread_concentration;
};

struct GateLevelSource {
  int n_qubits = 1;
  NoiseSpec noise;
};

using DataSource = std::variant<AnalyticSource, GateLevelSource>;

/// Difference-decay parameters implied by an analytic source:
/// q(m|0) - q(m|1) = (2A) p^m. Requires A <= 1/2.
DecayParams difference_model(const DecayParams& branch_params);

/// Runs the sampling protocol for every design row. Sequences draw their
/// randomness from streams derived from (seed, m, b, sequence index), so
/// output is independent of evaluation order. Drift replaces p per sequence
/// in experiment order (points in design order, sequences within); it is
/// only supported on the analytic backend.
RBDataset generate(const std::vector<DesignRow>& design,
                   const DataSource& source,
                   const std::optional<DriftSpec>& drift, std::uint64_t seed);

/// Raw-sequence unitarity protocol data: k sequences per length, exact
/// Pauli expectation values from the gate-level backend.
UnitarityDataset generate_unitarity(const std::vector<int>& lengths, int k,
                                    const GateLevelSource& source,
                                    std::uint64_t seed);

}  // namespace rbkit

#endif  // RBKIT_SAMPLER_HPP
