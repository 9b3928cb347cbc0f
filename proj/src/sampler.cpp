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

#include "rbkit/sampler.hpp"

#include <cmath>
#include <set>

#include "rbkit/cliffsim.hpp"
#include "rbkit/errors.hpp"
#include "rbkit/rng.hpp"

namespace rbkit {

namespace {

void validate_design(const std::vector<DesignRow>& design) {
  if (design.empty()) {
    throw DataError("design must not be empty");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& row : design) {
    if (row.m < 1) throw DataError("design rows need m >= 1");
    if (row.b != 0 && row.b != 1) throw DataError("design rows need b in {0, 1}");
    if (row.k < 1) throw DataError("design rows need k >= 1");
    if (row.n < 1) throw DataError("design rows need n >= 1");
    if (!seen.insert({row.m, row.b}).second) {
      throw DataError("duplicate (m, b) design row");
    }
  }
}

double branch_probability(const DecayParams& params, int m, int b, double p) {
  const double decay = params.A * std::pow(p, m);
  const double q = b == 0 ? params.B + decay : params.B - decay;
  if (q < -1e-12 || q > 1.0 + 1e-12) {
    throw DataError("design row yields success probability outside [0, 1]; "
                    "tighten A, B, or the length range");
  }
  return std::clamp(q, 0.0, 1.0);
}

double beta_draw(double mean, double concentration, Rng& rng) {
  const double a = mean * concentration;
  const double b = (1.0 - mean) * concentration;
  if (a <= 0.0 || b <= 0.0) {
    return mean;  // degenerate at the boundary
  }
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

int binomial_draw(int n, double q, Rng& rng) {
  if (q <= 0.0) return 0;
  if (q >= 1.0) return n;
  std::binomial_distribution<int> dist(n, q);
  return dist(rng);
}

}  // namespace

DecayParams difference_model(const DecayParams& branch_params) {
  if (branch_params.A > 0.5 + 1e-12) {
    throw std::invalid_argument(
        "difference amplitude 2A exceeds 1; branch amplitude must be <= 1/2");
  }
  return DecayParams::difference(2.0 * branch_params.A, branch_params.p);
}

RBDataset generate(const std::vector<DesignRow>& design,
                   const DataSource& source,
                   const std::optional<DriftSpec>& drift, std::uint64_t seed) {
  validate_design(design);

  RBDataset ds;
  ds.meta.seed = seed;
  ds.meta.drift = drift;

  std::size_t total_sequences = 0;
  for (const auto& row : design) total_sequences += row.k;

  if (const auto* gate = std::get_if<GateLevelSource>(&source)) {
    if (drift) {
      throw DataError("drift is only supported on the analytic backend");
    }
    ds.meta.backend = "gate-level";
    ds.meta.n_qubits = gate->n_qubits;
    ds.meta.noise = gate->noise.to_string();
    const CliffordGroup group(gate->n_qubits);
    const Superoperator noise = gate->noise.to_superoperator(gate->n_qubits);
    const QuantumState rho = QuantumState::computational_zero(gate->n_qubits);
    const MeasurementEffect effect =
        MeasurementEffect::projector_zero(gate->n_qubits);
    for (const auto& row : design) {
      RBPoint pt{row.m, row.b, {}};
      pt.sequences.reserve(row.k);
      for (int j = 0; j < row.k; ++j) {
        Rng rng = derived_stream(seed, std::uint64_t(row.m),
                                 std::uint64_t(row.b), std::uint64_t(j));
        const SequenceRecord seq = sample_sequence(group, row.m, row.b, rng);
        const double q = run_sequence(group, seq, noise, rho, effect);
        pt.sequences.push_back({row.n, binomial_draw(row.n, q, rng)});
      }
      ds.points.push_back(std::move(pt));
    }
    return ds;
  }

  const auto& analytic = std::get<AnalyticSource>(source);
  ds.meta.backend = "analytic";
  ds.meta.params = analytic.params;
  ds.meta.spread_concentration = analytic.spread_concentration;

  std::size_t sequence_counter = 0;
  for (const auto& row : design) {
    RBPoint pt{row.m, row.b, {}};
    pt.sequences.reserve(row.k);
    for (int j = 0; j < row.k; ++j, ++sequence_counter) {
      Rng rng = derived_stream(seed, std::uint64_t(row.m),
                               std::uint64_t(row.b), std::uint64_t(j));
      const double p = drift ? drift->p_at(sequence_counter, total_sequences)
                             : analytic.params.p;
      double q = branch_probability(analytic.params, row.m, row.b, p);
      if (analytic.spread_concentration) {
        q = beta_draw(q, *analytic.spread_concentration, rng);
      }
      pt.sequences.push_back({row.n, binomial_draw(row.n, q, rng)});
    }
    ds.points.push_back(std::move(pt));
  }
  return ds;
}

UnitarityDataset generate_unitarity(const std::vector<int>& lengths, int k,
                                    const GateLevelSource& source,
                                    std::uint64_t seed) {
  if (lengths.empty()) throw DataError("unitarity design must not be empty");
  if (k < 2) throw DataError("unitarity protocol needs k >= 2 sequences");
  for (int m : lengths) {
    if (m < 1) throw DataError("unitarity lengths must be >= 1");
  }

  UnitarityDataset ds;
  ds.seed = seed;
  ds.n_qubits = source.n_qubits;
  ds.noise = source.noise.to_string();

  const CliffordGroup group(source.n_qubits);
  const Superoperator noise = source.noise.to_superoperator(source.n_qubits);
  const QuantumState rho = QuantumState::computational_zero(source.n_qubits);

  for (int m : lengths) {
    UnitarityPoint pt;
    pt.m = m;
    pt.sequences.reserve(k);
    for (int j = 0; j < k; ++j) {
      Rng rng = derived_stream(seed, "unitarity", std::uint64_t(m),
                               std::uint64_t(j));
      std::vector<std::uint64_t> ids(m);
      for (auto& id : ids) id = group.sample(rng);
      const PauliExpectations exp = pauli_expectations(group, ids, noise, rho);
      pt.sequences.push_back({exp.values, exp.trace});
    }
    ds.points.push_back(std::move(pt));
  }
  return ds;
}

}  // namespace rbkit
