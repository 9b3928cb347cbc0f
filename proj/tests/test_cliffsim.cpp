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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rbkit/cliffsim.hpp"
#include "rbkit/sampler.hpp"

using namespace rbkit;

namespace {

// Exhaustive average of the exact survival probability over every gate
// tuple of length m (24^m sequences); the oracle for the decay-model
// emergence checks.
double exhaustive_average(const CliffordGroup& group, int m,
                          const Superoperator& noise,
                          const MeasurementEffect& effect) {
  const QuantumState rho = QuantumState::computational_zero(1);
  std::vector<std::uint64_t> ids(m, 0);
  double acc = 0.0;
  std::size_t count = 0;
  while (true) {
    SequenceRecord seq;
    seq.n_qubits = 1;
    seq.m = m;
    seq.b = 0;
    seq.gate_ids = ids;
    CliffordTableau composite = CliffordTableau::identity(1);
    for (const auto id : ids) {
      composite = group.tableau(id).compose_after(composite);
    }
    seq.inversion_id = group.encode(composite.inverse());
    acc += run_sequence(group, seq, noise, rho, effect);
    ++count;
    int pos = 0;
    while (pos < m && ++ids[pos] == group.order()) {
      ids[pos++] = 0;
    }
    if (pos == m) break;
  }
  return acc / static_cast<double>(count);
}

double exact_difference_average(const CliffordGroup& group, int m,
                                const Superoperator& noise,
                                const MeasurementEffect& effect, Rng& rng,
                                int n_sequences) {
  const QuantumState rho = QuantumState::computational_zero(1);
  double acc = 0.0;
  for (int j = 0; j < n_sequences; ++j) {
    Rng seq_rng(rng());
    Rng seq_rng_copy = seq_rng;
    SequenceRecord s0 = sample_sequence(group, m, 0, seq_rng);
    SequenceRecord s1 = sample_sequence(group, m, 1, seq_rng_copy);
    acc += run_sequence(group, s0, noise, rho, effect) -
           run_sequence(group, s1, noise, rho, effect);
  }
  return acc / n_sequences;
}

}  // namespace

TEST_CASE("noiseless sequences invert exactly") {
  for (int n : {1, 2}) {
    const CliffordGroup group(n);
    const Superoperator none = Superoperator::identity(n);
    Rng rng(5);
    for (int m : {1, 4, 9}) {
      const SequenceRecord s0 = sample_sequence(group, m, 0, rng);
      CHECK(run_sequence(group, s0, none) == doctest::Approx(1.0).epsilon(1e-12));
      const SequenceRecord s1 = sample_sequence(group, m, 1, rng);
      CHECK(run_sequence(group, s1, none) == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("ideal composite including the inversion equals the basis flip") {
  for (int n : {1, 2}) {
    const CliffordGroup group(n);
    Rng rng(11);
    for (int b : {0, 1}) {
      const SequenceRecord seq = sample_sequence(group, 6, b, rng);
      CliffordTableau composite = CliffordTableau::identity(n);
      for (const auto id : seq.gate_ids) {
        composite = group.tableau(id).compose_after(composite);
      }
      composite = group.tableau(seq.inversion_id).compose_after(composite);
      const CliffordTableau want = b == 0 ? CliffordTableau::identity(n)
                                          : CliffordTableau::x_flip_all(n);
      CHECK(composite == want);
    }
  }
}

TEST_CASE("sequence sampling is deterministic under a fixed seed") {
  const CliffordGroup group(2);
  Rng a(99), b(99);
  const SequenceRecord sa = sample_sequence(group, 8, 1, a);
  const SequenceRecord sb = sample_sequence(group, 8, 1, b);
  CHECK(sa.gate_ids == sb.gate_ids);
  CHECK(sa.inversion_id == sb.inversion_id);
}

TEST_CASE("depolarizing survival matches the analytic composition") {
  // Every gate is followed by the channel that keeps the traceless block
  // with weight 1 - strength, so the exact survival probability is
  // (1 - 1/2^n) (1-s)^(m+1) + 1/2^n for any sequence.
  Rng rng(3);
  for (int n : {1, 2}) {
    const CliffordGroup group(n);
    const double strength = 0.03;
    const Superoperator noise = depolarizing_channel(n, strength);
    const double b_term = 1.0 / (1 << n);
    const double a_term = 1.0 - b_term;
    for (int m : {1, 5, 12}) {
      const SequenceRecord seq = sample_sequence(group, m, 0, rng);
      const double want = a_term * std::pow(1.0 - strength, m + 1) + b_term;
      CHECK(run_sequence(group, seq, noise) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("decay model emerges exactly from exhaustive averaging") {
  // For gate-independent noise, averaging over all gate tuples gives
  // q(m) = B + A p^m with p the noise channel's depolarizing parameter,
  // B = tr[E L(I/2)], A = tr[E L(rho)] - B. Verified here to machine
  // precision by full enumeration at m = 1, 2, 3 with coherent noise.
  const CliffordGroup group(1);
  const Superoperator noise =
      NoiseSpec::rotation(Axis::Z, 0.15).to_superoperator(1).then(
          depolarizing_channel(1, 0.02));
  const MeasurementEffect effect = MeasurementEffect::projector_zero(1);
  const QuantumState rho = QuantumState::computational_zero(1);

  const double p = noise.depolarizing_parameter();
  Eigen::VectorXd maximally_mixed = Eigen::VectorXd::Zero(4);
  maximally_mixed[0] = 1.0 / std::sqrt(2.0);
  const double B = effect.vec().dot(noise.apply(maximally_mixed));
  const double A = effect.vec().dot(noise.apply(rho.vec())) - B;

  for (int m : {1, 2, 3}) {
    const double got = exhaustive_average(group, m, noise, effect);
    const double want = A * std::pow(p, m) + B;
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("paired difference is invariant to the measurement offset") {
  // Two effects differing only in their identity component give the same
  // sequence-averaged difference: the offset cancels exactly.
  const CliffordGroup group(1);
  const Superoperator noise =
      NoiseSpec::rotation(Axis::Y, 0.2).to_superoperator(1).then(
          depolarizing_channel(1, 0.05));
  const Eigen::VectorXd base = MeasurementEffect::projector_zero(1).vec();
  Eigen::VectorXd shifted_a = 0.9 * base;
  shifted_a[0] += 0.05 * std::sqrt(2.0);
  Eigen::VectorXd shifted_b = 0.9 * base;
  shifted_b[0] += 0.02 * std::sqrt(2.0);
  const MeasurementEffect ea = MeasurementEffect::from_pauli_vector(shifted_a, 1);
  const MeasurementEffect eb = MeasurementEffect::from_pauli_vector(shifted_b, 1);

  Rng rng_a(31), rng_b(31);
  const double diff_a = exact_difference_average(group, 3, noise, ea, rng_a, 64);
  const double diff_b = exact_difference_average(group, 3, noise, eb, rng_b, 64);
  CHECK(diff_a == doctest::Approx(diff_b).epsilon(1e-12));
}

TEST_CASE("pauli expectations are exact and bounded") {
  const CliffordGroup group(1);
  const QuantumState rho = QuantumState::computational_zero(1);

  // Identity composite without noise returns the input Bloch vector.
  const std::vector<std::uint64_t> ids{group.identity_id()};
  const PauliExpectations clean =
      pauli_expectations(group, ids, Superoperator::identity(1), rho);
  CHECK(clean.values[0] == doctest::Approx(0.0));  // X
  CHECK(clean.values[1] == doctest::Approx(0.0));  // Y
  CHECK(clean.values[2] == doctest::Approx(1.0));  // Z
  CHECK(clean.trace == doctest::Approx(1.0));

  // Depolarizing noise scales the squared Bloch norm by (1-s)^(2m).
  const double strength = 0.04;
  const Superoperator noise = depolarizing_channel(1, strength);
  Rng rng(17);
  for (int m : {1, 4, 10}) {
    std::vector<std::uint64_t> gates(m);
    for (auto& id : gates) id = group.sample(rng);
    const PauliExpectations exp = pauli_expectations(group, gates, noise, rho);
    double norm2 = 0.0;
    for (double v : exp.values) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
      norm2 += v * v;
    }
    CHECK(norm2 ==
          doctest::Approx(std::pow(1.0 - strength, 2 * m)).epsilon(1e-12));
    CHECK(exp.trace == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("spread statistic decays at the channel unitarity") {
  const double strength = 0.1;
  const GateLevelSource source{1, NoiseSpec::depolarizing(strength)};
  const UnitarityDataset ds = generate_unitarity({2, 4}, 500, source, 77);
  const UnitaritySummaries s2 = unitarity_summaries(ds, 2);
  const UnitaritySummaries s4 = unitarity_summaries(ds, 4);
  const double u = std::pow(1.0 - strength, 2);
  CHECK(s2.a_trace == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s4.a_trace == doctest::Approx(1.0).epsilon(1e-12));
  const double ratio = std::sqrt(s4.b_spread / s2.b_spread);
  CHECK(ratio == doctest::Approx(u).epsilon(0.01));
  // The claimed unitarity matches the channel's definition.
  CHECK(depolarizing_channel(1, strength).unitarity() ==
        doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("invalid states and effects are rejected at construction") {
  Eigen::VectorXd too_long = Eigen::VectorXd::Zero(4);
  too_long[0] = 1.0 / std::sqrt(2.0);
  too_long[3] = 1.2;  // Bloch norm > 1: not positive semidefinite
  CHECK_THROWS_AS(QuantumState::from_pauli_vector(too_long, 1),
                  std::invalid_argument);

  Eigen::VectorXd wrong_trace = QuantumState::computational_zero(1).vec() * 2.0;
  CHECK_THROWS_AS(QuantumState::from_pauli_vector(wrong_trace, 1),
                  std::invalid_argument);

  Eigen::VectorXd over_unit = MeasurementEffect::projector_zero(1).vec();
  over_unit[0] += 0.5 * std::sqrt(2.0);  // eigenvalue above 1
  CHECK_THROWS_AS(MeasurementEffect::from_pauli_vector(over_unit, 1),
                  std::invalid_argument);

  Rng rng(1);
  CHECK_THROWS_AS(sample_sequence(CliffordGroup(1), 0, 0, rng),
                  std::invalid_argument);
}

TEST_CASE("noise specs parse, print, and compose") {
  const NoiseSpec spec = NoiseSpec::parse("depolarizing:0.02+rotation:z:0.1");
  CHECK(spec.terms.size() == 2);
  CHECK(NoiseSpec::parse(spec.to_string()).to_string() == spec.to_string());
  const Superoperator op = spec.to_superoperator(1);
  CHECK(op.is_trace_preserving());
  CHECK(op.is_unital());
  // Composition multiplies the depolarizing parameters of the factors.
  CHECK(op.unitarity() ==
        doctest::Approx(std::pow(0.98, 2)).epsilon(1e-12));
  CHECK(NoiseSpec::parse("none").to_superoperator(2).entries() ==
        Superoperator::identity(2).entries());
  CHECK_THROWS_AS(NoiseSpec::parse("sparkle:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::parse("rotation:w:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_channel(1, 1.5), std::invalid_argument);
}
