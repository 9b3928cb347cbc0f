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

#ifndef RBKIT_CLIFFSIM_HPP
#define RBKIT_CLIFFSIM_HPP

#include <span>
#include <vector>

#include "rbkit/clifford.hpp"
#include "rbkit/rng.hpp"
#include "rbkit/superop.hpp"

namespace rbkit {

/// Complex matrix of the Hermitian Pauli with the given basis index.
Eigen::MatrixXcd pauli_matrix(int index, int n_qubits);

/// A state as a vector in the normalized Pauli basis: v_j = tr(P_j rho) / sqrt(2^n).
/// Construction rejects non-positive or non-unit-trace inputs.
class QuantumState {
 public:
  static QuantumState computational_zero(int n_qubits);
  static QuantumState from_pauli_vector(Eigen::VectorXd vec, int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const Eigen::VectorXd& vec() const { return vec_; }

 private:
  QuantumState(Eigen::VectorXd vec, int n_qubits)
      : vec_(std::move(vec)), n_qubits_(n_qubits) {}
  Eigen::VectorXd vec_;
  int n_qubits_;
};

/// A measurement effect in the same representation; requires 0 <= E <= 1.
class MeasurementEffect {
 public:
  static MeasurementEffect projector_zero(int n_qubits);
  static MeasurementEffect from_pauli_vector(Eigen::VectorXd vec, int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const Eigen::VectorXd& vec() const { return vec_; }

  double overlap(const QuantumState& state) const {
    return vec_.dot(state.vec());
  }

 private:
  MeasurementEffect(Eigen::VectorXd vec, int n_qubits)
      : vec_(std::move(vec)), n_qubits_(n_qubits) {}
  Eigen::VectorXd vec_;
  int n_qubits_;
};

/// One benchmarking sequence: m uniformly random Clifford ids plus the
/// inversion gate, computed in the ideal group, that returns the ideal
/// composite to the basis-flip X^b (the flip is merged into the inversion
/// gate, keeping the executed length at m + 1 gates).
struct SequenceRecord {
  int n_qubits = 1;
  int m = 0;
  int b = 0;
  std::vector<std::uint64_t> gate_ids;
  std::uint64_t inversion_id = 0;
};

SequenceRecord sample_sequence(const CliffordGroup& group, int m, int b,
                               Rng& rng);

/// Exact survival probability tr[E L(rho)] when every ideal gate (including
/// the inversion) is followed by the same noise channel.
double run_sequence(const CliffordGroup& group, const SequenceRecord& seq,
                    const Superoperator& noise, const QuantumState& rho,
                    const MeasurementEffect& effect);

double run_sequence(const CliffordGroup& group, const SequenceRecord& seq,
                    const Superoperator& noise);

struct PauliExpectations {
  std::vector<double> values;  // tr[P rho_final] for every P != I, basis order
  double trace = 1.0;          // tr[rho_final]; 1 for trace-preserving noise
};

/// Exact Pauli expectation values after a raw (inversion-free) noisy
/// sequence; the inputs to the unitarity and leakage statistics.
PauliExpectations pauli_expectations(const CliffordGroup& group,
                                     std::span<const std::uint64_t> gate_ids,
                                     const Superoperator& noise,
                                     const QuantumState& rho);

}  // namespace rbkit

#endif  // RBKIT_CLIFFSIM_HPP
