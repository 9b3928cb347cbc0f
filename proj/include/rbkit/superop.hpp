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

#ifndef RBKIT_SUPEROP_HPP
#define RBKIT_SUPEROP_HPP

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

namespace rbkit {

/// Real transfer matrix of a channel in the normalized Pauli basis,
/// dimension 4^n x 4^n for n in {1, 2}. Entry (i, j) = tr[P_i L(P_j)] / 2^n.
/// Composition is matrix multiplication; the identity map is the identity
/// matrix; trace preservation is "first row equals e_1".
class Superoperator {
 public:
  Superoperator() = default;
  explicit Superoperator(Eigen::MatrixXd entries);

  static Superoperator identity(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  bool is_trace_preserving(double tol = 1e-12) const;
  bool is_unital(double tol = 1e-12) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& pauli_vec) const;
  Superoperator then(const Superoperator& later) const;

  /// Average over uniform conjugation by Pauli-basis permutations of the
  /// traceless block: (tr R - 1) / (4^n - 1). For a channel this is the
  /// decay parameter that emerges from random-sequence averaging.
  double depolarizing_parameter() const;

  /// (sum of squares of the traceless block) / (4^n - 1); the unitarity of
  /// the channel.
  double unitarity() const;

 private:
  int n_qubits_ = 0;
  Eigen::MatrixXd entries_;
};

Superoperator depolarizing_channel(int n_qubits, double strength);

enum class Axis { X, Y, Z };

/// Same single-qubit Bloch rotation applied to every qubit.
Superoperator rotation_channel(int n_qubits, Axis axis, double angle);

/// Declarative description of the noise applied after every ideal gate.
struct NoiseSpec {
  struct Depolarizing {
    double strength = 0.0;  // in [0, 1]; retained component is 1 - strength
  };
  struct Rotation {
    Axis axis = Axis::Z;
    double angle = 0.0;
  };
  using Term = std::variant<Depolarizing, Rotation>;

  std::vector<Term> terms;  // applied in order; empty list = identity

  static NoiseSpec depolarizing(double strength);
  static NoiseSpec rotation(Axis axis, double angle);

  /// Parses "none", "depolarizing:0.02", "rotation:z:0.05", or a
  /// '+'-separated composition of those.
  static NoiseSpec parse(const std::string& text);

  std::string to_string() const;
  Superoperator to_superoperator(int n_qubits) const;
};

}  // namespace rbkit

#endif  // RBKIT_SUPEROP_HPP
