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

#include "rbkit/cliffsim.hpp"

#include <cmath>
#include <stdexcept>

namespace rbkit {

namespace {

constexpr double kPhysicalityTol = 1e-9;

Eigen::MatrixXcd single_pauli(int digit) {
  Eigen::MatrixXcd m(2, 2);
  const std::complex<double> i(0.0, 1.0);
  switch (digit) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd density_from_pauli_vec(const Eigen::VectorXd& vec, int n) {
  const int hilbert = 1 << n;
  const double norm = std::sqrt(static_cast<double>(hilbert));
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(hilbert, hilbert);
  for (int j = 0; j < vec.size(); ++j) {
    op += (vec[j] / norm) * pauli_matrix(j, n);
  }
  return op;
}

int expected_dim(int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) {
    throw std::invalid_argument("supported qubit counts are 1 and 2");
  }
  return 1 << (2 * n_qubits);
}

Eigen::VectorXd computational_zero_vec(int n) {
  // tr(P|0..0><0..0|) = 1 exactly when P is a tensor of I and Z factors.
  const int dim = expected_dim(n);
  const double norm = std::sqrt(static_cast<double>(1 << n));
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < dim; ++j) {
    bool iz_only = true;
    for (int q = 0; q < n; ++q) {
      const int digit = (j >> (2 * q)) & 3;
      if (digit == 1 || digit == 2) iz_only = false;
    }
    if (iz_only) vec[j] = 1.0 / norm;
  }
  return vec;
}

}  // namespace

Eigen::MatrixXcd pauli_matrix(int index, int n_qubits) {
  expected_dim(n_qubits);
  Eigen::MatrixXcd m = single_pauli(index & 3);
  for (int q = 1; q < n_qubits; ++q) {
    const Eigen::MatrixXcd factor = single_pauli((index >> (2 * q)) & 3);
    // qubit 0 fastest in the basis index; slower qubits tensor on the left
    Eigen::MatrixXcd out(m.rows() * 2, m.cols() * 2);
    out.block(0, 0, m.rows(), m.cols()) = factor(0, 0) * m;
    out.block(0, m.cols(), m.rows(), m.cols()) = factor(0, 1) * m;
    out.block(m.rows(), 0, m.rows(), m.cols()) = factor(1, 0) * m;
    out.block(m.rows(), m.cols(), m.rows(), m.cols()) = factor(1, 1) * m;
    m = std::move(out);
  }
  return m;
}

QuantumState QuantumState::computational_zero(int n_qubits) {
  return QuantumState(computational_zero_vec(n_qubits), n_qubits);
}

QuantumState QuantumState::from_pauli_vector(Eigen::VectorXd vec,
                                             int n_qubits) {
  if (vec.size() != expected_dim(n_qubits)) {
    throw std::invalid_argument("pauli vector dimension mismatch");
  }
  const Eigen::MatrixXcd rho = density_from_pauli_vec(vec, n_qubits);
  if (std::abs(rho.trace().real() - 1.0) > kPhysicalityTol) {
    throw std::invalid_argument("state must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  if (solver.eigenvalues().minCoeff() < -kPhysicalityTol) {
    throw std::invalid_argument("state must be positive semidefinite");
  }
  return QuantumState(std::move(vec), n_qubits);
}

MeasurementEffect MeasurementEffect::projector_zero(int n_qubits) {
  return MeasurementEffect(computational_zero_vec(n_qubits), n_qubits);
}

MeasurementEffect MeasurementEffect::from_pauli_vector(Eigen::VectorXd vec,
                                                       int n_qubits) {
  if (vec.size() != expected_dim(n_qubits)) {
    throw std::invalid_argument("pauli vector dimension mismatch");
  }
  const Eigen::MatrixXcd e = density_from_pauli_vec(vec, n_qubits);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e);
  if (solver.eigenvalues().minCoeff() < -kPhysicalityTol ||
      solver.eigenvalues().maxCoeff() > 1.0 + kPhysicalityTol) {
    throw std::invalid_argument("effect eigenvalues must lie in [0, 1]");
  }
  return MeasurementEffect(std::move(vec), n_qubits);
}

SequenceRecord sample_sequence(const CliffordGroup& group, int m, int b,
                               Rng& rng) {
  if (m < 1) {
    throw std::invalid_argument("sequence length must be >= 1");
  }
  if (b != 0 && b != 1) {
    throw std::invalid_argument("compiled bit must be 0 or 1");
  }
  SequenceRecord seq;
  seq.n_qubits = group.n_qubits();
  seq.m = m;
  seq.b = b;
  seq.gate_ids.reserve(m);
  CliffordTableau composite = CliffordTableau::identity(group.n_qubits());
  for (int i = 0; i < m; ++i) {
    const std::uint64_t id = group.sample(rng);
    seq.gate_ids.push_back(id);
    composite = group.tableau(id).compose_after(composite);
  }
  CliffordTableau inversion = composite.inverse();
  if (b == 1) {
    inversion =
        CliffordTableau::x_flip_all(group.n_qubits()).compose_after(inversion);
  }
  seq.inversion_id = group.encode(inversion);
  return seq;
}

double run_sequence(const CliffordGroup& group, const SequenceRecord& seq,
                    const Superoperator& noise, const QuantumState& rho,
                    const MeasurementEffect& effect) {
  if (seq.n_qubits != group.n_qubits() ||
      rho.n_qubits() != group.n_qubits() ||
      effect.n_qubits() != group.n_qubits()) {
    throw std::invalid_argument("qubit count mismatch");
  }
  Eigen::VectorXd state = rho.vec();
  for (const std::uint64_t id : seq.gate_ids) {
    state = noise.apply(group.tableau(id).to_superoperator().apply(state));
  }
  state =
      noise.apply(group.tableau(seq.inversion_id).to_superoperator().apply(state));
  return effect.vec().dot(state);
}

double run_sequence(const CliffordGroup& group, const SequenceRecord& seq,
                    const Superoperator& noise) {
  return run_sequence(group, seq, noise,
                      QuantumState::computational_zero(group.n_qubits()),
                      MeasurementEffect::projector_zero(group.n_qubits()));
}

PauliExpectations pauli_expectations(const CliffordGroup& group,
                                     std::span<const std::uint64_t> gate_ids,
                                     const Superoperator& noise,
                                     const QuantumState& rho) {
  if (rho.n_qubits() != group.n_qubits()) {
    throw std::invalid_argument("qubit count mismatch");
  }
  Eigen::VectorXd state = rho.vec();
  for (const std::uint64_t id : gate_ids) {
    state = noise.apply(group.tableau(id).to_superoperator().apply(state));
  }
  const double norm = std::sqrt(static_cast<double>(1 << group.n_qubits()));
  PauliExpectations out;
  out.trace = norm * state[0];
  out.values.reserve(state.size() - 1);
  for (int j = 1; j < state.size(); ++j) {
    out.values.push_back(norm * state[j]);
  }
  return out;
}

}  // namespace rbkit
