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

#ifndef RBKIT_CLIFFORD_HPP
#define RBKIT_CLIFFORD_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "rbkit/rng.hpp"
#include "rbkit/superop.hpp"

namespace rbkit {

/// A Pauli operator written as i^phase * X^x Z^z with x, z bit masks over
/// qubits (bit q = qubit q) and phase mod 4.
struct PauliOp {
  std::uint8_t x = 0;
  std::uint8_t z = 0;
  std::uint8_t phase = 0;

  friend bool operator==(const PauliOp&, const PauliOp&) = default;
};

/// (i^ka X^xa Z^za)(i^kb X^xb Z^zb) = i^(ka+kb+2|za&xb|) X^(xa^xb) Z^(za^zb).
PauliOp pauli_mul(const PauliOp& a, const PauliOp& b);

/// Index of the Hermitian Pauli with bit masks (x, z) in the tensor basis
/// ordered (I, X, Y, Z) per qubit, qubit 0 fastest.
int pauli_index(std::uint8_t x, std::uint8_t z, int n_qubits);
std::uint8_t pauli_x_mask(int index, int n_qubits);
std::uint8_t pauli_z_mask(int index, int n_qubits);

/// Hermitian representative: P_(x,z) = i^|x&z| X^x Z^z.
PauliOp hermitian_pauli(std::uint8_t x, std::uint8_t z);

/// A Clifford unitary, stored as the images of the generator Paulis:
/// X_q -> imgX[q], Z_q -> imgZ[q] (each a Hermitian Pauli with sign).
struct CliffordTableau {
  int n_qubits = 1;
  std::array<PauliOp, 2> img_x{};  // entries [0, n_qubits) used
  std::array<PauliOp, 2> img_z{};

  static CliffordTableau identity(int n_qubits);

  /// Flips every computational basis state: X_q -> X_q, Z_q -> -Z_q.
  static CliffordTableau x_flip_all(int n_qubits);

  /// Image of an arbitrary Pauli word under conjugation.
  PauliOp apply(const PauliOp& op) const;

  /// Image of Hermitian Pauli #index: returns (output index, sign).
  std::pair<int, int> image_of(int index) const;

  /// this after `first` (i.e. the unitary product U_this U_first).
  CliffordTableau compose_after(const CliffordTableau& first) const;

  CliffordTableau inverse() const;

  /// Transfer-matrix representation: a signed permutation of the Pauli basis.
  Superoperator to_superoperator() const;

  friend bool operator==(const CliffordTableau&, const CliffordTableau&) = default;
};

/// The n-qubit Clifford group (n in {1, 2}) indexed by a bijection
/// id <-> (symplectic matrix, generator sign bits):
///
///   id = symplectic_index * 4^n + sign_bits
///
/// The symplectic index enumerates Sp(2n, 2) by the choices made when
/// picking images of the symplectic basis pairs one pair at a time, each
/// fiber listed in ascending vector encoding. Order: 6 * 4 = 24 for one
/// qubit, 720 * 16 = 11520 for two. Uniform ids give uniform group elements,
/// so sampling never materializes the group; the 24-element single-qubit
/// table can be materialized on request.
class CliffordGroup {
 public:
  explicit CliffordGroup(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t order() const;
  std::uint64_t symplectic_order() const;

  CliffordTableau tableau(std::uint64_t id) const;
  std::uint64_t encode(const CliffordTableau& t) const;
  std::uint64_t sample(Rng& rng) const;

  std::uint64_t identity_id() const;
  std::uint64_t inverse_id(std::uint64_t id) const;
  std::uint64_t compose_ids(std::uint64_t later, std::uint64_t first) const;

  /// All group elements as superoperators; single-qubit group only.
  std::vector<Superoperator> materialize() const;

 private:
  int n_qubits_;
};

}  // namespace rbkit

#endif  // RBKIT_CLIFFORD_HPP
