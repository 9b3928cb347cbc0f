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

#include "rbkit/clifford.hpp"

#include <bit>
#include <stdexcept>

namespace rbkit {

namespace {

int popcount8(std::uint8_t v) { return std::popcount(v); }

// Symplectic vectors over F2^(2n), encoded as x | (z << n), values in
// [0, 4^n). The symplectic product pairs x-bits against z-bits.
struct SymSpace {
  int n;
  unsigned size() const { return 1u << (2 * n); }
  unsigned x_of(unsigned v) const { return v & ((1u << n) - 1); }
  unsigned z_of(unsigned v) const { return v >> n; }
  int product(unsigned u, unsigned v) const {
    return (std::popcount(x_of(u) & z_of(v)) +
            std::popcount(z_of(u) & x_of(v))) & 1;
  }
};

// Images of the symplectic basis (x_0, z_0, ..., x_{n-1}, z_{n-1}).
using SymImages = std::array<unsigned, 4>;

// Candidate lists for each sequential choice, in ascending encoding. The
// choices are: image of x_0 (any nonzero vector), image of z_0 (symplectic
// product 1 with the first), then for two qubits the images of x_1, z_1
// restricted to the symplectic complement of the first pair.
std::vector<unsigned> candidates_a0(const SymSpace& s) {
  std::vector<unsigned> out;
  for (unsigned v = 1; v < s.size(); ++v) out.push_back(v);
  return out;
}

std::vector<unsigned> candidates_b0(const SymSpace& s, unsigned a0) {
  std::vector<unsigned> out;
  for (unsigned v = 1; v < s.size(); ++v) {
    if (s.product(a0, v) == 1) out.push_back(v);
  }
  return out;
}

std::vector<unsigned> complement(const SymSpace& s, unsigned a0, unsigned b0) {
  std::vector<unsigned> out;
  for (unsigned v = 1; v < s.size(); ++v) {
    if (s.product(a0, v) == 0 && s.product(b0, v) == 0) out.push_back(v);
  }
  return out;
}

std::vector<unsigned> candidates_b1(const SymSpace& s,
                                    const std::vector<unsigned>& comp,
                                    unsigned a1) {
  std::vector<unsigned> out;
  for (unsigned v : comp) {
    if (s.product(a1, v) == 1) out.push_back(v);
  }
  return out;
}

std::size_t index_of(const std::vector<unsigned>& values, unsigned v) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == v) return i;
  }
  throw std::invalid_argument("tableau is not symplectic");
}

SymImages decode_symplectic(std::uint64_t index, int n) {
  const SymSpace s{n};
  SymImages img{};
  if (n == 1) {
    const auto c_a0 = candidates_a0(s);
    const std::uint64_t i1 = index % 2;
    const std::uint64_t i0 = index / 2;
    img[0] = c_a0.at(i0);
    img[1] = candidates_b0(s, img[0]).at(i1);
    return img;
  }
  // Two qubits: mixed radix 15 * 8 * 3 * 2.
  const std::uint64_t i3 = index % 2;
  index /= 2;
  const std::uint64_t i2 = index % 3;
  index /= 3;
  const std::uint64_t i1 = index % 8;
  index /= 8;
  const std::uint64_t i0 = index;
  img[0] = candidates_a0(s).at(i0);
  img[1] = candidates_b0(s, img[0]).at(i1);
  const auto comp = complement(s, img[0], img[1]);
  img[2] = comp.at(i2);
  img[3] = candidates_b1(s, comp, img[2]).at(i3);
  return img;
}

std::uint64_t encode_symplectic(const SymImages& img, int n) {
  const SymSpace s{n};
  const std::uint64_t i0 = index_of(candidates_a0(s), img[0]);
  const std::uint64_t i1 = index_of(candidates_b0(s, img[0]), img[1]);
  if (n == 1) {
    return i0 * 2 + i1;
  }
  const auto comp = complement(s, img[0], img[1]);
  const std::uint64_t i2 = index_of(comp, img[2]);
  const std::uint64_t i3 = index_of(candidates_b1(s, comp, img[2]), img[3]);
  return ((i0 * 8 + i1) * 3 + i2) * 2 + i3;
}

PauliOp pauli_from_vector(unsigned v, int n, bool negative) {
  const SymSpace s{n};
  const auto x = static_cast<std::uint8_t>(s.x_of(v));
  const auto z = static_cast<std::uint8_t>(s.z_of(v));
  PauliOp op = hermitian_pauli(x, z);
  if (negative) op.phase = static_cast<std::uint8_t>((op.phase + 2) & 3);
  return op;
}

unsigned vector_from_pauli(const PauliOp& op, int n) {
  return static_cast<unsigned>(op.x) | (static_cast<unsigned>(op.z) << n);
}

bool pauli_sign_negative(const PauliOp& op) {
  const int herm = popcount8(op.x & op.z) & 3;
  const int diff = (op.phase - herm) & 3;
  if (diff == 0) return false;
  if (diff == 2) return true;
  throw std::logic_error("pauli phase is not Hermitian");
}

}  // namespace

PauliOp pauli_mul(const PauliOp& a, const PauliOp& b) {
  PauliOp out;
  out.x = a.x ^ b.x;
  out.z = a.z ^ b.z;
  out.phase = static_cast<std::uint8_t>(
      (a.phase + b.phase + 2 * popcount8(a.z & b.x)) & 3);
  return out;
}

int pauli_index(std::uint8_t x, std::uint8_t z, int n_qubits) {
  int index = 0;
  for (int q = n_qubits - 1; q >= 0; --q) {
    const int xq = (x >> q) & 1;
    const int zq = (z >> q) & 1;
    // (0,0)->I, (1,0)->X, (1,1)->Y, (0,1)->Z
    const int digit = xq == 1 ? (zq == 1 ? 2 : 1) : (zq == 1 ? 3 : 0);
    index = index * 4 + digit;
  }
  return index;
}

std::uint8_t pauli_x_mask(int index, int n_qubits) {
  std::uint8_t x = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const int digit = (index >> (2 * q)) & 3;
    if (digit == 1 || digit == 2) x |= static_cast<std::uint8_t>(1u << q);
  }
  return x;
}

std::uint8_t pauli_z_mask(int index, int n_qubits) {
  std::uint8_t z = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const int digit = (index >> (2 * q)) & 3;
    if (digit == 2 || digit == 3) z |= static_cast<std::uint8_t>(1u << q);
  }
  return z;
}

PauliOp hermitian_pauli(std::uint8_t x, std::uint8_t z) {
  return PauliOp{x, z, static_cast<std::uint8_t>(popcount8(x & z) & 3)};
}

CliffordTableau CliffordTableau::identity(int n_qubits) {
  CliffordTableau t;
  t.n_qubits = n_qubits;
  for (int q = 0; q < n_qubits; ++q) {
    t.img_x[q] = hermitian_pauli(static_cast<std::uint8_t>(1u << q), 0);
    t.img_z[q] = hermitian_pauli(0, static_cast<std::uint8_t>(1u << q));
  }
  return t;
}

CliffordTableau CliffordTableau::x_flip_all(int n_qubits) {
  CliffordTableau t = identity(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    t.img_z[q].phase = static_cast<std::uint8_t>((t.img_z[q].phase + 2) & 3);
  }
  return t;
}

PauliOp CliffordTableau::apply(const PauliOp& op) const {
  // Conjugation is a homomorphism, so the image of i^k X^x Z^z is i^k times
  // the ordered product of generator images.
  PauliOp out{0, 0, op.phase};
  for (int q = 0; q < n_qubits; ++q) {
    if ((op.x >> q) & 1) out = pauli_mul(out, img_x[q]);
  }
  for (int q = 0; q < n_qubits; ++q) {
    if ((op.z >> q) & 1) out = pauli_mul(out, img_z[q]);
  }
  return out;
}

std::pair<int, int> CliffordTableau::image_of(int index) const {
  const std::uint8_t x = pauli_x_mask(index, n_qubits);
  const std::uint8_t z = pauli_z_mask(index, n_qubits);
  const PauliOp image = apply(hermitian_pauli(x, z));
  return {pauli_index(image.x, image.z, n_qubits),
          pauli_sign_negative(image) ? -1 : 1};
}

CliffordTableau CliffordTableau::compose_after(
    const CliffordTableau& first) const {
  if (first.n_qubits != n_qubits) {
    throw std::invalid_argument("tableau qubit count mismatch");
  }
  CliffordTableau out;
  out.n_qubits = n_qubits;
  for (int q = 0; q < n_qubits; ++q) {
    out.img_x[q] = apply(first.img_x[q]);
    out.img_z[q] = apply(first.img_z[q]);
  }
  return out;
}

CliffordTableau CliffordTableau::inverse() const {
  const int dim = 1 << (2 * n_qubits);
  std::vector<int> inverse_perm(dim, 0);
  std::vector<int> sign(dim, 1);
  for (int j = 0; j < dim; ++j) {
    const auto [image, s] = image_of(j);
    inverse_perm[image] = j;
    sign[image] = s;
  }
  CliffordTableau out;
  out.n_qubits = n_qubits;
  for (int q = 0; q < n_qubits; ++q) {
    const int gx = pauli_index(static_cast<std::uint8_t>(1u << q), 0, n_qubits);
    const int gz = pauli_index(0, static_cast<std::uint8_t>(1u << q), n_qubits);
    const int jx = inverse_perm[gx];
    const int jz = inverse_perm[gz];
    out.img_x[q] = hermitian_pauli(pauli_x_mask(jx, n_qubits),
                                   pauli_z_mask(jx, n_qubits));
    if (sign[gx] < 0) {
      out.img_x[q].phase = static_cast<std::uint8_t>((out.img_x[q].phase + 2) & 3);
    }
    out.img_z[q] = hermitian_pauli(pauli_x_mask(jz, n_qubits),
                                   pauli_z_mask(jz, n_qubits));
    if (sign[gz] < 0) {
      out.img_z[q].phase = static_cast<std::uint8_t>((out.img_z[q].phase + 2) & 3);
    }
  }
  return out;
}

Superoperator CliffordTableau::to_superoperator() const {
  const int dim = 1 << (2 * n_qubits);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const auto [image, s] = image_of(j);
    m(image, j) = static_cast<double>(s);
  }
  return Superoperator(std::move(m));
}

CliffordGroup::CliffordGroup(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) {
    throw std::invalid_argument("supported qubit counts are 1 and 2");
  }
}

std::uint64_t CliffordGroup::symplectic_order() const {
  return n_qubits_ == 1 ? 6 : 720;
}

std::uint64_t CliffordGroup::order() const {
  return symplectic_order() << (2 * n_qubits_);
}

CliffordTableau CliffordGroup::tableau(std::uint64_t id) const {
  if (id >= order()) {
    throw std::invalid_argument("clifford id out of range");
  }
  const std::uint64_t signs = id & ((1u << (2 * n_qubits_)) - 1);
  const SymImages img = decode_symplectic(id >> (2 * n_qubits_), n_qubits_);
  CliffordTableau t;
  t.n_qubits = n_qubits_;
  for (int q = 0; q < n_qubits_; ++q) {
    t.img_x[q] = pauli_from_vector(img[2 * q], n_qubits_, (signs >> (2 * q)) & 1);
    t.img_z[q] =
        pauli_from_vector(img[2 * q + 1], n_qubits_, (signs >> (2 * q + 1)) & 1);
  }
  return t;
}

std::uint64_t CliffordGroup::encode(const CliffordTableau& t) const {
  if (t.n_qubits != n_qubits_) {
    throw std::invalid_argument("tableau qubit count mismatch");
  }
  SymImages img{};
  std::uint64_t signs = 0;
  for (int q = 0; q < n_qubits_; ++q) {
    img[2 * q] = vector_from_pauli(t.img_x[q], n_qubits_);
    img[2 * q + 1] = vector_from_pauli(t.img_z[q], n_qubits_);
    if (pauli_sign_negative(t.img_x[q])) signs |= 1ull << (2 * q);
    if (pauli_sign_negative(t.img_z[q])) signs |= 1ull << (2 * q + 1);
  }
  return (encode_symplectic(img, n_qubits_) << (2 * n_qubits_)) | signs;
}

std::uint64_t CliffordGroup::sample(Rng& rng) const {
  std::uniform_int_distribution<std::uint64_t> dist(0, order() - 1);
  return dist(rng);
}

std::uint64_t CliffordGroup::identity_id() const {
  return encode(CliffordTableau::identity(n_qubits_));
}

std::uint64_t CliffordGroup::inverse_id(std::uint64_t id) const {
  return encode(tableau(id).inverse());
}

std::uint64_t CliffordGroup::compose_ids(std::uint64_t later,
                                         std::uint64_t first) const {
  return encode(tableau(later).compose_after(tableau(first)));
}

std::vector<Superoperator> CliffordGroup::materialize() const {
  if (n_qubits_ != 1) {
    throw std::invalid_argument(
        "only the single-qubit group is materialized; use sample() for two "
        "qubits");
  }
  std::vector<Superoperator> out;
  out.reserve(order());
  for (std::uint64_t id = 0; id < order(); ++id) {
    out.push_back(tableau(id).to_superoperator());
  }
  return out;
}

}  // namespace rbkit
