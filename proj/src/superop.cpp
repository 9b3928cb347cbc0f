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

#include "rbkit/superop.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rbkit {

namespace {

int qubits_from_dim(Eigen::Index dim) {
  if (dim == 4) return 1;
  if (dim == 16) return 2;
  throw std::invalid_argument("superoperator dimension must be 4 or 16");
}

Eigen::MatrixXd bloch_rotation(Axis axis, double angle) {
  // 4x4 transfer matrix of a single-qubit rotation about the given axis.
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(4, 4);
  // Basis order (I, X, Y, Z); rotate the pair of axes complementary to the
  // rotation axis.
  int a = 0, b = 0;
  switch (axis) {
    case Axis::X: a = 2; b = 3; break;  // rotates (Y, Z)
    case Axis::Y: a = 3; b = 1; break;  // rotates (Z, X)
    case Axis::Z: a = 1; b = 2; break;  // rotates (X, Y)
  }
  r(a, a) = c;
  r(b, b) = c;
  r(b, a) = s;
  r(a, b) = -s;
  return r;
}

}  // namespace

Superoperator::Superoperator(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("superoperator must be square");
  }
  n_qubits_ = qubits_from_dim(entries_.rows());
}

Superoperator Superoperator::identity(int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) {
    throw std::invalid_argument("supported qubit counts are 1 and 2");
  }
  const int d = n_qubits == 1 ? 4 : 16;
  return Superoperator(Eigen::MatrixXd::Identity(d, d));
}

bool Superoperator::is_trace_preserving(double tol) const {
  for (int j = 0; j < dim(); ++j) {
    const double want = j == 0 ? 1.0 : 0.0;
    if (std::abs(entries_(0, j) - want) > tol) return false;
  }
  return true;
}

bool Superoperator::is_unital(double tol) const {
  for (int i = 0; i < dim(); ++i) {
    const double want = i == 0 ? 1.0 : 0.0;
    if (std::abs(entries_(i, 0) - want) > tol) return false;
  }
  return true;
}

Eigen::VectorXd Superoperator::apply(const Eigen::VectorXd& pauli_vec) const {
  if (pauli_vec.size() != dim()) {
    throw std::invalid_argument("pauli vector dimension mismatch");
  }
  return entries_ * pauli_vec;
}

Superoperator Superoperator::then(const Superoperator& later) const {
  if (later.dim() != dim()) {
    throw std::invalid_argument("superoperator dimension mismatch");
  }
  return Superoperator(later.entries_ * entries_);
}

double Superoperator::depolarizing_parameter() const {
  return (entries_.trace() - 1.0) / static_cast<double>(dim() - 1);
}

double Superoperator::unitarity() const {
  const auto block = entries_.bottomRightCorner(dim() - 1, dim() - 1);
  return block.squaredNorm() / static_cast<double>(dim() - 1);
}

Superoperator depolarizing_channel(int n_qubits, double strength) {
  if (!(strength >= 0.0 && strength <= 1.0)) {
    throw std::invalid_argument("depolarizing strength must be in [0, 1]");
  }
  Eigen::MatrixXd m = Superoperator::identity(n_qubits).entries();
  for (int i = 1; i < m.rows(); ++i) {
    m(i, i) = 1.0 - strength;
  }
  return Superoperator(std::move(m));
}

Superoperator rotation_channel(int n_qubits, Axis axis, double angle) {
  const Eigen::MatrixXd r1 = bloch_rotation(axis, angle);
  if (n_qubits == 1) {
    return Superoperator(r1);
  }
  if (n_qubits != 2) {
    throw std::invalid_argument("supported qubit counts are 1 and 2");
  }
  // Pauli index = d0 + 4*d1 (qubit 0 fastest).
  Eigen::MatrixXd r2(16, 16);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      r2(i, j) = r1(i % 4, j % 4) * r1(i / 4, j / 4);
    }
  }
  return Superoperator(std::move(r2));
}

NoiseSpec NoiseSpec::depolarizing(double strength) {
  NoiseSpec spec;
  spec.terms.push_back(Depolarizing{strength});
  return spec;
}

NoiseSpec NoiseSpec::rotation(Axis axis, double angle) {
  NoiseSpec spec;
  spec.terms.push_back(Rotation{axis, angle});
  return spec;
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
  NoiseSpec spec;
  if (text.empty() || text == "none") {
    return spec;
  }
  std::stringstream ss(text);
  std::string term;
  while (std::getline(ss, term, '+')) {
    std::stringstream ts(term);
    std::string kind;
    std::getline(ts, kind, ':');
    if (kind == "depolarizing") {
      std::string value;
      if (!std::getline(ts, value)) {
        throw std::invalid_argument("depolarizing noise needs a strength");
      }
      spec.terms.push_back(Depolarizing{std::stod(value)});
    } else if (kind == "rotation") {
      std::string axis, value;
      if (!std::getline(ts, axis, ':') || !std::getline(ts, value)) {
        throw std::invalid_argument("rotation noise needs axis and angle");
      }
      Axis a;
      if (axis == "x") a = Axis::X;
      else if (axis == "y") a = Axis::Y;
      else if (axis == "z") a = Axis::Z;
      else throw std::invalid_argument("rotation axis must be x, y, or z");
      spec.terms.push_back(Rotation{a, std::stod(value)});
    } else {
      throw std::invalid_argument("unknown noise kind: " + kind);
    }
  }
  return spec;
}

std::string NoiseSpec::to_string() const {
  if (terms.empty()) return "none";
  std::ostringstream out;
  bool first = true;
  for (const auto& term : terms) {
    if (!first) out << "+";
    first = false;
    if (const auto* d = std::get_if<Depolarizing>(&term)) {
      out << "depolarizing:" << d->strength;
    } else {
      const auto& r = std::get<Rotation>(term);
      out << "rotation:" << (r.axis == Axis::X ? "x" : r.axis == Axis::Y ? "y" : "z")
          << ":" << r.angle;
    }
  }
  return out.str();
}

Superoperator NoiseSpec::to_superoperator(int n_qubits) const {
  Superoperator acc = Superoperator::identity(n_qubits);
  for (const auto& term : terms) {
    if (const auto* d = std::get_if<Depolarizing>(&term)) {
      acc = acc.then(depolarizing_channel(n_qubits, d->strength));
    } else {
      const auto& r = std::get<Rotation>(term);
      acc = acc.then(rotation_channel(n_qubits, r.axis, r.angle));
    }
  }
  return acc;
}

}  // namespace rbkit
