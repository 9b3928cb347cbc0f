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

#include "rbkit/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rbkit {

namespace {

void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(name) + " must be >= 0");
  }
}

}  // namespace

DecayParams::DecayParams(double amplitude, double offset, double decay)
    : A(amplitude), B(offset), p(decay) {
  check_unit_interval(A, "A");
  check_unit_interval(B, "B");
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must be in (0, 1]");
  }
  if (A + B > 1.0 + 1e-12) {
    throw std::invalid_argument("A + B must be <= 1");
  }
}

DecayParams DecayParams::difference(double amplitude, double decay) {
  return DecayParams(amplitude, 0.0, decay);
}

UnitarityParams::UnitarityParams(double amplitude_l, double leakage,
                                 double amplitude_u, double unitarity)
    : A_l(amplitude_l), l(leakage), A_u(amplitude_u), u(unitarity) {
  if (!(l > 0.0 && l <= 1.0) || !(u > 0.0 && u <= 1.0)) {
    throw std::invalid_argument("l and u must be in (0, 1]");
  }
  if (!(A_l >= 0.0 && A_l <= 1.0) || !(A_u >= 0.0 && A_u <= 1.0)) {
    throw std::invalid_argument("A_l and A_u must be in [0, 1]");
  }
}

double eval_decay(const DecayParams& params, int m) {
  if (m < 0) {
    throw std::invalid_argument("sequence length must be non-negative");
  }
  return params.A * std::pow(params.p, m) + params.B;
}

double eval_difference(const DecayParams& params, int m) {
  if (m < 0) {
    throw std::invalid_argument("sequence length must be non-negative");
  }
  return params.A * std::pow(params.p, m);
}

std::pair<double, double> eval_unitarity_pair(const UnitarityParams& params,
                                              int m) {
  if (m < 0) {
    throw std::invalid_argument("sequence length must be non-negative");
  }
  return {params.A_l * std::pow(params.l, m),
          params.A_u * std::pow(params.u, m)};
}

double povm_offset(int k) {
  if (k < 1) {
    throw std::invalid_argument("povm_offset: k must be >= 1");
  }
  return 1.0 / static_cast<double>(k);
}

}  // namespace rbkit
