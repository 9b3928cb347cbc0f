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

#ifndef RBKIT_MODEL_HPP
#define RBKIT_MODEL_HPP

#include <utility>

namespace rbkit {

/// Parameters of the single-exponential survival model  q(m) = A p^m + B.
///
/// A and B absorb state-preparation and measurement errors; p is the decay
/// parameter of interest and r = 1 - p the corresponding error rate.
/// Invariants: 0 < p <= 1, A >= 0, B >= 0, A + B <= 1, so the model value is
/// a probability for every m >= 0. With B = 0 ("difference mode", the offset
/// eliminated by pairing sequences with an orthogonal-outcome twin) A lies in
/// [0, 1] and the model value is the expected difference of the paired means.
struct DecayParams {
  double A = 1.0;
  double B = 0.0;
  double p = 1.0;

  DecayParams() = default;
  DecayParams(double amplitude, double offset, double decay);

  /// Difference-mode parameters (B = 0).
  static DecayParams difference(double amplitude, double decay);

  double r() const { return 1.0 - p; }
  bool is_difference_mode() const { return B == 0.0; }
};

/// Parameters of the paired leakage/unitarity decays
///   a(m) = A_l l^m,   b(m) = A_u u^m.
struct UnitarityParams {
  double A_l = 1.0;
  double l = 1.0;
  double A_u = 1.0;
  double u = 1.0;

  UnitarityParams() = default;
  UnitarityParams(double amplitude_l, double leakage, double amplitude_u,
                  double unitarity);
};

/// A p^m + B. Total on valid params; the invariants keep the value in [0, 1].
double eval_decay(const DecayParams& params, int m);

/// A p^m, the offset-free difference model. Ignores B.
double eval_difference(const DecayParams& params, int m);

/// (A_l l^m, A_u u^m): the means of the leakage and unitarity statistics.
std::pair<double, double> eval_unitarity_pair(const UnitarityParams& params,
                                              int m);

/// Known offset when averaging over a k-outcome measurement with the
/// corresponding basis-permuting gates compiled into the sequence: B = 1/k.
double povm_offset(int k);

}  // namespace rbkit

#endif  // RBKIT_MODEL_HPP
