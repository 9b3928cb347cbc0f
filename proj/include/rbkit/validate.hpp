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

#ifndef RBKIT_VALIDATE_HPP
#define RBKIT_VALIDATE_HPP

#include <optional>
#include <string>
#include <vector>

#include "rbkit/dataset.hpp"
#include "rbkit/estimate.hpp"

namespace rbkit {

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Forward prediction A_hat p_hat^m + B with first-order variance from
/// (variance_A, variance_p, cov_Ap). `conservative` drops the amplitude
/// uncertainty, keeping only the decay-parameter term.
Prediction predict_at(const Estimate& est, double B, int m,
                      bool conservative = false);

struct LengthCheck {
  int m = 0;
  double observed = 0.0;
  double predicted = 0.0;
  double std_error = 0.0;  // combined observation + prediction
  double z = 0.0;
  double p_value = 1.0;
};

struct ValidationReport {
  std::vector<LengthCheck> per_m;
  double combined_p = 1.0;
  double alpha = 0.05;
  bool reject = false;
  std::string method = "two-sided z per holdout length, Fisher combination";

  std::string to_json() const;
  std::string to_table() const;
};

/// Tests holdout lengths against the two-point fit: per-length two-sided
/// z-test of the summarized mean vs the forward prediction, combined with
/// Fisher's method; rejects the static-decay hypothesis when the combined
/// p-value drops below alpha. `known_B` selects the observation summary:
/// b = 0 means with that offset, or the paired difference when absent.
ValidationReport consistency_test(const RBDataset& ds, const Estimate& est,
                                  std::optional<double> known_B,
                                  const std::vector<int>& holdout_ms,
                                  double alpha);

}  // namespace rbkit

#endif  // RBKIT_VALIDATE_HPP
