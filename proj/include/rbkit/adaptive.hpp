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

#ifndef RBKIT_ADAPTIVE_HPP
#define RBKIT_ADAPTIVE_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "rbkit/dataset.hpp"
#include "rbkit/model.hpp"
#include "rbkit/rng.hpp"
#include "rbkit/superop.hpp"

namespace rbkit {

/// Source of offset-free single-shot survival data: `estimate_q` returns the
/// mean of t fresh 0/1 outcomes whose expectation is q(m) = A p^m (any known
/// offset is subtracted inside the adapter). Repeat calls are independent
/// given independent RNG streams.
class ShotOracle {
 public:
  virtual ~ShotOracle() = default;
  virtual double estimate_q(int m, std::int64_t t, Rng& rng) = 0;
};

/// Bernoulli(A p^m) sampling from difference-mode decay parameters (B = 0).
class AnalyticShotOracle final : public ShotOracle {
 public:
  explicit AnalyticShotOracle(DecayParams difference_params);
  double estimate_q(int m, std::int64_t t, Rng& rng) override;

 private:
  DecayParams params_;
};

/// Gate-level sampling: one fresh random sequence per call, t shots against
/// its exact survival probability, then subtraction of the known offset
/// tr[E] / 2^n. With unital noise and ideal SPAM the resulting mean is
/// exactly of the form A p^m.
class GateLevelShotOracle final : public ShotOracle {
 public:
  GateLevelShotOracle(int n_qubits, NoiseSpec noise);
  double estimate_q(int m, std::int64_t t, Rng& rng) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Replays recorded single-shot b = 0 outcomes from a dataset generated
/// offset-free; errors when the dataset lacks the requested length or runs
/// out of unconsumed shots.
class ReplayShotOracle final : public ShotOracle {
 public:
  explicit ReplayShotOracle(RBDataset dataset, double known_B = 0.0);
  double estimate_q(int m, std::int64_t t, Rng& rng) override;

 private:
  RBDataset dataset_;
  double known_B_;
  std::vector<std::size_t> cursor_;
};

struct AdaptiveConfig {
  double epsilon = 0.05;      // target relative precision, < 1/16
  double delta = 0.1;         // failure probability
  std::int64_t t = 0;         // shots per estimate; 0 = from required_shots
  int max_doublings = 40;     // safety cap on the doubling index
  double ap_lower = 0.25;     // assumed lower bound on A p for the shot rule
};

struct AdaptiveTraceRow {
  int i = 0;
  std::int64_t m_i = 0;
  std::int64_t t = 0;
  double q_hat = 0.0;
};

struct AdaptiveResult {
  double p_hat = 1.0;
  double r_hat = 0.0;
  int ell = 0;                  // doubling count
  std::int64_t m = 1;           // 2^ell, the ratio exponent
  std::int64_t total_shots = 0;
  std::vector<AdaptiveTraceRow> trace;

  std::string to_json() const;
};

/// Shots per estimate guaranteeing every one of up to ell_bound estimates
/// stays within its error band with probability >= 1 - delta:
/// ceil( (2 / ap_lower^2) eps^-2 log(2 ell_bound / delta) ). The constant is
/// a conservative two-sided Chernoff-Hoeffding choice.
std::int64_t required_shots(double epsilon, double delta, int ell_bound,
                            double ap_lower = 0.25);

/// (1 - 4 eps)^2 / 9 < p^m <= (1 + 4 eps) / 3: the window the final length
/// lands in when the doubling loop exits under in-band estimates.
bool check_pm_window(double p, std::int64_t m, double epsilon);

/// The self-terminating doubling estimator: estimate q at m = 1, then at
/// m_i = 2^i + 1 while the estimate stays above a third of the first one;
/// on exit return p_hat = (q_ell / q_1)^(1 / 2^ell).
AdaptiveResult run_adaptive(ShotOracle& oracle, const AdaptiveConfig& config,
                            Rng& rng);

}  // namespace rbkit

#endif  // RBKIT_ADAPTIVE_HPP
