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

#include "rbkit/adaptive.hpp"

#include <cmath>

#include <json.hpp>

#include "rbkit/cliffsim.hpp"
#include "rbkit/errors.hpp"

namespace rbkit {

AnalyticShotOracle::AnalyticShotOracle(DecayParams difference_params)
    : params_(difference_params) {
  if (!params_.is_difference_mode()) {
    throw std::invalid_argument(
        "analytic shot oracle needs difference-mode parameters (B = 0)");
  }
}

double AnalyticShotOracle::estimate_q(int m, std::int64_t t, Rng& rng) {
  const double q = eval_difference(params_, m);
  std::binomial_distribution<std::int64_t> dist(t, q);
  return static_cast<double>(dist(rng)) / static_cast<double>(t);
}

struct GateLevelShotOracle::Impl {
  CliffordGroup group;
  Superoperator noise;
  QuantumState rho;
  MeasurementEffect effect;
  double offset;

  Impl(int n_qubits, const NoiseSpec& spec)
      : group(n_qubits),
        noise(spec.to_superoperator(n_qubits)),
        rho(QuantumState::computational_zero(n_qubits)),
        effect(MeasurementEffect::projector_zero(n_qubits)),
        offset(povm_offset(1 << n_qubits)) {}
};

GateLevelShotOracle::GateLevelShotOracle(int n_qubits, NoiseSpec noise)
    : impl_(std::make_shared<Impl>(n_qubits, noise)) {}

double GateLevelShotOracle::estimate_q(int m, std::int64_t t, Rng& rng) {
  const SequenceRecord seq = sample_sequence(impl_->group, m, 0, rng);
  const double q =
      run_sequence(impl_->group, seq, impl_->noise, impl_->rho, impl_->effect);
  std::binomial_distribution<std::int64_t> dist(t, std::clamp(q, 0.0, 1.0));
  return static_cast<double>(dist(rng)) / static_cast<double>(t) -
         impl_->offset;
}

ReplayShotOracle::ReplayShotOracle(RBDataset dataset, double known_B)
    : dataset_(std::move(dataset)), known_B_(known_B) {
  cursor_.assign(dataset_.points.size(), 0);
}

double ReplayShotOracle::estimate_q(int m, std::int64_t t, Rng&) {
  for (std::size_t i = 0; i < dataset_.points.size(); ++i) {
    const RBPoint& pt = dataset_.points[i];
    if (pt.m != m || pt.b != 0) continue;
    std::int64_t successes = 0;
    for (std::int64_t used = 0; used < t; ++used) {
      if (cursor_[i] >= pt.sequences.size()) {
        throw DataError("replay oracle ran out of shots at m=" +
                        std::to_string(m));
      }
      const SequenceCounts& seq = pt.sequences[cursor_[i]++];
      if (seq.n != 1) {
        throw DataError("replay oracle needs single-shot data");
      }
      successes += seq.successes;
    }
    return static_cast<double>(successes) / static_cast<double>(t) - known_B_;
  }
  throw DataError("replay oracle has no data at m=" + std::to_string(m));
}

std::int64_t required_shots(double epsilon, double delta, int ell_bound,
                            double ap_lower) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) ||
      ell_bound < 1 || !(ap_lower > 0.0 && ap_lower <= 1.0)) {
    throw std::invalid_argument("required_shots: arguments out of range");
  }
  const double c = 2.0 / (ap_lower * ap_lower);
  const double t =
      c / (epsilon * epsilon) * std::log(2.0 * ell_bound / delta);
  return static_cast<std::int64_t>(std::ceil(t));
}

bool check_pm_window(double p, std::int64_t m, double epsilon) {
  const double pm = std::pow(p, static_cast<double>(m));
  const double lo = (1.0 - 4.0 * epsilon) * (1.0 - 4.0 * epsilon) / 9.0;
  const double hi = (1.0 + 4.0 * epsilon) / 3.0;
  return pm > lo && pm <= hi;
}

AdaptiveResult run_adaptive(ShotOracle& oracle, const AdaptiveConfig& config,
                            Rng& rng) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0 / 16.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1/16)");
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("delta must be in (0, 1)");
  }
  if (config.max_doublings < 1 || config.max_doublings > 62) {
    throw std::invalid_argument("max_doublings must be in [1, 62]");
  }
  const std::int64_t t =
      config.t > 0 ? config.t
                   : required_shots(config.epsilon, config.delta,
                                    config.max_doublings, config.ap_lower);

  AdaptiveResult result;
  int i = 1;
  std::int64_t m_i = 1;
  const double q1 = oracle.estimate_q(1, t, rng);
  result.total_shots = t;
  result.trace.push_back({i, m_i, t, q1});
  if (q1 <= 0.0) {
    throw NumericError("first estimate is non-positive; cannot form ratios");
  }

  double q_i = q1;
  while (q_i > q1 / 3.0) {
    ++i;
    if (i > config.max_doublings) {
      throw NumericError(
          "doubling cap reached without exit; decay too slow for the cap");
    }
    m_i = (std::int64_t{1} << i) + 1;
    q_i = oracle.estimate_q(static_cast<int>(m_i), t, rng);
    result.total_shots += t;
    result.trace.push_back({i, m_i, t, q_i});
  }

  result.ell = i;
  result.m = std::int64_t{1} << i;
  const double ratio = q_i / q1;
  result.p_hat =
      ratio > 0.0
          ? std::pow(ratio, 1.0 / static_cast<double>(result.m))
          : 0.0;
  result.r_hat = 1.0 - result.p_hat;
  return result;
}

std::string AdaptiveResult::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "rb-adaptive/1";
  j["p_hat"] = p_hat;
  j["r_hat"] = r_hat;
  j["ell"] = ell;
  j["m"] = m;
  j["total_shots"] = total_shots;
  j["trace"] = nlohmann::ordered_json::array();
  for (const auto& row : trace) {
    j["trace"].push_back(
        {{"i", row.i}, {"m_i", row.m_i}, {"t", row.t}, {"q_hat", row.q_hat}});
  }
  return j.dump(2) + "\n";
}

}  // namespace rbkit
