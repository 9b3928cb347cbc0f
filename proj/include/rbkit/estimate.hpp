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

#ifndef RBKIT_ESTIMATE_HPP
#define RBKIT_ESTIMATE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "rbkit/dataset.hpp"

namespace rbkit {

inline constexpr double kDefaultTruncation = 1e-6;

/// Everything the two-point ratio estimators consume: the summarized means
/// q_j at lengths m1 < m2, the variances v_j OF THOSE MEANS, the known
/// offset B (0 in difference mode), and the sequence counts.
struct TwoPointSummary {
  int m1 = 0;
  int m2 = 0;
  double q1 = 0.0;
  double q2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double B = 0.0;
  int k1 = 0;  // 0 = unknown
  int k2 = 0;

  int delta_m() const { return m2 - m1; }
};

enum class BiasCorrection { Auto, On, Off };

struct EstimateFlags {
  bool truncated_m1 = false;
  bool truncated_m2 = false;
  bool bias_corrected = false;
  bool clamped_p = false;
  bool degenerate_interval = false;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 1.0;
  double coverage = 0.0;
  std::string method = "none";
};

struct Estimate {
  double p_hat = 1.0;
  double r_hat = 0.0;
  double A_hat = 1.0;
  double variance_p = 0.0;
  double variance_A = 0.0;
  double cov_Ap = 0.0;
  ConfidenceInterval interval;
  EstimateFlags flags;
  int m1 = 0;
  int m2 = 0;
  double B = 0.0;

  std::string to_json() const;
};

/// Two-point ratio estimate of (A, p): with x_j = max(q_j - B, delta_trunc),
///   p_hat = (x2 / x1)^(1/dm),  A_hat = x1^(m2/dm) x2^(-m1/dm).
/// Bias correction replaces each power x^a by x^a - a(a-1)/2 x^(a-2) v
/// (plug-in second-order correction); Auto turns it on when min(k1, k2) is
/// known and below 50. The attached interval is the distribution-free
/// 3-sigma-of-the-means band with guaranteed coverage >= 8/9.
Estimate ratio_estimate(const TwoPointSummary& s,
                        double delta_trunc = kDefaultTruncation,
                        BiasCorrection bias = BiasCorrection::Auto);

/// First-order variance of p_hat from the variances of the two means.
double propagate_variance(const TwoPointSummary& s,
                          double delta_trunc = kDefaultTruncation);

/// Half-width (k_cheb / dm) sqrt(var_q_sum); with k_cheb = 3 the interval
/// p_hat +/- halfwidth covers with probability at least 8/9 by Chebyshev.
double chebyshev_halfwidth(double var_q_sum, int delta_m, double k_cheb = 3.0);

/// Single-shot (one measurement per sequence) counts at the two lengths.
struct ArbCounts {
  int m1 = 0, m2 = 0;
  std::int64_t k1 = 0, s1 = 0;
  std::int64_t k2 = 0, s2 = 0;
};

/// Single-shot counts per branch for offset-eliminated estimation.
struct ArbDifferenceCounts {
  int m1 = 0, m2 = 0;
  std::int64_t k1 = 0, s1_b0 = 0, s1_b1 = 0;
  std::int64_t k2 = 0, s2_b0 = 0, s2_b1 = 0;
};

/// Log-normal-approximation estimate and credible interval for single-shot
/// data with known offset B: log p_hat is treated as normal with variance
/// sigma^2 / dm^2, sigma^2 = sum_j q_j(1-q_j) / (k_j (q_j - B)^2).
Estimate lognormal_interval(const ArbCounts& counts, double B, double coverage,
                            double delta_trunc = kDefaultTruncation);

/// Same under the offset-eliminated pairing; the variance plugs in the
/// two-branch binomial variance of each difference.
Estimate lognormal_interval(const ArbDifferenceCounts& counts, double coverage,
                            double delta_trunc = kDefaultTruncation);

struct UnitarityEstimate {
  double l_hat = 1.0;
  double u_hat = 1.0;
  double A_l_hat = 1.0;
  double A_u_hat = 1.0;
  bool truncated = false;
};

/// Independent ratio estimates of the leakage and unitarity decays from
/// summaries at two lengths (offset-free models, so B = 0 throughout).
/// Non-positive summaries are truncated to delta_trunc and flagged.
UnitarityEstimate unitarity_estimate(double a1, double a2, double b1,
                                     double b2, int m1, int m2,
                                     double delta_trunc = kDefaultTruncation);

/// Builds a TwoPointSummary from a dataset: with known_B the b = 0 groups
/// are used against the given offset; without it the offset-eliminating
/// paired difference is used (requires both b groups at each length).
TwoPointSummary two_point_from_dataset(const RBDataset& ds, int m1, int m2,
                                       std::optional<double> known_B);

/// Extracts single-shot counts (requires n = 1 on every used sequence).
ArbCounts arb_counts_from_dataset(const RBDataset& ds, int m1, int m2);
ArbDifferenceCounts arb_difference_counts_from_dataset(const RBDataset& ds,
                                                       int m1, int m2);

}  // namespace rbkit

#endif  // RBKIT_ESTIMATE_HPP
