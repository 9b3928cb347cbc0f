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

#ifndef RBKIT_DESIGN_HPP
#define RBKIT_DESIGN_HPP

#include <variant>
#include <vector>

#include "rbkit/model.hpp"

namespace rbkit {

/// Assumed model for design in the offset-eliminated protocol: the paired
/// branches succeed with B_branch +/- (A/2) p^m, and the estimator works on
/// the offset-free difference A p^m. Valid whenever both branches are
/// probabilities at every length m >= 1.
struct DifferenceDesign {
  double A = 1.0;
  double B_branch = 0.5;
  double p = 1.0;

  DifferenceDesign() = default;
  DifferenceDesign(double amplitude, double branch_offset, double decay);

  double q0(double m) const;  // b = 0 branch probability
  double q1(double m) const;  // b = 1 branch probability
};

/// Either a known-offset model (counts at probability A p^m + B, offset
/// subtracted by the estimator) or the offset-eliminated pairing.
using DesignModel = std::variant<DecayParams, DifferenceDesign>;

struct DesignInput {
  DesignModel model;
  int m1 = 4;
  double k1 = 1.0;  // sequences at m1
  double k2 = 1.0;  // sequences at m2

  double decay_p() const;
};

/// Variance of the log-ratio statistic under single-shot sampling:
/// sum_j var1(m_j) / (k_j x(m_j)^2) with x the offset-free signal and var1
/// the per-shot variance of the summarized statistic.
double sigma2(const DesignInput& input, int m2);

/// sigma2 / dm^2 with equal weights: the quantity the optimal-m2 rule
/// minimizes. Continuous in m2.
double variance_objective(const DesignInput& input, double m2,
                          bool weighted = false);

/// Integer m2 > m1 minimizing the equal-weight variance objective, found by
/// bracketed golden-section search on log m2 started near -1/log p and
/// refined by comparing neighboring integers.
int optimal_m2(const DesignInput& input);

/// Extension minimizing sigma2 / dm^2 with the input's k1, k2 weights.
int optimal_m2_weighted(const DesignInput& input);

/// Exhaustive integer scan; verification oracle for the searches.
/// m2_max = 0 picks the same automatic range the search uses.
int optimal_m2_bruteforce(const DesignInput& input, int m2_max = 0,
                          bool weighted = false);

/// ceil(1 / (2(1-p))): the recommended second length.
int heuristic_m2(double p);

/// ceil(1 / (1-p)): the earlier recommendation, kept for comparison.
int heuristic_m2_alternative(double p);

/// Right-continuous step CDF on the attainable estimator values.
struct CdfTable {
  std::vector<double> grid;   // ascending
  std::vector<double> probs;  // cumulative, ends at 1

  double quantile(double q) const;
};

inline constexpr int kMaxEnumerationK = 2000;

/// Exact CDF of the two-point estimate p_hat when each length contributes k
/// single-shot sequences: full enumeration over the attainable counts
/// (O(k^2) outcomes), with the estimator's truncation applied.
CdfTable estimator_cdf_exact(const DesignInput& input, int m2, int k,
                             double delta_trunc = 1e-6);

/// The matching log-normal law: log p_hat ~ N(log p, sigma^2 / dm^2).
struct LognormalApprox {
  double p = 1.0;
  double sigma = 0.0;
  int delta_m = 1;

  double cdf(double x) const;
};

LognormalApprox lognormal_approx(const DesignInput& input, int m2, int k);

/// The log-normal CDF tabulated on 2001 evenly spaced points covering
/// p +/- 10 standard deviations (clipped to [0, 1]).
CdfTable estimator_cdf_normal(const DesignInput& input, int m2, int k);

/// sup_x |F_exact(x) - F_approx(x)|, evaluated on both sides of every atom.
double ks_distance(const CdfTable& exact, const LognormalApprox& approx);

}  // namespace rbkit

#endif  // RBKIT_DESIGN_HPP
