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

#ifndef RBKIT_STATS_HPP
#define RBKIT_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace rbkit::stats {

double normal_cdf(double z);
double normal_sf(double z);

/// Quantile of the standard normal; `q` in (0, 1).
double normal_quantile(double q);

/// Upper tail of the chi-squared distribution with `df` degrees of freedom.
double chi_squared_sf(double x, double df);

/// log of the Binomial(n, p) probability mass at s.
double log_binomial_pmf(std::int64_t s, std::int64_t n, double p);
double binomial_pmf(std::int64_t s, std::int64_t n, double p);

double mean(std::span<const double> xs);

/// Unbiased sample variance (k-1 denominator); 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

double median(std::vector<double> xs);

/// Fisher's combination of independent p-values: upper tail of
/// -2 sum(log p_i) against chi-squared with 2n degrees of freedom.
double fisher_combined_pvalue(std::span<const double> pvalues);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_variance = 0.0;
};

/// Weighted least squares line y = a + b x with per-point variances.
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> variance);

/// Ordinary least-squares slope of y against x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace rbkit::stats

#endif  // RBKIT_STATS_HPP
