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

#include "rbkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace rbkit::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("normal_quantile: q must be in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<>(), q);
}

double chi_squared_sf(double x, double df) {
  if (x <= 0.0) {
    return 1.0;
  }
  return boost::math::cdf(
      boost::math::complement(boost::math::chi_squared_distribution<>(df), x));
}

double log_binomial_pmf(std::int64_t s, std::int64_t n, double p) {
  if (s < 0 || s > n) {
    return -std::numeric_limits<double>::infinity();
  }
  if (p <= 0.0) {
    return s == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (p >= 1.0) {
    return s == n ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const double sn = static_cast<double>(n);
  const double ss = static_cast<double>(s);
  const double log_choose = std::lgamma(sn + 1.0) - std::lgamma(ss + 1.0) -
                            std::lgamma(sn - ss + 1.0);
  return log_choose + ss * std::log(p) + (sn - ss) * std::log1p(-p);
}

double binomial_pmf(std::int64_t s, std::int64_t n, double p) {
  return std::exp(log_binomial_pmf(s, n, p));
}

double mean(std::span<const double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("mean of empty range");
  }
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) {
    return 0.0;
  }
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

double median(std::vector<double> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("median of empty range");
  }
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid),
                   xs.end());
  double hi = xs[mid];
  if (xs.size() % 2 == 1) {
    return hi;
  }
  double lo = *std::max_element(
      xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double fisher_combined_pvalue(std::span<const double> pvalues) {
  if (pvalues.empty()) {
    throw std::invalid_argument("fisher_combined_pvalue: no p-values");
  }
  double statistic = 0.0;
  for (double p : pvalues) {
    statistic += -2.0 * std::log(std::max(p, 1e-300));
  }
  return chi_squared_sf(statistic, 2.0 * static_cast<double>(pvalues.size()));
}

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> variance) {
  if (x.size() != y.size() || x.size() != variance.size() || x.size() < 2) {
    throw std::invalid_argument("weighted_line_fit: bad input sizes");
  }
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / std::max(variance[i], 1e-300);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  LineFit fit;
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swxx * swy - swx * swxy) / det;
  fit.slope_variance = sw / det;
  return fit;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("ols_slope: bad input sizes");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

}  // namespace rbkit::stats
