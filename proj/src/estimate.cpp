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

#include "rbkit/estimate.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rbkit/errors.hpp"
#include "rbkit/stats.hpp"

namespace rbkit {

namespace {

void validate_two_point(const TwoPointSummary& s) {
  if (s.m1 >= s.m2) {
    throw std::invalid_argument("two-point summary needs m1 < m2");
  }
  if (s.v1 < 0.0 || s.v2 < 0.0) {
    throw std::invalid_argument("variances must be non-negative");
  }
}

void validate_truncation(double delta_trunc) {
  if (!(delta_trunc > 0.0 && delta_trunc <= 0.01)) {
    throw std::invalid_argument("truncation floor must be in (0, 0.01]");
  }
}

double truncate(double x, double delta_trunc, bool* fired) {
  if (x < delta_trunc) {
    *fired = true;
    return delta_trunc;
  }
  return x;
}

/// x^a, optionally with the second-order bias term subtracted.
double power_factor(double x, double a, double v, bool corrected) {
  double t = std::pow(x, a);
  if (corrected) {
    t -= 0.5 * a * (a - 1.0) * std::pow(x, a - 2.0) * v;
  }
  return t;
}

}  // namespace

Estimate ratio_estimate(const TwoPointSummary& s, double delta_trunc,
                        BiasCorrection bias) {
  validate_two_point(s);
  validate_truncation(delta_trunc);

  Estimate est;
  est.m1 = s.m1;
  est.m2 = s.m2;
  est.B = s.B;

  const double dm = s.delta_m();
  const double x1 = truncate(s.q1 - s.B, delta_trunc, &est.flags.truncated_m1);
  const double x2 = truncate(s.q2 - s.B, delta_trunc, &est.flags.truncated_m2);

  bool corrected = bias == BiasCorrection::On;
  if (bias == BiasCorrection::Auto) {
    corrected = s.k1 > 0 && s.k2 > 0 && std::min(s.k1, s.k2) < 50;
  }
  est.flags.bias_corrected = corrected;

  const double a1p = -1.0 / dm, a2p = 1.0 / dm;
  const double a1A = s.m2 / dm, a2A = -s.m1 / dm;

  const double p_raw = std::pow(x1, a1p) * std::pow(x2, a2p);
  const double A_raw = std::pow(x1, a1A) * std::pow(x2, a2A);

  double p_hat = corrected ? power_factor(x1, a1p, s.v1, true) *
                                 power_factor(x2, a2p, s.v2, true)
                           : p_raw;
  double A_hat = corrected ? power_factor(x1, a1A, s.v1, true) *
                                 power_factor(x2, a2A, s.v2, true)
                           : A_raw;

  if (p_hat < 0.0 || p_hat > 1.0) {
    est.flags.clamped_p = true;
    p_hat = std::clamp(p_hat, 0.0, 1.0);
  }
  est.p_hat = p_hat;
  est.r_hat = 1.0 - p_hat;
  est.A_hat = A_hat;

  // First-order propagation around the uncorrected point.
  const double dp1 = a1p * p_raw / x1, dp2 = a2p * p_raw / x2;
  const double dA1 = a1A * A_raw / x1, dA2 = a2A * A_raw / x2;
  est.variance_p = dp1 * dp1 * s.v1 + dp2 * dp2 * s.v2;
  est.variance_A = dA1 * dA1 * s.v1 + dA2 * dA2 * s.v2;
  est.cov_Ap = dp1 * dA1 * s.v1 + dp2 * dA2 * s.v2;

  const double half = chebyshev_halfwidth(s.v1 + s.v2, s.delta_m());
  est.interval.lo = std::max(0.0, p_hat - half);
  est.interval.hi = std::min(1.0, p_hat + half);
  est.interval.coverage = 8.0 / 9.0;
  est.interval.method = "chebyshev";
  return est;
}

double propagate_variance(const TwoPointSummary& s, double delta_trunc) {
  validate_two_point(s);
  validate_truncation(delta_trunc);
  bool ignored = false;
  const double dm = s.delta_m();
  const double x1 = truncate(s.q1 - s.B, delta_trunc, &ignored);
  const double x2 = truncate(s.q2 - s.B, delta_trunc, &ignored);
  const double p_raw = std::pow(x2 / x1, 1.0 / dm);
  const double d1 = p_raw / (dm * x1);
  const double d2 = p_raw / (dm * x2);
  return d1 * d1 * s.v1 + d2 * d2 * s.v2;
}

double chebyshev_halfwidth(double var_q_sum, int delta_m, double k_cheb) {
  if (var_q_sum < 0.0 || delta_m < 1) {
    throw std::invalid_argument("need var_q_sum >= 0 and delta_m >= 1");
  }
  return k_cheb / static_cast<double>(delta_m) * std::sqrt(var_q_sum);
}

namespace {

Estimate lognormal_core(int m1, int m2, double x1, double x2, double var1,
                        double var2, double B, double coverage,
                        double delta_trunc) {
  if (m1 >= m2) {
    throw std::invalid_argument("lognormal interval needs m1 < m2");
  }
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw std::invalid_argument("coverage must be in (0, 1)");
  }
  validate_truncation(delta_trunc);

  Estimate est;
  est.m1 = m1;
  est.m2 = m2;
  est.B = B;
  const double dm = m2 - m1;

  const bool degenerate = x1 <= 0.0 || x2 <= 0.0;
  const double t1 = truncate(x1, delta_trunc, &est.flags.truncated_m1);
  const double t2 = truncate(x2, delta_trunc, &est.flags.truncated_m2);

  const double log_p = std::log(t2 / t1) / dm;
  double p_hat = std::exp(log_p);
  if (p_hat > 1.0) {
    est.flags.clamped_p = true;
    p_hat = 1.0;
  }
  est.p_hat = p_hat;
  est.r_hat = 1.0 - p_hat;
  est.A_hat = std::pow(t1, m2 / dm) * std::pow(t2, -m1 / dm);

  const double sigma2 = var1 / (t1 * t1) + var2 / (t2 * t2);
  est.variance_p = p_hat * p_hat * sigma2 / (dm * dm);

  est.interval.method = "lognormal";
  est.interval.coverage = coverage;
  if (degenerate) {
    est.flags.degenerate_interval = true;
    est.interval.lo = 0.0;
    est.interval.hi = 1.0;
    return est;
  }
  const double z = stats::normal_quantile(0.5 + coverage / 2.0);
  const double half_log = z * std::sqrt(sigma2) / dm;
  est.interval.lo = std::max(0.0, std::exp(log_p - half_log));
  est.interval.hi = std::min(1.0, std::exp(log_p + half_log));
  return est;
}

double fraction(std::int64_t s, std::int64_t k, const char* what) {
  if (k < 1 || s < 0 || s > k) {
    throw DataError(std::string("invalid counts for ") + what);
  }
  return static_cast<double>(s) / static_cast<double>(k);
}

}  // namespace

Estimate lognormal_interval(const ArbCounts& counts, double B, double coverage,
                            double delta_trunc) {
  const double q1 = fraction(counts.s1, counts.k1, "m1");
  const double q2 = fraction(counts.s2, counts.k2, "m2");
  const double var1 = q1 * (1.0 - q1) / static_cast<double>(counts.k1);
  const double var2 = q2 * (1.0 - q2) / static_cast<double>(counts.k2);
  return lognormal_core(counts.m1, counts.m2, q1 - B, q2 - B, var1, var2, B,
                        coverage, delta_trunc);
}

Estimate lognormal_interval(const ArbDifferenceCounts& counts, double coverage,
                            double delta_trunc) {
  const double q10 = fraction(counts.s1_b0, counts.k1, "m1 b0");
  const double q11 = fraction(counts.s1_b1, counts.k1, "m1 b1");
  const double q20 = fraction(counts.s2_b0, counts.k2, "m2 b0");
  const double q21 = fraction(counts.s2_b1, counts.k2, "m2 b1");
  const double var1 =
      (q10 * (1.0 - q10) + q11 * (1.0 - q11)) / static_cast<double>(counts.k1);
  const double var2 =
      (q20 * (1.0 - q20) + q21 * (1.0 - q21)) / static_cast<double>(counts.k2);
  return lognormal_core(counts.m1, counts.m2, q10 - q11, q20 - q21, var1, var2,
                        0.0, coverage, delta_trunc);
}

UnitarityEstimate unitarity_estimate(double a1, double a2, double b1,
                                     double b2, int m1, int m2,
                                     double delta_trunc) {
  if (m1 >= m2) {
    throw std::invalid_argument("unitarity estimate needs m1 < m2");
  }
  validate_truncation(delta_trunc);
  UnitarityEstimate out;
  const double dm = m2 - m1;
  const double ta1 = truncate(a1, delta_trunc, &out.truncated);
  const double ta2 = truncate(a2, delta_trunc, &out.truncated);
  const double tb1 = truncate(b1, delta_trunc, &out.truncated);
  const double tb2 = truncate(b2, delta_trunc, &out.truncated);
  out.l_hat = std::pow(ta2 / ta1, 1.0 / dm);
  out.u_hat = std::pow(tb2 / tb1, 1.0 / dm);
  out.A_l_hat = std::pow(ta1, m2 / dm) * std::pow(ta2, -m1 / dm);
  out.A_u_hat = std::pow(tb1, m2 / dm) * std::pow(tb2, -m1 / dm);
  return out;
}

TwoPointSummary two_point_from_dataset(const RBDataset& ds, int m1, int m2,
                                       std::optional<double> known_B) {
  if (m1 >= m2) {
    throw std::invalid_argument("need m1 < m2");
  }
  TwoPointSummary s;
  s.m1 = m1;
  s.m2 = m2;
  if (known_B) {
    const GroupSummary g1 = summarize(ds, m1, 0);
    const GroupSummary g2 = summarize(ds, m2, 0);
    s.q1 = g1.mean;
    s.q2 = g2.mean;
    s.v1 = g1.variance / g1.k;
    s.v2 = g2.variance / g2.k;
    s.B = *known_B;
    s.k1 = g1.k;
    s.k2 = g2.k;
  } else {
    const DifferenceSummary d1 = difference_summary(ds, m1);
    const DifferenceSummary d2 = difference_summary(ds, m2);
    s.q1 = d1.mean;
    s.q2 = d2.mean;
    s.v1 = d1.variance;
    s.v2 = d2.variance;
    s.B = 0.0;
    s.k1 = std::min(d1.k0, d1.k1);
    s.k2 = std::min(d2.k0, d2.k1);
  }
  return s;
}

namespace {

std::pair<std::int64_t, std::int64_t> single_shot_counts(const RBDataset& ds,
                                                         int m, int b) {
  const RBPoint& pt = ds.point(m, b);
  std::int64_t k = 0, s = 0;
  for (const auto& seq : pt.sequences) {
    if (seq.n != 1) {
      throw DataError(
          "log-normal intervals need single-shot data (n = 1 per sequence)");
    }
    ++k;
    s += seq.successes;
  }
  return {k, s};
}

}  // namespace

ArbCounts arb_counts_from_dataset(const RBDataset& ds, int m1, int m2) {
  ArbCounts out;
  out.m1 = m1;
  out.m2 = m2;
  std::tie(out.k1, out.s1) = single_shot_counts(ds, m1, 0);
  std::tie(out.k2, out.s2) = single_shot_counts(ds, m2, 0);
  return out;
}

ArbDifferenceCounts arb_difference_counts_from_dataset(const RBDataset& ds,
                                                       int m1, int m2) {
  ArbDifferenceCounts out;
  out.m1 = m1;
  out.m2 = m2;
  const auto [k10, s10] = single_shot_counts(ds, m1, 0);
  const auto [k11, s11] = single_shot_counts(ds, m1, 1);
  const auto [k20, s20] = single_shot_counts(ds, m2, 0);
  const auto [k21, s21] = single_shot_counts(ds, m2, 1);
  if (k10 != k11 || k20 != k21) {
    throw DataError("difference counts need equal k in both b groups");
  }
  out.k1 = k10;
  out.s1_b0 = s10;
  out.s1_b1 = s11;
  out.k2 = k20;
  out.s2_b0 = s20;
  out.s2_b1 = s21;
  return out;
}

std::string Estimate::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "rb-estimate/1";
  j["p_hat"] = p_hat;
  j["r_hat"] = r_hat;
  j["A_hat"] = A_hat;
  j["variance_p"] = variance_p;
  j["m1"] = m1;
  j["m2"] = m2;
  j["B"] = B;
  j["interval"] = {{"lo", interval.lo},
                   {"hi", interval.hi},
                   {"coverage", interval.coverage},
                   {"method", interval.method}};
  j["flags"] = {{"truncated_m1", flags.truncated_m1},
                {"truncated_m2", flags.truncated_m2},
                {"bias_corrected", flags.bias_corrected},
                {"clamped_p", flags.clamped_p},
                {"degenerate_interval", flags.degenerate_interval}};
  return j.dump(2) + "\n";
}

}  // namespace rbkit
