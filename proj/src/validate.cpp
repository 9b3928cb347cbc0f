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

#include "rbkit/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "rbkit/errors.hpp"
#include "rbkit/stats.hpp"

namespace rbkit {

Prediction predict_at(const Estimate& est, double B, int m,
                      bool conservative) {
  if (m < 0) {
    throw std::invalid_argument("prediction length must be non-negative");
  }
  Prediction out;
  const double pm = std::pow(est.p_hat, m);
  out.mean = est.A_hat * pm + B;
  const double dA = pm;
  const double dp = est.p_hat > 0.0
                        ? static_cast<double>(m) * est.A_hat *
                              std::pow(est.p_hat, m - 1)
                        : 0.0;
  out.variance = dp * dp * est.variance_p;
  if (!conservative) {
    out.variance += dA * dA * est.variance_A + 2.0 * dA * dp * est.cov_Ap;
  }
  out.variance = std::max(out.variance, 0.0);
  return out;
}

ValidationReport consistency_test(const RBDataset& ds, const Estimate& est,
                                  std::optional<double> known_B,
                                  const std::vector<int>& holdout_ms,
                                  double alpha) {
  if (holdout_ms.empty()) {
    throw std::invalid_argument("holdout length list must not be empty");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must be in (0, 1)");
  }
  for (int m : holdout_ms) {
    if (m == est.m1 || m == est.m2) {
      throw DataError("holdout lengths must not overlap the fit lengths");
    }
  }

  const double B = known_B.value_or(0.0);
  ValidationReport report;
  report.alpha = alpha;
  std::vector<double> pvalues;
  for (int m : holdout_ms) {
    LengthCheck check;
    check.m = m;
    double var_obs;
    if (known_B) {
      const GroupSummary g = summarize(ds, m, 0);
      check.observed = g.mean;
      var_obs = g.variance / g.k;
    } else {
      const DifferenceSummary d = difference_summary(ds, m);
      check.observed = d.mean;
      var_obs = d.variance;
    }
    const Prediction pred = predict_at(est, B, m);
    check.predicted = pred.mean;
    check.std_error = std::sqrt(var_obs + pred.variance);
    check.z = check.std_error > 0.0
                  ? (check.observed - check.predicted) / check.std_error
                  : 0.0;
    check.p_value = 2.0 * stats::normal_sf(std::abs(check.z));
    pvalues.push_back(check.p_value);
    report.per_m.push_back(check);
  }
  report.combined_p = stats::fisher_combined_pvalue(pvalues);
  report.reject = report.combined_p < alpha;
  return report;
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "rb-validation/1";
  j["method"] = method;
  j["alpha"] = alpha;
  j["combined_p"] = combined_p;
  j["reject"] = reject;
  j["per_m"] = nlohmann::ordered_json::array();
  for (const auto& check : per_m) {
    j["per_m"].push_back({{"m", check.m},
                          {"observed", check.observed},
                          {"predicted", check.predicted},
                          {"std_error", check.std_error},
                          {"z", check.z},
                          {"p_value", check.p_value}});
  }
  return j.dump(2) + "\n";
}

std::string ValidationReport::to_table() const {
  std::ostringstream out;
  out << "    m    observed   predicted   std.err          z    p-value\n";
  char line[160];
  for (const auto& c : per_m) {
    std::snprintf(line, sizeof(line), "%5d  %10.6f  %10.6f  %8.6f  %9.3f  %9.4g\n",
                  c.m, c.observed, c.predicted, c.std_error, c.z, c.p_value);
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "combined p-value %.4g; %s at alpha=%g\n", combined_p,
                reject ? "REJECT static-decay hypothesis" : "consistent",
                alpha);
  out << line;
  return out.str();
}

}  // namespace rbkit
