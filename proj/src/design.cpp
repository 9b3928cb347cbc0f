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

#include "rbkit/design.hpp"

#include <algorithm>
#include <cmath>

#include "rbkit/errors.hpp"
#include "rbkit/stats.hpp"

namespace rbkit {

namespace {

struct ModelEval {
  double signal;    // x(m) = A p^m, the offset-free mean
  double shot_var;  // per-shot variance of the summarized statistic
};

ModelEval eval_model(const DesignModel& model, double m) {
  if (const auto* known = std::get_if<DecayParams>(&model)) {
    const double x = known->A * std::pow(known->p, m);
    const double q = x + known->B;
    if (!(x > 0.0 && q <= 1.0 + 1e-12)) {
      throw NumericError("model value must lie in (B, 1]");
    }
    return {x, q * (1.0 - q)};
  }
  const auto& diff = std::get<DifferenceDesign>(model);
  const double q0 = diff.q0(m);
  const double q1 = diff.q1(m);
  if (!(q0 <= 1.0 + 1e-12 && q1 >= -1e-12 && diff.A > 0.0)) {
    throw NumericError("branch probabilities must lie in [0, 1]");
  }
  return {diff.A * std::pow(diff.p, m), q0 * (1.0 - q0) + q1 * (1.0 - q1)};
}

double sigma2_continuous(const DesignInput& input, double m2, bool weighted) {
  const ModelEval e1 = eval_model(input.model, input.m1);
  const ModelEval e2 = eval_model(input.model, m2);
  const double k1 = weighted ? input.k1 : 1.0;
  const double k2 = weighted ? input.k2 : 1.0;
  return e1.shot_var / (k1 * e1.signal * e1.signal) +
         e2.shot_var / (k2 * e2.signal * e2.signal);
}

int auto_scan_limit(const DesignInput& input) {
  const double p = input.decay_p();
  return input.m1 + 1 +
         static_cast<int>(std::ceil(20.0 / std::max(1.0 - p, 1e-9)));
}

void require_decaying(const DesignInput& input) {
  if (input.decay_p() >= 1.0) {
    throw NumericError("optimal m2 is undefined at p = 1");
  }
  if (input.m1 < 1) {
    throw std::invalid_argument("m1 must be >= 1");
  }
}

int best_integer(const DesignInput& input, bool weighted) {
  require_decaying(input);
  const double p = input.decay_p();
  const int hi = auto_scan_limit(input);
  const double lo_log = std::log(static_cast<double>(input.m1) + 0.5);
  const double hi_log = std::log(static_cast<double>(hi));

  // Coarse scan in log m2 to bracket the minimum, then golden-section.
  // The nominal scale -1/log p sits inside the bracket by construction.
  const int grid = 256;
  double best_t = std::log(std::max(-1.0 / std::log(p),
                                    static_cast<double>(input.m1) + 1.0));
  best_t = std::clamp(best_t, lo_log, hi_log);
  double best_val = variance_objective(input, std::exp(best_t), weighted);
  for (int i = 0; i <= grid; ++i) {
    const double t = lo_log + (hi_log - lo_log) * i / grid;
    const double val = variance_objective(input, std::exp(t), weighted);
    if (val < best_val) {
      best_val = val;
      best_t = t;
    }
  }
  const double step = (hi_log - lo_log) / grid;
  double a = std::max(lo_log, best_t - step);
  double b = std::min(hi_log, best_t + step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = variance_objective(input, std::exp(c), weighted);
  double fd = variance_objective(input, std::exp(d), weighted);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = variance_objective(input, std::exp(c), weighted);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = variance_objective(input, std::exp(d), weighted);
    }
  }
  const double m2_cont = std::exp(0.5 * (a + b));

  // Compare the integers around the continuous minimizer.
  int best_m2 = -1;
  double best = 0.0;
  const int center = static_cast<int>(std::llround(m2_cont));
  for (int m2 = std::max(input.m1 + 1, center - 3);
       m2 <= std::min(hi, center + 3); ++m2) {
    const double val = variance_objective(input, m2, weighted);
    if (best_m2 < 0 || val < best) {
      best = val;
      best_m2 = m2;
    }
  }
  return best_m2;
}

}  // namespace

DifferenceDesign::DifferenceDesign(double amplitude, double branch_offset,
                                   double decay)
    : A(amplitude), B_branch(branch_offset), p(decay) {
  if (!(A >= 0.0 && A <= 1.0)) {
    throw std::invalid_argument("difference amplitude must be in [0, 1]");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must be in (0, 1]");
  }
  // Monotonicity in m makes the m = 1 check cover every usable length.
  if (q0(1) > 1.0 + 1e-12 || q1(1) < -1e-12) {
    throw std::invalid_argument(
        "branch probabilities B +/- (A/2) p must lie in [0, 1]");
  }
}

double DifferenceDesign::q0(double m) const {
  return B_branch + 0.5 * A * std::pow(p, m);
}

double DifferenceDesign::q1(double m) const {
  return B_branch - 0.5 * A * std::pow(p, m);
}

double DesignInput::decay_p() const {
  if (const auto* known = std::get_if<DecayParams>(&model)) {
    return known->p;
  }
  return std::get<DifferenceDesign>(model).p;
}

double sigma2(const DesignInput& input, int m2) {
  if (m2 <= input.m1) {
    throw std::invalid_argument("need m2 > m1");
  }
  return sigma2_continuous(input, m2, /*weighted=*/true);
}

double variance_objective(const DesignInput& input, double m2, bool weighted) {
  if (m2 <= input.m1) {
    throw std::invalid_argument("need m2 > m1");
  }
  const double dm = m2 - input.m1;
  return sigma2_continuous(input, m2, weighted) / (dm * dm);
}

int optimal_m2(const DesignInput& input) {
  return best_integer(input, /*weighted=*/false);
}

int optimal_m2_weighted(const DesignInput& input) {
  return best_integer(input, /*weighted=*/true);
}

int optimal_m2_bruteforce(const DesignInput& input, int m2_max, bool weighted) {
  require_decaying(input);
  if (m2_max <= 0) m2_max = auto_scan_limit(input);
  int best_m2 = -1;
  double best = 0.0;
  for (int m2 = input.m1 + 1; m2 <= m2_max; ++m2) {
    const double val = variance_objective(input, m2, weighted);
    if (best_m2 < 0 || val < best) {
      best = val;
      best_m2 = m2;
    }
  }
  return best_m2;
}

int heuristic_m2(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericError("heuristic m2 needs p in (0, 1)");
  }
  return static_cast<int>(std::ceil(1.0 / (2.0 * (1.0 - p))));
}

int heuristic_m2_alternative(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericError("heuristic m2 needs p in (0, 1)");
  }
  return static_cast<int>(std::ceil(1.0 / (1.0 - p)));
}

double CdfTable::quantile(double q) const {
  if (grid.empty()) {
    throw std::invalid_argument("empty CDF table");
  }
  const auto it = std::lower_bound(probs.begin(), probs.end(), q - 1e-15);
  const std::size_t i =
      std::min(static_cast<std::size_t>(it - probs.begin()), grid.size() - 1);
  return grid[i];
}

namespace {

struct Atom {
  double x;  // truncated offset-free signal value
  double w;  // probability mass
};

// Marginal distribution of the per-length signal estimate under
// single-shot sampling, with all mass at or below the truncation floor
// collapsed onto it.
std::vector<Atom> marginal_atoms(const DesignModel& model, double m, int k,
                                 double delta_trunc) {
  std::vector<Atom> atoms;
  double truncated_mass = 0.0;
  if (const auto* known = std::get_if<DecayParams>(&model)) {
    const double q = known->A * std::pow(known->p, m) + known->B;
    if (!(q > known->B && q < 1.0)) {
      throw NumericError("model value must lie strictly between B and 1");
    }
    for (int s = 0; s <= k; ++s) {
      const double w = stats::binomial_pmf(s, k, q);
      const double x = static_cast<double>(s) / k - known->B;
      if (x < delta_trunc) {
        truncated_mass += w;
      } else {
        atoms.push_back({x, w});
      }
    }
  } else {
    const auto& diff = std::get<DifferenceDesign>(model);
    const double q0 = diff.q0(m);
    const double q1 = diff.q1(m);
    if (!(q0 > 0.0 && q0 < 1.0 && q1 > 0.0 && q1 < 1.0)) {
      throw NumericError("branch probabilities must lie strictly inside (0, 1)");
    }
    std::vector<double> pmf0(k + 1), pmf1(k + 1);
    for (int s = 0; s <= k; ++s) {
      pmf0[s] = stats::binomial_pmf(s, k, q0);
      pmf1[s] = stats::binomial_pmf(s, k, q1);
    }
    // distribution of (s0 - s1)/k over -k..k
    std::vector<double> conv(2 * k + 1, 0.0);
    for (int s0 = 0; s0 <= k; ++s0) {
      for (int s1 = 0; s1 <= k; ++s1) {
        conv[s0 - s1 + k] += pmf0[s0] * pmf1[s1];
      }
    }
    for (int d = -k; d <= k; ++d) {
      const double x = static_cast<double>(d) / k;
      if (x < delta_trunc) {
        truncated_mass += conv[d + k];
      } else {
        atoms.push_back({x, conv[d + k]});
      }
    }
  }
  if (truncated_mass > 0.0) {
    atoms.insert(atoms.begin(), {delta_trunc, truncated_mass});
  }
  return atoms;
}

}  // namespace

CdfTable estimator_cdf_exact(const DesignInput& input, int m2, int k,
                             double delta_trunc) {
  if (m2 <= input.m1) {
    throw std::invalid_argument("need m2 > m1");
  }
  if (k < 1 || k > kMaxEnumerationK) {
    throw DataError("exact enumeration supports 1 <= k <= 2000");
  }
  const double dm = m2 - input.m1;
  const auto atoms1 = marginal_atoms(input.model, input.m1, k, delta_trunc);
  const auto atoms2 = marginal_atoms(input.model, m2, k, delta_trunc);

  std::vector<std::pair<double, double>> outcomes;
  outcomes.reserve(atoms1.size() * atoms2.size());
  for (const Atom& a1 : atoms1) {
    for (const Atom& a2 : atoms2) {
      const double p_hat =
          std::min(1.0, std::pow(a2.x / a1.x, 1.0 / dm));
      outcomes.emplace_back(p_hat, a1.w * a2.w);
    }
  }
  std::sort(outcomes.begin(), outcomes.end());

  CdfTable table;
  table.grid.reserve(outcomes.size());
  table.probs.reserve(outcomes.size());
  double acc = 0.0;
  for (const auto& [value, weight] : outcomes) {
    acc += weight;
    if (!table.grid.empty() && table.grid.back() == value) {
      table.probs.back() = acc;
    } else {
      table.grid.push_back(value);
      table.probs.push_back(acc);
    }
  }
  return table;
}

LognormalApprox lognormal_approx(const DesignInput& input, int m2, int k) {
  DesignInput equal = input;
  equal.k1 = k;
  equal.k2 = k;
  LognormalApprox approx;
  approx.p = input.decay_p();
  approx.sigma = std::sqrt(sigma2(equal, m2));
  approx.delta_m = m2 - input.m1;
  return approx;
}

double LognormalApprox::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return stats::normal_cdf(std::log(x / p) * delta_m / sigma);
}

CdfTable estimator_cdf_normal(const DesignInput& input, int m2, int k) {
  const LognormalApprox approx = lognormal_approx(input, m2, k);
  const double sd_p = approx.p * approx.sigma / approx.delta_m;
  const double lo = std::max(0.0, approx.p - 10.0 * sd_p);
  const double hi = std::min(1.0, approx.p + 10.0 * sd_p);
  const int points = 2001;
  CdfTable table;
  table.grid.reserve(points);
  table.probs.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    table.grid.push_back(x);
    table.probs.push_back(approx.cdf(x));
  }
  return table;
}

double ks_distance(const CdfTable& exact, const LognormalApprox& approx) {
  double sup = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < exact.grid.size(); ++i) {
    const double fn = approx.cdf(exact.grid[i]);
    sup = std::max(sup, std::abs(exact.probs[i] - fn));
    sup = std::max(sup, std::abs(prev - fn));
    prev = exact.probs[i];
  }
  return sup;
}

}  // namespace rbkit
