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

#include "rbkit/dataset.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rbkit/errors.hpp"
#include "rbkit/stats.hpp"

namespace rbkit {

using Json = nlohmann::ordered_json;

DriftSpec::DriftSpec(double start, double end) : p_start(start), p_end(end) {
  if (!(p_start > 0.0 && p_start <= 1.0) || !(p_end > 0.0 && p_end <= 1.0)) {
    throw std::invalid_argument("drift endpoints must be in (0, 1]");
  }
}

double DriftSpec::p_at(std::size_t sequence_index,
                       std::size_t total_sequences) const {
  if (total_sequences <= 1) return p_start;
  const double frac = static_cast<double>(sequence_index) /
                      static_cast<double>(total_sequences - 1);
  return p_start + (p_end - p_start) * frac;
}

bool RBDataset::has_point(int m, int b) const {
  for (const auto& pt : points) {
    if (pt.m == m && pt.b == b) return true;
  }
  return false;
}

const RBPoint& RBDataset::point(int m, int b) const {
  for (const auto& pt : points) {
    if (pt.m == m && pt.b == b) return pt;
  }
  throw DataError("dataset has no group at m=" + std::to_string(m) +
                  ", b=" + std::to_string(b));
}

std::vector<int> RBDataset::lengths() const {
  std::set<int> ms;
  for (const auto& pt : points) ms.insert(pt.m);
  return {ms.begin(), ms.end()};
}

bool RBDataset::is_single_shot() const {
  for (const auto& pt : points) {
    for (const auto& seq : pt.sequences) {
      if (seq.n != 1) return false;
    }
  }
  return true;
}

namespace {

Json meta_to_json(const DatasetMeta& meta) {
  Json j;
  j["backend"] = meta.backend;
  j["seed"] = meta.seed;
  j["n_qubits"] = meta.n_qubits;
  if (meta.params) {
    j["params"] = {{"A", meta.params->A}, {"B", meta.params->B},
                   {"p", meta.params->p}};
  }
  if (meta.noise) j["noise"] = *meta.noise;
  if (meta.drift) {
    j["drift"] = {{"kind", "linear"}, {"p_start", meta.drift->p_start},
                  {"p_end", meta.drift->p_end}};
  }
  if (meta.spread_concentration) {
    j["spread_concentration"] = *meta.spread_concentration;
  }
  return j;
}

DatasetMeta meta_from_json(const Json& j) {
  DatasetMeta meta;
  meta.backend = j.value("backend", std::string("analytic"));
  meta.seed = j.value("seed", std::uint64_t{0});
  meta.n_qubits = j.value("n_qubits", 1);
  if (j.contains("params")) {
    const auto& p = j.at("params");
    meta.params = DecayParams(p.at("A").get<double>(), p.at("B").get<double>(),
                              p.at("p").get<double>());
  }
  if (j.contains("noise")) meta.noise = j.at("noise").get<std::string>();
  if (j.contains("drift")) {
    const auto& d = j.at("drift");
    meta.drift = DriftSpec(d.at("p_start").get<double>(),
                           d.at("p_end").get<double>());
  }
  if (j.contains("spread_concentration")) {
    meta.spread_concentration = j.at("spread_concentration").get<double>();
  }
  return meta;
}

Json parse_or_throw(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw DataError("malformed JSON");
  }
  return j;
}

}  // namespace

std::string RBDataset::to_json() const {
  Json j;
  j["schema"] = "rb-dataset/1";
  j["meta"] = meta_to_json(meta);
  j["points"] = Json::array();
  for (const auto& pt : points) {
    Json jp;
    jp["m"] = pt.m;
    jp["b"] = pt.b;
    jp["sequences"] = Json::array();
    for (const auto& seq : pt.sequences) {
      jp["sequences"].push_back({{"n", seq.n}, {"successes", seq.successes}});
    }
    j["points"].push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

RBDataset RBDataset::from_json(const std::string& text) {
  const Json j = parse_or_throw(text);
  if (j.value("schema", std::string()) != "rb-dataset/1") {
    throw DataError("expected schema rb-dataset/1");
  }
  RBDataset ds;
  try {
    if (j.contains("meta")) ds.meta = meta_from_json(j.at("meta"));
    for (const auto& jp : j.at("points")) {
      RBPoint pt;
      pt.m = jp.at("m").get<int>();
      pt.b = jp.at("b").get<int>();
      if (pt.m < 1 || (pt.b != 0 && pt.b != 1)) {
        throw DataError("points need m >= 1 and b in {0, 1}");
      }
      for (const auto& js : jp.at("sequences")) {
        SequenceCounts seq;
        seq.n = js.at("n").get<int>();
        seq.successes = js.at("successes").get<int>();
        if (seq.n < 1 || seq.successes < 0 || seq.successes > seq.n) {
          throw DataError("sequence counts need 0 <= successes <= n");
        }
        pt.sequences.push_back(seq);
      }
      if (pt.sequences.empty()) {
        throw DataError("every (m, b) group needs at least one sequence");
      }
      ds.points.push_back(std::move(pt));
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("invalid dataset: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid dataset: ") + e.what());
  }
  return ds;
}

std::string RBDataset::summary_csv() const {
  std::ostringstream out;
  out << "m,b,k,n,mean,variance\n";
  for (const auto& pt : points) {
    const GroupSummary s = summarize(*this, pt.m, pt.b);
    out << pt.m << "," << pt.b << "," << s.k << "," << s.n << ","
        << s.mean << "," << s.variance << "\n";
  }
  return out.str();
}

GroupSummary summarize(const RBDataset& ds, int m, int b) {
  const RBPoint& pt = ds.point(m, b);
  std::vector<double> fractions;
  fractions.reserve(pt.sequences.size());
  int n_common = pt.sequences.front().n;
  bool mixed = false;
  for (const auto& seq : pt.sequences) {
    fractions.push_back(static_cast<double>(seq.successes) /
                        static_cast<double>(seq.n));
    if (seq.n != n_common) mixed = true;
  }
  GroupSummary out;
  out.k = static_cast<int>(fractions.size());
  out.n = mixed ? -1 : n_common;
  out.mean = stats::mean(fractions);
  out.variance = stats::sample_variance(fractions);
  out.insufficient_replicates = out.k < 2;
  return out;
}

DifferenceSummary difference_summary(const RBDataset& ds, int m) {
  const GroupSummary s0 = summarize(ds, m, 0);
  const GroupSummary s1 = summarize(ds, m, 1);
  DifferenceSummary out;
  out.mean = s0.mean - s1.mean;
  out.variance = s0.variance / s0.k + s1.variance / s1.k;
  out.k0 = s0.k;
  out.k1 = s1.k;
  return out;
}

bool UnitarityDataset::has_point(int m) const {
  for (const auto& pt : points) {
    if (pt.m == m) return true;
  }
  return false;
}

const UnitarityPoint& UnitarityDataset::point(int m) const {
  for (const auto& pt : points) {
    if (pt.m == m) return pt;
  }
  throw DataError("unitarity dataset has no group at m=" + std::to_string(m));
}

std::string UnitarityDataset::to_json() const {
  Json j;
  j["schema"] = "rb-unitarity/1";
  j["meta"] = {{"backend", backend}, {"seed", seed}, {"n_qubits", n_qubits}};
  if (noise) j["meta"]["noise"] = *noise;
  j["points"] = Json::array();
  for (const auto& pt : points) {
    Json jp;
    jp["m"] = pt.m;
    jp["sequences"] = Json::array();
    for (const auto& seq : pt.sequences) {
      jp["sequences"].push_back(
          {{"pauli_values", seq.pauli_values}, {"trace", seq.trace}});
    }
    j["points"].push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

UnitarityDataset UnitarityDataset::from_json(const std::string& text) {
  const Json j = parse_or_throw(text);
  if (j.value("schema", std::string()) != "rb-unitarity/1") {
    throw DataError("expected schema rb-unitarity/1");
  }
  UnitarityDataset ds;
  try {
    if (j.contains("meta")) {
      const auto& m = j.at("meta");
      ds.backend = m.value("backend", std::string("gate-level"));
      ds.seed = m.value("seed", std::uint64_t{0});
      ds.n_qubits = m.value("n_qubits", 1);
      if (m.contains("noise")) ds.noise = m.at("noise").get<std::string>();
    }
    for (const auto& jp : j.at("points")) {
      UnitarityPoint pt;
      pt.m = jp.at("m").get<int>();
      for (const auto& js : jp.at("sequences")) {
        UnitaritySequence seq;
        seq.pauli_values = js.at("pauli_values").get<std::vector<double>>();
        seq.trace = js.value("trace", 1.0);
        for (double v : seq.pauli_values) {
          if (v < -1.0 - 1e-9 || v > 1.0 + 1e-9) {
            throw DataError("pauli values must lie in [-1, 1]");
          }
        }
        pt.sequences.push_back(std::move(seq));
      }
      ds.points.push_back(std::move(pt));
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("invalid unitarity dataset: ") + e.what());
  }
  return ds;
}

UnitaritySummaries unitarity_summaries(const UnitarityDataset& ds, int m,
                                       bool pauli_average) {
  const UnitarityPoint& pt = ds.point(m);
  const std::size_t k = pt.sequences.size();
  if (k < 2) {
    throw DataError("unitarity summaries need at least two sequences");
  }
  const std::size_t n_pauli = pt.sequences.front().pauli_values.size();
  for (const auto& seq : pt.sequences) {
    if (seq.pauli_values.size() != n_pauli) {
      throw DataError("inconsistent pauli value counts");
    }
  }
  UnitaritySummaries out;
  out.k = static_cast<int>(k);
  out.a_pauli.assign(n_pauli, 0.0);
  double trace_sum = 0.0;
  double square_sum = 0.0;
  for (const auto& seq : pt.sequences) {
    trace_sum += seq.trace;
    for (std::size_t i = 0; i < n_pauli; ++i) {
      out.a_pauli[i] += seq.pauli_values[i];
      square_sum += seq.pauli_values[i] * seq.pauli_values[i];
    }
  }
  for (double& a : out.a_pauli) a /= static_cast<double>(k);
  out.a_trace = trace_sum / static_cast<double>(k);
  out.a_pauli_mean = 0.0;
  double sum_a_sq = 0.0;
  for (double a : out.a_pauli) {
    out.a_pauli_mean += a;
    sum_a_sq += a * a;
  }
  out.a_pauli_mean /= static_cast<double>(n_pauli);
  out.b_spread = square_sum / static_cast<double>(k) - sum_a_sq;
  if (pauli_average) {
    out.b_spread /= static_cast<double>(n_pauli);
  }
  return out;
}

}  // namespace rbkit
