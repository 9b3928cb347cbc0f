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

#ifndef RBKIT_STUDIES_HPP
#define RBKIT_STUDIES_HPP

#include <string>
#include <vector>

namespace rbkit {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Runs a named study from a JSON config and writes plot-ready CSVs plus a
/// manifest into the output directory. Returns the paths written.
///
/// Config: {"schema": "rb-study/1", "study": <name>, "seed": <int>,
///          "replicates": <int>, "out_dir": <path>, "params": {...}}
/// Studies: cdf_comparison, m2_landscape, adaptive_scaling, coverage,
///          bias, validation_power. Every cell derives its own RNG stream
///          from (seed, study, cell, replicate), so outputs are
///          reproducible and independent of evaluation order.
std::vector<std::string> run_study(const std::string& config_json,
                                   const std::string& out_dir_override = "");

}  // namespace rbkit

#endif  // RBKIT_STUDIES_HPP
