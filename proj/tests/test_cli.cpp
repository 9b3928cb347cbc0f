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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "rbkit/dataset.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "rbkit_cli_tests";

int run(const std::string& args) {
  const std::string cmd =
      std::string(RBKIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string path(const char* name) { return (kWorkDir / name).string(); }

struct WorkDirSetup {
  WorkDirSetup() {
    fs::remove_all(kWorkDir);
    fs::create_directories(kWorkDir);
  }
} setup;

}  // namespace

TEST_CASE("simulate writes a valid deterministic dataset") {
  const std::string cmd =
      "simulate --backend analytic --A 0.4 --B 0.5 --p 0.99 "
      "--design 4:0:100:1 --design 50:0:100:1 --seed 7 --out " +
      path("d.json");
  CHECK(run(cmd) == 0);
  const std::string first = slurp(path("d.json"));
  const rbkit::RBDataset ds = rbkit::RBDataset::from_json(first);
  std::size_t sequences = 0;
  for (const auto& pt : ds.points) sequences += pt.sequences.size();
  CHECK(sequences == 200);
  CHECK(ds.is_single_shot());

  CHECK(run(cmd) == 0);
  CHECK(slurp(path("d.json")) == first);  // byte-identical rerun
}

TEST_CASE("invalid design rows and bad files map to the data exit code") {
  CHECK(run("simulate --backend analytic --A 0.4 --B 0.5 --p 0.99 "
            "--design 0:0:1:1 --seed 1 --out " +
            path("bad.json")) == 2);
  CHECK(run("estimate --data " + path("missing.json") + " --m2 50") == 2);
  CHECK(run("bogus-subcommand") == 1);
  CHECK(run("simulate --backend nope --design 4:0:1:1 --seed 1 --out " +
            path("x.json")) == 1);
}

TEST_CASE("estimate pipeline emits json with the expected fields") {
  CHECK(run("simulate --backend analytic --A 0.4 --B 0.5 --p 0.99 "
            "--design 4:0:200:10 --design 4:1:200:10 "
            "--design 50:0:200:10 --design 50:1:200:10 --seed 11 --out " +
            path("pair.json")) == 0);
  CHECK(run("estimate --data " + path("pair.json") +
            " --m1 4 --m2 50 --mode difference --out " + path("est.json")) ==
        0);
  const std::string est = slurp(path("est.json"));
  CHECK(est.find("rb-estimate/1") != std::string::npos);
  CHECK(est.find("p_hat") != std::string::npos);
  CHECK(est.find("chebyshev") != std::string::npos);

  // Log-normal intervals insist on single-shot data.
  CHECK(run("estimate --data " + path("pair.json") +
            " --m1 4 --m2 50 --mode difference --interval lognormal") == 2);

  CHECK(run("validate --data " + path("pair.json") +
            " --m1 4 --m2 50 --mode difference --holdout 10,20 ") == 2);
}

TEST_CASE("validate runs on data that includes holdout lengths") {
  CHECK(run("simulate --backend analytic --A 0.4 --B 0.5 --p 0.99 "
            "--design 4:0:80:10 --design 4:1:80:10 "
            "--design 20:0:80:10 --design 20:1:80:10 "
            "--design 50:0:80:10 --design 50:1:80:10 --seed 13 --out " +
            path("v.json")) == 0);
  CHECK(run("validate --data " + path("v.json") +
            " --m1 4 --m2 50 --mode difference --holdout 20 --out " +
            path("report.json")) == 0);
  CHECK(slurp(path("report.json")).find("rb-validation/1") !=
        std::string::npos);
}

TEST_CASE("adaptive subcommand writes a reproducible trace") {
  const std::string cmd =
      "adaptive --oracle analytic --A 1.0 --p 0.99 --epsilon 0.05 "
      "--delta 0.1 --seed 3 --out " +
      path("ada.json");
  CHECK(run(cmd) == 0);
  const std::string first = slurp(path("ada.json"));
  CHECK(first.find("rb-adaptive/1") != std::string::npos);
  CHECK(run(cmd) == 0);
  CHECK(slurp(path("ada.json")) == first);

  // A decay parameter of 1 cannot terminate: numerical-degeneracy exit.
  CHECK(run("adaptive --oracle analytic --A 1.0 --p 1.0 --epsilon 0.05 "
            "--delta 0.1 --max-doublings 8 --seed 3") == 3);
}

TEST_CASE("unitarity pipeline estimates through files") {
  CHECK(run("simulate --backend gate-level --protocol unitarity "
            "--noise depolarizing:0.02 --lengths 2,10 --k 40 --seed 5 --out " +
            path("u.json")) == 0);
  CHECK(run("unitarity --data " + path("u.json") +
            " --m1 2 --m2 10 --out " + path("uest.json")) == 0);
  CHECK(slurp(path("uest.json")).find("u_hat") != std::string::npos);
}

TEST_CASE("summary and design emit their tables") {
  CHECK(run("summary --data " + path("pair.json") + " --out " +
            path("summary.csv")) == 0);
  const std::string csv = slurp(path("summary.csv"));
  CHECK(csv.rfind("m,b,k,n,mean,variance", 0) == 0);

  CHECK(run("design --A 0.5 --B 0.5 --p 0.99 --m1 4 --mode known-B "
            "--landscape " +
            path("landscape.csv")) == 0);
  CHECK(slurp(path("landscape.csv")).rfind("m2,variance", 0) == 0);
}

TEST_CASE("studies run from configs and are deterministic") {
  {
    std::ofstream cfg(kWorkDir / "study.json");
    cfg << R"({"schema": "rb-study/1", "study": "bias", "seed": 9,
               "replicates": 100, "out_dir": ")"
        << (kWorkDir / "study-out").string() << R"("})";
  }
  CHECK(run("study " + path("study.json")) == 0);
  const std::string bias = slurp(kWorkDir / "study-out" / "bias.csv");
  CHECK(bias.rfind("A,B,p,k,n,m1,m2,replicates", 0) == 0);
  const std::string manifest = slurp(kWorkDir / "study-out" / "manifest.json");
  CHECK(manifest.find("rb-study-manifest/1") != std::string::npos);
  CHECK(manifest.find("config_hash") != std::string::npos);

  CHECK(run("study " + path("study.json")) == 0);
  CHECK(slurp(kWorkDir / "study-out" / "bias.csv") == bias);

  // Unseeded studies are rejected.
  {
    std::ofstream cfg(kWorkDir / "unseeded.json");
    cfg << R"({"schema": "rb-study/1", "study": "bias", "replicates": 10})";
  }
  CHECK(run("study " + path("unseeded.json")) == 2);
}
