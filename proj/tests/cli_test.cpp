// Copyright 2026 The occulab Authors
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


// Drives the occulab executable end to end.

#include <openssl/evp.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(OCCULAB_CLI) + "' " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("occulab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::string hex;
  char b[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(b, sizeof b, "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("constants prints the limit constant") {
  const auto dir = scratch("constants");
  const auto r = run("constants --dim 2 --function gaussdiff:sigma=2 --output-dir " + dir.string());
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  const auto start = r.out.find('{');
  REQUIRE(start != std::string::npos);
  const auto end = r.out.rfind('}');
  const json doc = json::parse(r.out.substr(start, end - start + 1));
  CHECK(doc["c_fd_squared"].get<double>() == doctest::Approx(0.892574).epsilon(1e-6));
  CHECK(doc["gamma_residuals"].size() == 6);
  CHECK(doc.contains("bracket"));
  CHECK(doc.contains("norm1_residual"));
  CHECK(fs::exists(dir / "results.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("verify exits zero when there are no violations") {
  const auto dir = scratch("verify");
  const auto r = run("verify --check taylor --output-dir " + dir.string());
  CHECK(r.exit_code == 0);
  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["pass"].get<bool>());
  const auto all = run("verify --check all --trials 20000 --output-dir " + dir.string());
  CHECK(all.exit_code == 0);
}

TEST_CASE("input errors exit with status 2") {
  const auto dir = scratch("errors");
  CHECK(run("limit-law --dim 3 --hurst 0.5 --critical --output-dir " + dir.string()).exit_code ==
        2);
  CHECK(run("simulate-fbm --dim 3 --hurst 0.5 --critical --output-dir " + dir.string())
            .exit_code == 2);
  CHECK(run("verify --check nonsense --output-dir " + dir.string()).exit_code == 2);
  CHECK(run("limit-law --function cosine --output-dir " + dir.string()).exit_code == 2);
  CHECK(run("limit-law --replicas 10 --output-dir " + dir.string()).exit_code == 2);
  CHECK(run("--bogus-flag constants").exit_code == 2);
  CHECK(run("").exit_code == 2);
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("results csv has the documented columns") {
  const auto dir = scratch("zprocess");
  const auto r = run("zprocess --t 1 --walk-steps 10000 --replicas 300 --output-dir " +
                     dir.string());
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  const std::string csv = slurp(dir / "results.csv");
  CHECK(csv.rfind("experiment,d,H,n,t,order,estimate,se,target,ratio\n", 0) == 0);
  CHECK(csv.find("zprocess,1,0.5,,1,mean,") != std::string::npos);
}

TEST_CASE("manifest digests match the files") {
  const auto dir = scratch("manifest");
  run("zprocess --t 0.5 --walk-steps 10000 --replicas 200 --output-dir " + dir.string());
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["files"]["results.csv"]["sha256"].get<std::string>() ==
        sha256_hex(slurp(dir / "results.csv")));
  CHECK(manifest["files"]["summary.json"]["sha256"].get<std::string>() ==
        sha256_hex(slurp(dir / "summary.json")));
  CHECK(manifest.contains("started_utc"));
  CHECK(manifest.contains("finished_utc"));
  CHECK(manifest.contains("version"));
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch("config");
  const fs::path cfg = dir / "run.toml";
  std::ofstream(cfg) << "dim = 2\nn = [4]\nt = [1]\nreplicas = 150\nseed = 3\n";
  const auto a = dir / "a";
  const auto b = dir / "b";
  run("limit-law --config " + cfg.string() + " --output-dir " + a.string());
  run("limit-law --config " + cfg.string() + " --replicas 120 --output-dir " + b.string());
  const json sa = json::parse(slurp(a / "summary.json"));
  const json sb = json::parse(slurp(b / "summary.json"));
  CHECK(sa["config"]["replicas"].get<int>() == 150);
  CHECK(sb["config"]["replicas"].get<int>() == 120);
  CHECK(sa["config"]["seed"].get<int>() == 3);
  CHECK(sa["config"]["n"][0].get<double>() == 4.0);
}

TEST_CASE("seed falls back to the environment") {
  const auto dir = scratch("seed");
  run("zprocess --t 1 --walk-steps 10000 --replicas 200 --output-dir " + (dir / "env").string(),
      "OCCULAB_SEED=77");
  run("zprocess --t 1 --walk-steps 10000 --replicas 200 --seed 77 --output-dir " +
      (dir / "flag").string());
  run("zprocess --t 1 --walk-steps 10000 --replicas 200 --seed 78 --output-dir " +
      (dir / "other").string());
  CHECK(slurp(dir / "env" / "results.csv") == slurp(dir / "flag" / "results.csv"));
  CHECK(slurp(dir / "env" / "results.csv") != slurp(dir / "other" / "results.csv"));
}

TEST_CASE("worker count does not change results") {
  const auto dir = scratch("workers");
  const std::string common = "limit-law --n 4,5 --t 1 --replicas 150 --seed 5 --output-dir ";
  run(common + (dir / "w1").string() + " --workers 1");
  run(common + (dir / "w8").string() + " --workers 8");
  const std::string one = slurp(dir / "w1" / "results.csv");
  CHECK(one.size() > 100);
  CHECK(one == slurp(dir / "w8" / "results.csv"));
}

TEST_CASE("simulate-fbm writes a path") {
  const auto dir = scratch("fbm");
  const auto r = run("simulate-fbm --hurst 0.3 --dim 2 --steps 128 --replicas 20 --output-dir " +
                     dir.string());
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  CHECK(slurp(dir / "path.csv").rfind("t,x_1,x_2\n", 0) == 0);
}

}  // TEST_SUITE
