// Copyright 2026 The hypwarp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "hypwarp/cli.hpp"

using hypwarp::io::json;

namespace {

const std::string kData = HYPWARP_TEST_DATA;

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"hypwarp"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = hypwarp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hypwarp_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string p = temp_path(name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 2", "[cli]") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"no-such-command"}).code == 2);
  CHECK(run_cli({"boxmodel"}).code == 2);
  CHECK(run_cli({"boxmodel", "--eps", "abc"}).code == 2);
  CHECK(run_cli({"compare", "--polygon", kData + "/missing.json"}).code == 2);
  CHECK(run_cli({"curvature-verify", "--grid", "20by20"}).code == 2);
  CHECK(run_cli({"curvature-verify", "--grid", "10x10"}).code == 2);
  CHECK(run_cli({"curvature-verify", "--M", "100", "--auto-M"}).code == 2);
  CHECK(run_cli({"--threads", "0", "boxmodel", "--eps", "0.1"}).code == 2);
}

TEST_CASE("help exits with 0", "[cli]") { CHECK(run_cli({"--help"}).code == 0); }

TEST_CASE("report envelope", "[cli]") {
  const Outcome r = run_cli({"boxmodel", "--eps", "0.1"});
  REQUIRE(r.code == 0);
  const json j = r.report();
  CHECK(j["schema_version"] == 1);
  CHECK(j["metadata"]["tool"] == "hypwarp");
  CHECK(j["metadata"]["command"] == "boxmodel");
  CHECK(j["pass"] == true);
  CHECK(j.contains("config"));
  CHECK(j.contains("result"));
}

TEST_CASE("box model out of range fails", "[cli]") {
  CHECK(run_cli({"boxmodel", "--eps", "0.7"}).code != 0);
}

TEST_CASE("reports are byte-identical across runs", "[cli]") {
  const auto a = run_cli({"compare", "--polygon", kData + "/right_pentagon.json", "--k", "4"});
  const auto b = run_cli({"compare", "--polygon", kData + "/right_pentagon.json", "--k", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run_cli({"--threads", "1", "enclose", "--arrangement", kData + "/chain_arrangement.json", "--point", "0.3"});
  const auto d = run_cli({"--threads", "3", "enclose", "--arrangement", kData + "/chain_arrangement.json", "--point", "0.3"});
  REQUIRE(c.code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("curvature verification", "[cli][slow]") {
  const Outcome ok = run_cli({"curvature-verify", "--ell", "2", "--t0", "0.5", "--auto-M", "--grid", "2000x200"});
  REQUIRE(ok.code == 0);
  const json j = ok.report();
  CHECK(j["result"]["violations"] == 0);
  CHECK(j["pass"] == true);

  const Outcome steep = run_cli({"curvature-verify", "--ell", "2", "--t0", "0.5", "--M", "0.6"});
  CHECK(steep.code == 1);
  CHECK(steep.report()["result"]["violations"].get<std::size_t>() > 0);
}

TEST_CASE("curvature sweep CSV", "[cli]") {
  const std::string csv = temp_path("sweep.csv");
  std::filesystem::remove(csv);
  REQUIRE(run_cli({"curvature-verify", "--grid", "1000x100", "--csv", csv}).code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("mix") != std::string::npos);
}

TEST_CASE("development", "[cli]") {
  CHECK(run_cli({"develop", "--eps", "0.2"}).code == 0);
  const Outcome r = run_cli({"develop", "--cube", kData + "/box_cube.json"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["result"]["embedded"] == true);
  const std::string bad = write_temp("bad_cube.json", R"({"n": 3, "faces": [[0, 1, 0, 0]]})");
  CHECK(run_cli({"develop", "--cube", bad}).code == 2);
}

TEST_CASE("polygon comparison", "[cli]") {
  const Outcome r = run_cli({"compare", "--polygon", kData + "/right_pentagon.json", "--k", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["result"].dump().find("first_strict") != std::string::npos);
  const std::string open = write_temp("open_pentagon.json", R"({"sides": [1, 1, 1, 1, 1], "angles": [1.5, 1.5, 1.5, 1.5, 1.5]})");
  CHECK(run_cli({"compare", "--polygon", open}).code == 2);
  const std::string garbage = write_temp("garbage.json", "{not json");
  CHECK(run_cli({"compare", "--polygon", garbage}).code == 2);
}

TEST_CASE("density", "[cli]") {
  const std::string s = kData + "/origin_planes.json";
  CHECK(run_cli({"density", "--samples", s, "--probes", s, "--max-eps", "1e-9"}).code == 0);
  CHECK(run_cli({"density", "--samples", s, "--max-eps", "1e-6"}).code == 1);
}

TEST_CASE("enclosure", "[cli]") {
  const std::string arr = kData + "/chain_arrangement.json";
  CHECK(run_cli({"enclose", "--arrangement", arr}).code == 2);
  CHECK(run_cli({"enclose", "--arrangement", arr, "--point", "0.3", "--chain", "0", "1"}).code == 2);
  CHECK(run_cli({"enclose", "--arrangement", arr, "--point", "0", "--gamma-dir", "0", "0.866", "0.5", "0"}).code == 1);
  const Outcome chain = run_cli({"enclose", "--arrangement", arr, "--chain", "0", "0.9"});
  REQUIRE(chain.code == 0);
  CHECK(chain.report()["result"]["recheck"] == "ok");
}

TEST_CASE("report can go to a file", "[cli]") {
  const std::string p = temp_path("report.json");
  std::filesystem::remove(p);
  const Outcome r = run_cli({"--json", p, "boxmodel", "--eps", "0.2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(p);
  CHECK(json::parse(in)["pass"] == true);
}
