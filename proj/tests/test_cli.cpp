// SPDX-License-Identifier: Apache-2.0
//
// irs-slp: robust symbol-level precoding and IRS passive beamforming
// Copyright (C) 2026 The irs-slp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irs/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "irs-slp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = irs::parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string config_line(const std::string& text) {
  for (const auto& l : lines(text))
    if (l.rfind("# config ", 0) == 0) return l;
  return "";
}

// Drops the last CSV field (wall time) from every line.
std::string without_time(const std::string& text) {
  std::string res;
  for (const auto& l : lines(text)) res += l.substr(0, l.rfind(',')) + '\n';
  return res;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("single-user runs are reproducible") {
  const auto a = run({"single-user", "--n", "8", "--method", "sdr", "--seed", "3"});
  const auto b = run({"single-user", "--n", "8", "--method", "sdr", "--seed", "3"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(without_time(a.out) == without_time(b.out));
  CHECK(a.out.find("record,index,re,im,power_dbm,time_ms") != std::string::npos);
  CHECK(a.out.find("\nbound,0,") != std::string::npos);
  CHECK(a.out.find("\nsummary,0,") != std::string::npos);
  const auto ao = run({"single-user", "--n", "8", "--seed", "3"});
  REQUIRE(ao.code == 0);
  CHECK(ao.out.find("method=ao") != std::string::npos);
}

TEST_CASE("multiuser and sweep subcommands") {
  const auto mu = run({"multiuser", "--n", "8", "--k", "2", "--bits", "2", "--seed", "4"});
  REQUIRE(mu.code == 0);
  CHECK(mu.out.find("# status=") != std::string::npos);
  const auto sw = run({"sweep", "--preset", "fig7", "--trials", "1", "--values", "16", "--threads", "1"});
  REQUIRE(sw.code == 0);
  bool header = false;
  int rows = 0;
  for (const auto& l : lines(sw.out)) {
    if (l == "sweep_param,value,method,mean_power_dbm,std_power_dbm,mean_ser,mean_time_ms,trials,failures")
      header = true;
    else if (header)
      ++rows;
  }
  CHECK(header);
  CHECK(rows == 8);
}

TEST_CASE("output file") {
  const auto path = (std::filesystem::temp_directory_path() / "irs_cli_out.csv").string();
  std::filesystem::remove(path);
  const auto r = run({"single-user", "--n", "4", "--out", path});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("summary,0,") != std::string::npos);
}

TEST_CASE("infeasible runs exit with 1 and explain the robust margin") {
  const auto r = run({"single-user", "--n", "8", "--delta", "10"});
  CHECK(r.code == 1);
  CHECK(r.err.find("robust margin") != std::string::npos);
  const auto m = run({"multiuser", "--n", "8", "--k", "2", "--delta", "10"});
  CHECK(m.code == 1);
  CHECK(m.err.find("robust margin") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"single-user", "--nope"}).code == 2);
  CHECK(run({"single-user", "--n", "abc"}).code == 2);
  CHECK(run({"single-user", "--k", "3"}).code == 2);
  CHECK(run({"single-user", "--method", "pgd"}).code == 2);
  CHECK(run({"multiuser", "--constellation", "64qam"}).code == 2);
  CHECK(run({"sweep", "--preset", "fig99"}).code == 2);
  CHECK(run({"single-user", "--config", "/nonexistent/cfg.json"}).code == 2);

  const auto typed = run({"single-user", "--config", write_temp("irs_bad_type.json", R"({"n": "x"})")});
  CHECK(typed.code == 2);
  CHECK(typed.err.find("'n'") != std::string::npos);
  const auto unknown = run({"single-user", "--config", write_temp("irs_bad_key.json", R"({"nn": 3})")});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("nn") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("flags override the config file, which overrides defaults") {
  const auto cfg = write_temp("irs_prec.json", R"({"n": 6, "m": 2, "gamma_db": 12})");
  const auto r = run({"single-user", "--config", cfg, "--n", "5"});
  REQUIRE(r.code == 0);
  const auto line = config_line(r.out);
  CHECK(line.find("\"n\":5") != std::string::npos);
  CHECK(line.find("\"m\":2") != std::string::npos);
  CHECK(line.find("\"gamma_db\":[12.0]") != std::string::npos);
  CHECK(line.find("\"k\":1") != std::string::npos);
  CHECK(line.find("\"constellation\":\"bpsk\"") != std::string::npos);
}
