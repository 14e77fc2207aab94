// Copyright 2026 The Disagg Authors.
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


#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>

#include "cli.hpp"
#include "disagg/csv.hpp"
#include "oracles.hpp"

namespace disagg {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::TempDir;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun disagg(std::vector<std::string> args) {
  args.insert(args.begin(), "disagg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return files;
}

const std::string kSmallSpec = R"({
  "rows": 288, "samples": 4, "noise_sigma": 0.0, "seed": 3, "min_gap": 3,
  "classes": [
    {"name": "oven", "peak": 5.0, "l0_budget": 6, "on_intervals": 6, "pulse_width": 3},
    {"name": "washer", "peak": 2.5, "l0_budget": 8, "on_intervals": 8, "pulse_width": 4}
  ]})";

const std::string kSmallConfig = R"({
  "rng_seed": 4,
  "classes": [
    {"name": "oven", "peak": 5.0, "l0_budget": 6},
    {"name": "washer", "peak": 2.5, "l0_budget": 8}
  ]})";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    write(dir.path() / "spec.json", kSmallSpec);
    write(dir.path() / "config.json", kSmallConfig);
  }

  CliRun synth_small() { return disagg({"synth", "--spec", path("spec.json"), "--out", path("synth")}); }

  CliRun fit_small(const std::string& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"fit", "--data", path("synth/data.csv"), "--config", path("config.json"),
                                  "--out", path(out), "--interval-minutes", "5"};
    args.insert(args.end(), extra.begin(), extra.end());
    return disagg(args);
  }

  std::string path(const std::string& rel) const { return (dir.path() / rel).string(); }

  TempDir dir{"cli"};
};

TEST_F(Cli, SynthWritesDatasetTruthAndTrueModel) {
  const auto r = synth_small();
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"synth/data.csv", "synth/config.json", "synth/true_model/report.json",
                        "synth/true_model/class_0_oven.csv", "synth/true_model/fixed.csv"}) {
    EXPECT_TRUE(fs::exists(path(f))) << f;
  }
}

TEST_F(Cli, SynthWithMissingOrBadSpecLeavesNoOutput) {
  auto r = disagg({"synth", "--spec", path("missing.json"), "--out", path("never")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(path("never")));
  write(dir.path() / "bad.json", R"({"rows": 1440, "classes": [{"name": "a", "peak": 1, "l0_budget": 2000}]})");
  r = disagg({"synth", "--spec", path("bad.json"), "--out", path("never")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(path("never")));
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, ReferenceHouseholdSynthIs1440By15) {
  const auto r = disagg({"synth", "--spec", DISAGG_SOURCE_DIR "/configs/synth_reference.json", "--out", path("reference")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ingested = ingest_csv(fs::path(path("reference/data.csv")), IngestOptions{});
  EXPECT_EQ(ingested.dataset.rows(), 1440);
  EXPECT_EQ(ingested.dataset.samples(), 15);
}

TEST_F(Cli, FitOnNoiselessDataDrivesObjectiveToZero) {
  ASSERT_EQ(synth_small().code, 0);
  const auto r = fit_small("fit");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto trace = read_file(path("fit/objective_trace.csv"));
  std::istringstream in(trace);
  std::string line, last;
  while (std::getline(in, line)) if (!line.empty()) last = line;
  const double final_phi = *parse_double(last.substr(last.find(',') + 1));
  EXPECT_LT(final_phi, 1e-6);
}

TEST_F(Cli, BothUpdateRulesAcceptedOthersRejected) {
  ASSERT_EQ(synth_small().code, 0);
  EXPECT_EQ(fit_small("kl", {"--update-rule", "paper-kl", "--max-iters", "3"}).code, 0);
  EXPECT_EQ(fit_small("fro", {"--update-rule", "frobenius", "--max-iters", "3"}).code, 0);
  EXPECT_EQ(fit_small("bad", {"--update-rule", "itakura-saito"}).code, cli::kUsage);
  EXPECT_EQ(fit_small("bad2", {"--max-iters", "0"}).code, cli::kUsage);
}

TEST_F(Cli, FixedSeedGivesIdenticalFiles) {
  ASSERT_EQ(synth_small().code, 0);
  const std::vector<std::string> flags{"--seed", "11", "--sample-order", "random", "--class-order", "random"};
  ASSERT_EQ(fit_small("a", flags).code, 0);
  ASSERT_EQ(fit_small("b", flags).code, 0);
  // The data path is recorded in the report; both runs use the same one.
  EXPECT_EQ(snapshot(path("a")), snapshot(path("b")));
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  ASSERT_EQ(synth_small().code, 0);
  ASSERT_EQ(fit_small("o", {"--max-iters", "2", "--tol", "0", "--seed", "99"}).code, 0);
  const auto report = read_file(path("o/report.json"));
  EXPECT_NE(report.find("\"iterations_run\": 2"), std::string::npos) << report;
  EXPECT_NE(report.find("\"rng_seed\": 99"), std::string::npos);
}

TEST_F(Cli, EvalOfTrueModelPrintsPerfectScores) {
  const auto s = disagg({"synth", "--spec", DISAGG_SOURCE_DIR "/configs/synth_reference.json", "--out", path("reference")});
  ASSERT_EQ(s.code, 0);
  const auto r = disagg({"eval", "--model", path("reference/true_model"), "--truth", path("reference/data.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"furnace", "washer/dryer", "oven", "kitchen apps"}) {
    EXPECT_NE(r.out.find(std::string(name) + ": F1 1.0000"), std::string::npos) << r.out;
  }
  const auto j = disagg({"eval", "--model", path("reference/true_model"), "--truth", path("reference/data.csv"), "--json",
                         "--report", path("eval.json")});
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(j.out, read_file(path("eval.json")));
}

TEST_F(Cli, EvalWithMismatchedNamesFails) {
  ASSERT_EQ(synth_small().code, 0);
  const std::string csv = read_file(path("synth/data.csv"));
  std::string renamed = csv;
  renamed.replace(renamed.find("oven"), 4, "kiln");
  write(dir.path() / "renamed.csv", renamed);
  const auto r = disagg({"eval", "--model", path("synth/true_model"), "--truth", path("renamed.csv")});
  EXPECT_EQ(r.code, cli::kData);
  EXPECT_NE(r.err.find("oven"), std::string::npos) << r.err;
}

TEST_F(Cli, PlotWritesWellFormedSvgWithOnePanelPerClass) {
  ASSERT_EQ(disagg({"synth", "--spec", DISAGG_SOURCE_DIR "/configs/synth_reference.json", "--out", path("reference")}).code, 0);
  const auto r = disagg({"plot", "--model", path("reference/true_model"), "--day", "0", "--out", path("day0.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  boost::property_tree::ptree tree;
  ASSERT_NO_THROW(boost::property_tree::read_xml(path("day0.svg"), tree));
  int panels = 0;
  for (const auto& [tag, node] : tree.get_child("svg")) {
    if (tag == "g" && node.get<std::string>("<xmlattr>.class", "") == "panel") ++panels;
  }
  EXPECT_EQ(panels, 2 + 4);
}

TEST_F(Cli, PlotDayOutOfRangeFails) {
  ASSERT_EQ(synth_small().code, 0);
  const auto r = disagg({"plot", "--model", path("synth/true_model"), "--day", "4", "--out", path("x.svg")});
  EXPECT_EQ(r.code, cli::kData);
  EXPECT_FALSE(fs::exists(path("x.svg")));
  EXPECT_NE(disagg({"plot", "--model", path("synth/true_model"), "--day", "-1", "--out", path("x.svg")}).code, 0);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  ::setenv("DISAGG_OUT_DIR", path("env_out").c_str(), 1);
  const auto r = disagg({"synth", "--spec", path("spec.json")});
  ::unsetenv("DISAGG_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("env_out/data.csv")));
  EXPECT_EQ(disagg({"synth", "--spec", path("spec.json")}).code, cli::kUsage);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(disagg({}).code, cli::kUsage);
  EXPECT_EQ(disagg({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(disagg({"--help"}).code, cli::kSuccess);
  EXPECT_EQ(disagg({"fit", "--data", path("none.csv"), "--config", path("config.json"), "--out", path("f")}).code,
            cli::kData);
  write(dir.path() / "huge.csv", "timestamp,kWh\n2019-04-01T00:00:00,1e200\n");
  EXPECT_EQ(disagg({"fit", "--data", path("huge.csv"), "--config", path("config.json"), "--out", path("h"),
                    "--interval-minutes", "1440"})
                .code,
            cli::kNumerical);
}

TEST_F(Cli, CommandsDoNotTouchTheirInputs) {
  ASSERT_EQ(synth_small().code, 0);
  const auto before = snapshot(dir.path() / "synth");
  const auto spec = read_file(path("spec.json"));
  const auto config = read_file(path("config.json"));
  ASSERT_EQ(fit_small("fit", {"--max-iters", "2"}).code, 0);
  ASSERT_EQ(disagg({"eval", "--model", path("synth/true_model"), "--truth", path("synth/data.csv")}).code, 0);
  ASSERT_EQ(disagg({"plot", "--model", path("synth/true_model"), "--day", "1", "--out", path("p.svg")}).code, 0);
  EXPECT_EQ(snapshot(dir.path() / "synth"), before);
  EXPECT_EQ(read_file(path("spec.json")), spec);
  EXPECT_EQ(read_file(path("config.json")), config);
}

}  // namespace
}  // namespace disagg
