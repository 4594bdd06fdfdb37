// Copyright 2026 The ROAR Authors.
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
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "roar/cli.hpp"
#include "roar/io.hpp"

namespace roar {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "roar");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("roar_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

nlohmann::json parse_file(const std::string& p) { return nlohmann::json::parse(read_file(p)); }

TEST_F(CliTest, VerifyTheoryDefaultCases) {
  const auto r = run_cli({"verify-theory", "--cases", "default", "--samples", "20000", "--out", path("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_file(path("report.json"));
  EXPECT_GE(j.at("cases").size(), 21u);
  EXPECT_EQ(j.at("remarks").size(), 3u);
  EXPECT_NEAR(j.at("cases")[0].at("exact").get<double>(), 0.682689, 1e-6);
  EXPECT_TRUE(fs::exists(path("report.json.manifest.json")));
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  const auto r = run_cli({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, MissingSpecIsConfigError) {
  const auto r = run_cli({"evaluate", "--spec", path("missing.json"), "--out-dir", path("out")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.json"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("out")));
}

TEST_F(CliTest, MalformedSpecIsConfigError) {
  std::ofstream(path("bad.json")) << "{\"seeds\": [0], \"model\": ";
  EXPECT_EQ(run_cli({"evaluate", "--spec", path("bad.json"), "--out-dir", path("out")}).code, 2);
}

TEST_F(CliTest, PipelineGenerateTrainRecourse) {
  ASSERT_EQ(run_cli({"generate-data", "--seed", "4", "--n", "200", "--alpha", "1", "--pfc-comparisons", "50",
                     "--out-dir", path("data")})
                .code,
            0);
  for (const char* f : {"d1.csv", "d2.csv", "schema.json", "comparisons.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "data" / f)) << f;
  }
  const auto manifest = parse_file(path("data/manifest.json"));
  EXPECT_EQ(manifest.at("artifacts").size(), 4u);
  EXPECT_EQ(manifest.at("artifacts")[0].at("sha256").get<std::string>(),
            sha256_hex(read_file(path("data/d1.csv"))));

  const auto train = run_cli({"train", "--data", path("data/d1.csv"), "--schema", path("data/schema.json"),
                              "--learning-rate", "0.1", "--seed", "1", "--out", path("model.json")});
  ASSERT_EQ(train.code, 0) << train.err;

  for (const char* method : {"cfe", "roar", "ar"}) {
    const std::string out = path(std::string(method) + ".jsonl");
    const auto r = run_cli({"recourse", "--model", path("model.json"), "--data", path("data/d1.csv"), "--schema",
                            path("data/schema.json"), "--method", method, "--seed", "2", "--limit", "5", "--out",
                            out});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
      const auto rec = nlohmann::json::parse(line);
      EXPECT_TRUE(rec.contains("index"));
      EXPECT_TRUE(rec.contains("counterfactual") || rec.contains("error"));
      ++lines;
    }
    EXPECT_EQ(lines, 5) << method;
  }
}

TEST_F(CliTest, RecourseRejectsMlpForLinearOnlyMethods) {
  ASSERT_EQ(run_cli({"generate-data", "--seed", "1", "--n", "100", "--out-dir", path("data")}).code, 0);
  ASSERT_EQ(run_cli({"train", "--data", path("data/d1.csv"), "--schema", path("data/schema.json"), "--model", "mlp",
                     "--layers", "4,4", "--epochs", "2", "--seed", "1", "--out", path("mlp.json")})
                .code,
            0);
  const auto r = run_cli({"recourse", "--model", path("mlp.json"), "--data", path("data/d1.csv"), "--schema",
                          path("data/schema.json"), "--method", "roar", "--seed", "1", "--out", path("r.jsonl")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, EvaluateIsByteReproducible) {
  const nlohmann::json spec = {{"data", {{"synthetic", {{"n", 150}}}}},
                               {"training", {{"learning_rate", 0.1}, {"epochs", 50}}},
                               {"methods", {"cfe", "roar"}},
                               {"lambda", 0.1},
                               {"folds", 2},
                               {"seeds", {0}},
                               {"max_instances", 5},
                               {"sweep", {{"alpha", {0, 1}}}}};
  std::ofstream(path("spec.json")) << spec.dump();
  ASSERT_EQ(run_cli({"evaluate", "--spec", path("spec.json"), "--out-dir", path("a")}).code, 0);
  ASSERT_EQ(run_cli({"evaluate", "--spec", path("spec.json"), "--out-dir", path("b")}).code, 0);
  EXPECT_EQ(read_file(path("a/report.json")), read_file(path("b/report.json")));
  EXPECT_TRUE(parse_file(path("a/manifest.json")).contains("timestamp"));

  const auto override_run =
      run_cli({"evaluate", "--spec", path("spec.json"), "--out-dir", path("c"), "--lambda", "0.5", "--seed", "3"});
  ASSERT_EQ(override_run.code, 0);
  const auto cfg = parse_file(path("c/report.json")).at("config");
  EXPECT_EQ(cfg.at("lambda").get<double>(), 0.5);
  EXPECT_EQ(cfg.at("seeds"), nlohmann::json({3}));

  ASSERT_EQ(run_cli({"sweep", "--spec", path("spec.json"), "--out-dir", path("s")}).code, 0);
  EXPECT_EQ(parse_file(path("s/sweep.json")).size(), 2u);
  EXPECT_TRUE(fs::exists(path("s/plotdata.csv")));
}

TEST(AtomicWrite, ReplacesWholeFile) {
  const auto p = fs::temp_directory_path() / "roar_atomic" / "nested" / "f.txt";
  fs::remove_all(fs::temp_directory_path() / "roar_atomic");
  write_atomic(p, "first");
  write_atomic(p, "second");
  EXPECT_EQ(read_file(p), "second");
  for (const auto& e : fs::directory_iterator(p.parent_path())) EXPECT_EQ(e.path().filename(), "f.txt");
  fs::remove_all(fs::temp_directory_path() / "roar_atomic");
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace roar
