// Copyright 2026 The setproto Authors
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


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "setproto/data/posting.hpp"
#include "setproto/training/config.hpp"

namespace setproto {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "setproto");
  args.insert(args.begin() + 1, {"--log-level", "off"});
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("setproto_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Postings with levels and both kinds of context field.
  std::string write_context_data(int n) const {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> skill(0, 11), size(1, 5), city(0, 2);
    std::uniform_real_distribution<double> exp(0.0, 10.0);
    std::normal_distribution<double> noise(0.0, 0.2);
    const char* cities[] = {"north", "south", "east"};
    const char* levels[] = {"junior", "senior"};
    std::vector<RawPosting> ps;
    for (int i = 0; i < n; ++i) {
      RawPosting p;
      double y = 5.0;
      const int k = size(rng);
      std::vector<int> used;
      for (int j = 0; j < k; ++j) {
        const int s = skill(rng);
        if (std::find(used.begin(), used.end(), s) != used.end()) continue;
        used.push_back(s);
        p.skills.push_back({"skill" + std::to_string(s), std::string(levels[(i + j) % 2])});
        y += s < 4 ? 1.0 : 0.2;
      }
      const double e = exp(rng);
      p.context = {{"city", std::string(cities[city(rng)])}, {"experience", e}};
      p.salary = y + 0.1 * e + noise(rng);
      ps.push_back(std::move(p));
    }
    const std::string file = path("data.jsonl");
    write_postings_file(file, ps);
    return file;
  }

  std::string write_tiny_config() const {
    TrainConfig c;
    c.total_epochs = 4;
    c.projection_period = 2;
    c.n_prototypes = 3;
    c.n_views = 2;
    c.embed_dim = 4;
    c.transform_hidden = 8;
    c.level_dim = 2;
    c.context_hidden = 4;
    c.batch_size = 16;
    c.seed = 5;
    const std::string file = path("config.json");
    std::ofstream(file) << to_json(c).dump(2);
    return file;
  }

  fs::path dir_;
};

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"mine", "--data", "x.jsonl", "--bogus"}).code, 2);
  const Outcome missing = run({"train", "--out", "ckpt"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("--data"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  const Outcome r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("export-prototypes"), std::string::npos);
}

TEST_F(CliTest, MissingFilesExitOne) {
  const Outcome r = run({"mine", "--data", path("absent.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("absent.jsonl"), std::string::npos);
  EXPECT_EQ(run({"explain", "--ckpt", path("nock"), "--skills", "a"}).code, 1);
}

TEST_F(CliTest, MalformedDatasetReportsLine) {
  std::ofstream(path("bad.jsonl")) << "{\"skills\":[\"a\"],\"salary\":3}\n{\"skills\":5}\n";
  const Outcome r = run({"mine", "--data", path("bad.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2:"), std::string::npos) << r.err;
}

TEST_F(CliTest, GenDataMineAndGraph) {
  ASSERT_EQ(run({"gen-data", "--out", path("syn.jsonl"), "--spec-out", path("spec.json"), "--n-skills",
                 "20", "--groups", "2", "--samples", "200", "--seed", "3"})
                .code,
            0);
  std::ifstream in(path("syn.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 200);
  EXPECT_EQ(json::parse(slurp(path("spec.json")))["groups"].size(), 2u);

  const Outcome mined = run({"mine", "--data", path("syn.jsonl"), "--min-support", "0.1"});
  ASSERT_EQ(mined.code, 0) << mined.err;
  EXPECT_FALSE(json::parse(mined.out).empty());

  ASSERT_EQ(run({"build-graph", "--data", path("syn.jsonl"), "--out", path("graph.json")}).code, 0);
  EXPECT_TRUE(json::parse(slurp(path("graph.json"))).is_object());
}

TEST_F(CliTest, TrainEvaluateExplainExport) {
  const std::string data = write_context_data(150);
  const std::string config = write_tiny_config();
  const std::string ckpt = path("ckpt");

  const Outcome trained =
      run({"train", "--data", data, "--config", config, "--out", ckpt, "--min-support", "0.05"});
  ASSERT_EQ(trained.code, 0) << trained.err;
  const json summary = json::parse(trained.out);
  EXPECT_TRUE(summary.contains("val"));
  EXPECT_TRUE(fs::exists(fs::path(ckpt) / "manifest.json"));
  EXPECT_TRUE(fs::exists(fs::path(ckpt) / "tensors.bin"));
  EXPECT_TRUE(fs::exists(fs::path(ckpt) / "train_report.json"));

  const Outcome ev = run({"eval", "--data", data, "--ckpt", ckpt, "--cohesion", "--resamples", "5"});
  ASSERT_EQ(ev.code, 0) << ev.err;
  const json report = json::parse(ev.out);
  EXPECT_GE(report["rmse"].get<double>(), report["mae"].get<double>());
  EXPECT_TRUE(report.contains("cohesion"));

  const Outcome ex = run({"explain", "--ckpt", ckpt, "--skills", "skill1,skill7", "--levels", "senior,-",
                      "--context", R"({"city":"east","experience":4})"});
  ASSERT_EQ(ex.code, 0) << ex.err;
  const json e = json::parse(ex.out);
  EXPECT_EQ(e["prototype_matches"].size(), 3u);
  EXPECT_EQ(e["input"]["skills"][0]["level"], "senior");
  EXPECT_TRUE(e["input"]["skills"][1]["level"].is_null());

  const Outcome unknown = run({"explain", "--ckpt", ckpt, "--skills", "skill1,cobol"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("cobol"), std::string::npos);
  EXPECT_EQ(run({"explain", "--ckpt", ckpt, "--skills", "skill1", "--levels", "a,b"}).code, 1);
  EXPECT_EQ(run({"explain", "--ckpt", ckpt, "--skills", "skill1", "--context", "{oops"}).code, 1);

  ASSERT_EQ(run({"export-prototypes", "--ckpt", ckpt, "--out", path("protos.json")}).code, 0);
  EXPECT_EQ(json::parse(slurp(path("protos.json"))).size(), 3u);

  const Outcome num = run({"context-curves", "--ckpt", ckpt, "--field", "experience", "--points", "4"});
  ASSERT_EQ(num.code, 0) << num.err;
  const Outcome cat = run({"context-curves", "--ckpt", ckpt, "--field", "city"});
  ASSERT_EQ(cat.code, 0) << cat.err;
  EXPECT_NE(cat.out.find("south"), std::string::npos);
  EXPECT_EQ(run({"context-curves", "--ckpt", ckpt, "--field", "altitude"}).code, 1);
}

TEST_F(CliTest, TrainRejectsBadConfig) {
  const std::string data = write_context_data(40);
  std::ofstream(path("cfg.json")) << R"({"total_epochs": 0})";
  EXPECT_EQ(run({"train", "--data", data, "--config", path("cfg.json"), "--out", path("c")}).code, 1);
  EXPECT_EQ(run({"train", "--data", data, "--variant", "wo_everything", "--out", path("c")}).code, 1);
}

TEST_F(CliTest, WithoutPrototypesHasNothingToExport) {
  const std::string data = write_context_data(80);
  const std::string ckpt = path("ckpt");
  ASSERT_EQ(run({"train", "--data", data, "--config", write_tiny_config(), "--variant", "wo_prot", "--out",
                 ckpt})
                .code,
            0);
  const Outcome r = run({"export-prototypes", "--ckpt", ckpt});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("prototypes"), std::string::npos);
}

}  // namespace
}  // namespace setproto
