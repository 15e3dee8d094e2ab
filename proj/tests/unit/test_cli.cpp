// Copyright 2026 The docgat Authors
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

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "docgat/checkpoint.hpp"
#include "docgat/cli.hpp"
#include "docgat/corpus.hpp"
#include "docgat/errors.hpp"
#include "docgat/log.hpp"

namespace docgat {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(RunConfig, MergeRejectsUnknownKeysAndWrongTypes) {
  EXPECT_NO_THROW(cli::merge_config(json::object()));
  EXPECT_THROW(cli::merge_config({{"encoder", {{"depth", 3}}}}), ConfigError);
  EXPECT_THROW(cli::merge_config({{"bogus", 1}}), ConfigError);
  EXPECT_THROW(cli::merge_config({{"optim", {{"steps", -1}}}}), ConfigError);
  EXPECT_THROW(cli::merge_config({{"optim", {{"lr", "fast"}}}}), ConfigError);
  EXPECT_THROW(cli::merge_config({{"encoder", 3}}), ConfigError);
  const auto merged = cli::merge_config({{"optim", {{"lr", 1}}}, {"encoder", {{"layers", 2}}}});
  EXPECT_EQ(merged["optim"]["lr"], 1);
  EXPECT_EQ(merged["optim"]["steps"], 1000);
  const auto rc = cli::make_run_config(merged);
  EXPECT_EQ(rc.model.encoder.residual_gate_layers, 2u);
  EXPECT_EQ(rc.hyper.peak_lr, 1.0);
}

TEST(RunConfig, DefaultsMirrorThePublishedSetup) {
  const auto rc = cli::make_run_config(cli::merge_config(json::object()));
  EXPECT_EQ(rc.model.encoder.layers, 12u);
  EXPECT_EQ(rc.model.encoder.model_dim, 768u);
  EXPECT_EQ(rc.model.encoder.heads, 12u);
  EXPECT_EQ(rc.model.encoder.top_k, 36u);
  EXPECT_EQ(rc.hyper.peak_lr, 5e-5);
  EXPECT_EQ(rc.hyper.warmup_fraction, 0.1);
  EXPECT_EQ(rc.policy.select_prob, 0.15);
}

TEST(RunConfig, Overrides) {
  auto config = cli::merge_config(json::object());
  cli::apply_override(config, "encoder.top_k", "8");
  cli::apply_override(config, "encoder.use_gat", "false");
  cli::apply_override(config, "out", "123");
  cli::apply_override(config, "optim.lr", "1e-3");
  EXPECT_EQ(config["encoder"]["top_k"], 8);
  EXPECT_EQ(config["encoder"]["use_gat"], false);
  EXPECT_EQ(config["out"], "123");
  EXPECT_EQ(config["optim"]["lr"], 1e-3);
  EXPECT_THROW(cli::apply_override(config, "encoder.nope", "1"), ConfigError);
  EXPECT_THROW(cli::apply_override(config, "encoder", "1"), ConfigError);
  EXPECT_THROW(cli::apply_override(config, "encoder.top_k", "many"), ConfigError);
  const auto paths = cli::config_paths();
  EXPECT_NE(std::find(paths.begin(), paths.end(), "msm.layout_free_target"), paths.end());
}

TEST(RunConfig, SemanticValidation) {
  auto bad = [](json j) { return cli::make_run_config(cli::merge_config(j)); };
  EXPECT_THROW(bad({{"embeddings", {{"provider", "bert"}}}}), ConfigError);
  EXPECT_THROW(bad({{"embeddings", {{"provider", "precomputed"}}}}), ConfigError);
  EXPECT_THROW(bad({{"encoder", {{"d", 25}}}}), ConfigError);
  EXPECT_THROW(bad({{"msm", {{"select_prob", 1.5}}}}), ConfigError);
  EXPECT_THROW(bad({{"task", {{"name", "ner"}}}}), ConfigError);
  EXPECT_THROW(bad({{"optim", {{"batch_size", 0}}}}), ConfigError);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("docgat_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_corpus(dir_ / "corpus.jsonl", gen_synthetic({4, 6, 2, 3}));
    std::ofstream(dir_ / "config.json") << json{
        {"encoder", {{"layers", 1}, {"d", 12}, {"heads", 2}, {"top_k", 3}}},
        {"embeddings", {{"text_dim", 8}, {"visual_dim", 4}}},
        {"optim", {{"lr", 1e-3}, {"steps", 4}, {"batch_size", 2}}},
        {"data", {{"corpus", (dir_ / "corpus.jsonl").string()}}}}.dump();
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    log::ScopedSink quiet([](log::Level, const std::string&) {});
    args.insert(args.begin(), "docgat");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
  }
  std::string cfg() const { return (dir_ / "config.json").string(); }
  std::string out(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, PretrainWithZeroStepsWritesTheInitialCheckpoint) {
  ASSERT_EQ(run({"pretrain", "--config", cfg(), "--steps", "0", "--out", out("p0")}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "p0" / "checkpoint.bin"));
  EXPECT_EQ(slurp(dir_ / "p0" / "train_log.jsonl"), "");
}

TEST_F(CliTest, PretrainIsDeterministic) {
  const auto corpus_before = slurp(dir_ / "corpus.jsonl");
  ASSERT_EQ(run({"pretrain", "--config", cfg(), "--out", out("a")}), 0);
  ASSERT_EQ(run({"pretrain", "--config", cfg(), "--out", out("b")}), 0);
  const auto log = slurp(dir_ / "a" / "train_log.jsonl");
  EXPECT_EQ(log, slurp(dir_ / "b" / "train_log.jsonl"));
  EXPECT_EQ(slurp(dir_ / "a" / "checkpoint.bin"), slurp(dir_ / "b" / "checkpoint.bin"));
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 4);
  const auto first = json::parse(log.substr(0, log.find('\n')));
  for (const char* key : {"step", "lr", "loss", "masked_count"}) EXPECT_TRUE(first.contains(key)) << key;
  EXPECT_EQ(slurp(dir_ / "corpus.jsonl"), corpus_before);
  ASSERT_EQ(run({"pretrain", "--config", cfg(), "--seed", "9", "--out", out("c")}), 0);
  EXPECT_NE(slurp(dir_ / "c" / "checkpoint.bin"), slurp(dir_ / "a" / "checkpoint.bin"));
}

TEST_F(CliTest, ExitCodes) {
  std::ofstream(dir_ / "bad.json") << R"({"encoder":{"depth":2}})";
  EXPECT_EQ(run({"pretrain", "--config", out("bad.json")}), 2);
  std::ofstream(dir_ / "broken.json") << "{";
  EXPECT_EQ(run({"pretrain", "--config", out("broken.json")}), 2);
  EXPECT_EQ(run({"pretrain", "--config", cfg(), "--corpus", out("missing.jsonl"), "--out", out("x")}), 3);
  EXPECT_EQ(run({"pretrain", "--config", cfg(), "--no-such-flag"}), 2);
  EXPECT_EQ(run({"eval", "--config", cfg(), "--out", out("x")}), 2);
  EXPECT_EQ(run({"inspect-graph", "--config", cfg(), "--doc-id", "nope", "--out", out("x")}), 3);
}

TEST_F(CliTest, FinetuneEvalAndResume) {
  ASSERT_EQ(run({"pretrain", "--config", cfg(), "--out", out("pre")}), 0);
  ASSERT_EQ(run({"finetune", "--config", cfg(), "--checkpoint", out("pre/checkpoint.bin"), "--out", out("ft")}), 0);
  const auto metrics = json::parse(slurp(dir_ / "ft" / "metrics.json"));
  EXPECT_EQ(metrics["task"], "entity");
  EXPECT_TRUE(metrics.contains("micro"));

  ASSERT_EQ(run({"eval", "--config", cfg(), "--checkpoint", out("ft/checkpoint.bin"), "--out", out("e1")}), 0);
  ASSERT_EQ(run({"eval", "--config", cfg(), "--checkpoint", out("ft/checkpoint.bin"), "--out", out("e2")}), 0);
  EXPECT_EQ(slurp(dir_ / "e1" / "metrics.json"), slurp(dir_ / "e2" / "metrics.json"));
  EXPECT_EQ(slurp(dir_ / "e1" / "metrics.json"), slurp(dir_ / "ft" / "metrics.json"));

  ASSERT_EQ(run({"finetune", "--config", cfg(), "--checkpoint", out("ft/checkpoint.bin"), "--optim.lr", "0", "--out",
                 out("again")}),
            0);
  EXPECT_EQ(slurp(dir_ / "again" / "checkpoint.bin"), slurp(dir_ / "ft" / "checkpoint.bin"));
  EXPECT_EQ(slurp(dir_ / "again" / "metrics.json"), slurp(dir_ / "ft" / "metrics.json"));

  // A checkpoint without a docclass head cannot be evaluated on that task.
  EXPECT_EQ(run({"eval", "--config", cfg(), "--checkpoint", out("ft/checkpoint.bin"), "--task", "docclass"}), 2);

  auto docs = gen_synthetic({4, 6, 2, 3});
  for (auto& d : docs)
    for (auto& r : d.regions) r.label.reset();
  write_corpus(dir_ / "unlabeled.jsonl", docs);
  EXPECT_EQ(run({"eval", "--config", cfg(), "--checkpoint", out("ft/checkpoint.bin"), "--corpus",
                 out("unlabeled.jsonl"), "--out", out("e3")}),
            3);
}

TEST_F(CliTest, SingleClassDocumentTaskIsTriviallyAccurate) {
  auto docs = gen_synthetic({3, 5, 1, 4});
  write_corpus(dir_ / "one.jsonl", docs);
  ASSERT_EQ(run({"finetune", "--config", cfg(), "--task", "docclass", "--corpus", out("one.jsonl"), "--out",
                 out("dc")}),
            0);
  EXPECT_EQ(json::parse(slurp(dir_ / "dc" / "metrics.json"))["accuracy"], 1.0);
}

TEST_F(CliTest, InspectGraphDumpsMaskAndAttention) {
  ASSERT_EQ(run({"inspect-graph", "--config", cfg(), "--doc-id", "doc0001", "--encoder.top_k", "50", "--out",
                 out("g0")}),
            0);
  const auto dense = json::parse(slurp(dir_ / "g0" / "graph.json"));
  EXPECT_TRUE(dense["all_true"].get<bool>());
  EXPECT_FALSE(fs::exists(dir_ / "g0" / "attention.bin"));

  ASSERT_EQ(run({"pretrain", "--config", cfg(), "--out", out("pre")}), 0);
  ASSERT_EQ(run({"inspect-graph", "--config", cfg(), "--doc-id", "doc0001", "--checkpoint",
                 out("pre/checkpoint.bin"), "--out", out("g1")}),
            0);
  const auto graph = json::parse(slurp(dir_ / "g1" / "graph.json"));
  EXPECT_EQ(graph["node_count"], 7);
  EXPECT_EQ(graph["nodes"].size(), 6u);
  for (const auto& node : graph["nodes"]) {
    EXPECT_EQ(node["neighbors"].size(), 3u);
    EXPECT_EQ(node["neighbors"][0], node["node"]);
  }
  const auto dump = read_container(dir_ / "g1" / "attention.bin");
  ASSERT_EQ(dump.tensors.size(), 2u);
  EXPECT_EQ(dump.tensors[0].first, "attn/layer0/head0");
  EXPECT_EQ(dump.tensors[1].first, "attn/layer0/head1");
  for (const auto& [name, a] : dump.tensors) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) s += a.at(r, c);
      EXPECT_NEAR(s, 1.0, 1e-6) << name;
    }
  }
}

TEST_F(CliTest, SynthWritesTheGeneratorOutput) {
  ASSERT_EQ(run({"synth", "--docs", "3", "--regions", "5", "--output", out("s.jsonl")}), 0);
  EXPECT_EQ(slurp(dir_ / "s.jsonl"), corpus_to_string(gen_synthetic({3, 5, 4, 0})));
}

}  // namespace
}  // namespace docgat
