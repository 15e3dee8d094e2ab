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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "docgat/heads.hpp"
#include "docgat/model.hpp"
#include "docgat/msm.hpp"

namespace docgat::cli {

// Run configuration file (JSON). Every key is optional; defaults come from
// default_config(). Keys:
//
//   seed, out
//   encoder.{layers, d, heads, top_k, fusion, residual_gate_layers, use_rpe, use_gat, scale_scores, standard_block}
//   embeddings.{provider: "stub"|"precomputed", dir, text_dim, visual_dim, seed, projection_bias}
//   optim.{lr, steps, warmup_fraction, clip_norm, batch_size, beta1, beta2, eps}
//   msm.{select_prob, mask_prob, random_prob, layout_free_target}
//   data.{corpus, checkpoint}
//   task.{name: "entity"|"docclass", exclude_label}
//   inspect.{doc_id}
//
// encoder.residual_gate_layers defaults to encoder.layers when unset.

nlohmann::json default_config();

/// Overlays `user` onto the defaults. Unknown keys and type mismatches raise
/// ConfigError naming the key path.
nlohmann::json merge_config(const nlohmann::json& user);

/// Sets a dotted key path from command-line text. String-typed keys take the
/// text verbatim; everything else is parsed as JSON.
void apply_override(nlohmann::json& config, const std::string& path, const std::string& text);

/// Dotted paths of every leaf key in the schema.
std::vector<std::string> config_paths();

struct RunConfig {
  ModelConfig model;
  std::string provider = "stub";
  std::filesystem::path embeddings_dir;
  std::uint64_t provider_seed = 0;
  TrainHyper hyper;
  std::size_t batch_size = 8;
  MsmPolicy policy;
  MsmOptions msm;
  std::filesystem::path corpus;
  std::filesystem::path checkpoint;
  FinetuneTask task = FinetuneTask::entity;
  std::string exclude_label;
  std::string doc_id;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";

  nlohmann::json json;  // the merged configuration it was built from
};

/// Validates a merged configuration and converts it.
RunConfig make_run_config(const nlohmann::json& merged);

std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& config);

struct PretrainResult {
  std::vector<StepResult> steps;
  std::filesystem::path checkpoint;
};

struct FinetuneResult {
  std::vector<StepResult> steps;
  TaskMetrics metrics;
  std::filesystem::path checkpoint;
};

PretrainResult cmd_pretrain(const RunConfig& config);
FinetuneResult cmd_finetune(const RunConfig& config);
TaskMetrics cmd_eval(const RunConfig& config);
/// Writes graph.json and, when a checkpoint is configured, attention.bin.
void cmd_inspect_graph(const RunConfig& config);

/// Entry point used by the docgat executable. Returns the process exit code:
/// 0 success, 2 configuration error, 3 data error, 4 numeric failure.
int run(int argc, char** argv);

}  // namespace docgat::cli
