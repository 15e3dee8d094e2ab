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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "docgat/model.hpp"
#include "docgat/msm.hpp"

namespace docgat {

/// Ordered, unique label names.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws DataError naming `context` when the label is unknown.
  std::size_t index(std::string_view name, std::string_view context) const;

 private:
  std::vector<std::string> names_;
};

/// Sorted label sets observed in a corpus; DataError if none are labelled.
LabelSet collect_entity_labels(std::span<const DocumentRecord> docs);
LabelSet collect_doc_labels(std::span<const DocumentRecord> docs);

/// head.entity affine map over nodes 1..n: [n x C].
Tensor entity_logits(const Tensor& hidden, const ParameterRegistry& params);
/// head.doc affine map over the global node: [1 x C].
Tensor doc_logits(const Tensor& hidden, const ParameterRegistry& params);

std::vector<std::size_t> argmax_rows(const Tensor& logits);

std::vector<std::size_t> entity_targets(const DocumentRecord& doc, const LabelSet& labels);
std::size_t doc_target(const DocumentRecord& doc, const LabelSet& labels);

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

struct F1Report {
  PrfScore micro;
  std::map<std::string, PrfScore> per_label;
};

/// Region-level micro P/R/F1. Regions whose gold or predicted label is
/// `excluded` do not count as positives for that side.
F1Report entity_f1(std::span<const std::size_t> predicted, std::span<const std::size_t> gold, const LabelSet& labels,
                   std::optional<std::size_t> excluded);

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> gold);

enum class FinetuneTask { entity, docclass };

std::string to_string(FinetuneTask task);
FinetuneTask parse_finetune_task(std::string_view name);

/// Adds the head for `task` with `classes` outputs unless it already exists
/// with that shape; a differently shaped head raises ConfigError.
void ensure_task_head(ParameterRegistry& params, FinetuneTask task, std::size_t model_dim, std::size_t classes,
                      std::uint64_t seed);

/// Mean cross-entropy over the batch: every region for entity, one row per
/// document for docclass.
Tensor task_loss(std::span<const PreparedDocument* const> batch, std::span<const std::vector<std::size_t>> targets,
                 FinetuneTask task, const ParameterRegistry& params, const ModelConfig& config);

/// Trains every registered parameter on the task loss.
class FinetuneTrainer {
 public:
  FinetuneTrainer(ModelConfig config, ParameterRegistry& params, FinetuneTask task, TrainHyper hyper);

  StepResult train_step(std::span<const PreparedDocument* const> batch,
                        std::span<const std::vector<std::size_t>> targets);

  std::size_t step() const { return step_; }

 private:
  ModelConfig config_;
  ParameterRegistry& params_;
  FinetuneTask task_;
  TrainHyper hyper_;
  LinearWarmupDecay schedule_;
  Adam adam_;
  std::size_t step_ = 0;
};

/// Per-document argmax predictions without recording gradients.
std::vector<std::vector<std::size_t>> predict(std::span<const PreparedDocument> docs, FinetuneTask task,
                                              const ParameterRegistry& params, const ModelConfig& config);

struct TaskMetrics {
  FinetuneTask task = FinetuneTask::entity;
  std::optional<F1Report> f1;
  double accuracy = 0.0;
  std::size_t examples = 0;

  /// Score that reaches 1.0 on a perfect fit: micro F1 or accuracy.
  double headline() const { return f1 ? f1->micro.f1 : accuracy; }
};

TaskMetrics evaluate_task(std::span<const PreparedDocument> docs, std::span<const std::vector<std::size_t>> targets,
                          FinetuneTask task, const LabelSet& labels, std::optional<std::size_t> excluded,
                          const ParameterRegistry& params, const ModelConfig& config);

nlohmann::json metrics_to_json(const TaskMetrics& metrics);

}  // namespace docgat
