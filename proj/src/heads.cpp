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

#include "docgat/heads.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "docgat/errors.hpp"
#include "docgat/ops.hpp"

namespace docgat {

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ConfigError("label set is empty");
  std::set<std::string_view> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw ConfigError("duplicate label '" + n + "'");
  }
}

std::optional<std::size_t> LabelSet::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t LabelSet::index(std::string_view name, std::string_view context) const {
  if (auto i = find(name)) return *i;
  throw DataError(std::string(context) + ": unknown label '" + std::string(name) + "'");
}

LabelSet collect_entity_labels(std::span<const DocumentRecord> docs) {
  std::set<std::string> names;
  for (const auto& d : docs)
    for (const auto& r : d.regions)
      if (r.label) names.insert(*r.label);
  if (names.empty()) throw DataError("corpus has no region labels");
  return LabelSet({names.begin(), names.end()});
}

LabelSet collect_doc_labels(std::span<const DocumentRecord> docs) {
  std::set<std::string> names;
  for (const auto& d : docs)
    if (d.doc_class) names.insert(*d.doc_class);
  if (names.empty()) throw DataError("corpus has no document classes");
  return LabelSet({names.begin(), names.end()});
}

Tensor entity_logits(const Tensor& hidden, const ParameterRegistry& params) {
  if (hidden.rows() < 2) throw ShapeError("entity_logits: hidden state has no region rows");
  const Tensor regions = slice(hidden, 0, 1, hidden.rows());
  return add(matmul(regions, params.at("head.entity.weight")), params.at("head.entity.bias"));
}

Tensor doc_logits(const Tensor& hidden, const ParameterRegistry& params) {
  const Tensor global = slice(hidden, 0, 0, 1);
  return add(matmul(global, params.at("head.doc.weight")), params.at("head.doc.bias"));
}

std::vector<std::size_t> argmax_rows(const Tensor& logits) {
  std::vector<std::size_t> out(logits.rows());
  const auto c = logits.cols();
  const auto& v = logits.data();
  for (std::size_t r = 0; r < out.size(); ++r) {
    const auto row = v.begin() + static_cast<std::ptrdiff_t>(r * c);
    out[r] = static_cast<std::size_t>(std::max_element(row, row + static_cast<std::ptrdiff_t>(c)) - row);
  }
  return out;
}

std::vector<std::size_t> entity_targets(const DocumentRecord& doc, const LabelSet& labels) {
  std::vector<std::size_t> out;
  out.reserve(doc.regions.size());
  for (const auto& r : doc.regions) {
    if (!r.label) throw DataError("document '" + doc.id + "' region '" + r.id + "' has no label");
    out.push_back(labels.index(*r.label, "document '" + doc.id + "' region '" + r.id + "'"));
  }
  return out;
}

std::size_t doc_target(const DocumentRecord& doc, const LabelSet& labels) {
  if (!doc.doc_class) throw DataError("document '" + doc.id + "' has no doc_class");
  return labels.index(*doc.doc_class, "document '" + doc.id + "'");
}

namespace {

PrfScore make_score(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrfScore s;
  s.true_positives = tp;
  s.false_positives = fp;
  s.false_negatives = fn;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.f1 = s.precision + s.recall == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

}  // namespace

F1Report entity_f1(std::span<const std::size_t> predicted, std::span<const std::size_t> gold, const LabelSet& labels,
                   std::optional<std::size_t> excluded) {
  if (predicted.size() != gold.size()) {
    throw DataError("entity_f1: " + std::to_string(predicted.size()) + " predictions for " +
                    std::to_string(gold.size()) + " gold regions");
  }
  const auto c = labels.size();
  std::vector<std::size_t> tp(c, 0), fp(c, 0), fn(c, 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto p = predicted[i];
    const auto g = gold[i];
    if (p >= c || g >= c) throw DataError("entity_f1: label index out of range");
    if (p == g) {
      ++tp[g];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  F1Report report;
  std::size_t all_tp = 0, all_fp = 0, all_fn = 0;
  for (std::size_t l = 0; l < c; ++l) {
    if (excluded && *excluded == l) continue;
    report.per_label[labels.name(l)] = make_score(tp[l], fp[l], fn[l]);
    all_tp += tp[l];
    all_fp += fp[l];
    all_fn += fn[l];
  }
  report.micro = make_score(all_tp, all_fp, all_fn);
  return report;
}

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> gold) {
  if (predicted.size() != gold.size()) throw DataError("accuracy: prediction/gold size mismatch");
  if (gold.empty()) throw DataError("accuracy: no examples");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += predicted[i] == gold[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::string to_string(FinetuneTask task) { return task == FinetuneTask::entity ? "entity" : "docclass"; }

FinetuneTask parse_finetune_task(std::string_view name) {
  if (name == "entity") return FinetuneTask::entity;
  if (name == "docclass") return FinetuneTask::docclass;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected entity or docclass)");
}

void ensure_task_head(ParameterRegistry& params, FinetuneTask task, std::size_t model_dim, std::size_t classes,
                      std::uint64_t seed) {
  const std::string weight = task == FinetuneTask::entity ? "head.entity.weight" : "head.doc.weight";
  if (params.contains(weight)) {
    const auto& w = params.at(weight);
    if (w.rows() != model_dim || w.cols() != classes) {
      throw ConfigError(weight + " has shape " + shape_to_string(w.shape()) + " but the task needs [" +
                        std::to_string(model_dim) + "x" + std::to_string(classes) + "]");
    }
    return;
  }
  std::mt19937_64 rng(seed);
  if (task == FinetuneTask::entity) {
    add_entity_head(params, model_dim, classes, rng);
  } else {
    add_doc_head(params, model_dim, classes, rng);
  }
}

Tensor task_loss(std::span<const PreparedDocument* const> batch, std::span<const std::vector<std::size_t>> targets,
                 FinetuneTask task, const ParameterRegistry& params, const ModelConfig& config) {
  if (batch.empty()) throw DataError("task_loss: empty batch");
  if (targets.size() != batch.size()) throw ShapeError("task_loss: one target list per document required");
  std::vector<Tensor> logits;
  std::vector<std::size_t> labels;
  for (std::size_t d = 0; d < batch.size(); ++d) {
    const auto out = forward_document(*batch[d], params, config);
    logits.push_back(task == FinetuneTask::entity ? entity_logits(out.hidden, params) : doc_logits(out.hidden, params));
    if (logits.back().rows() != targets[d].size()) {
      throw DataError("document '" + batch[d]->record->id + "': " + std::to_string(targets[d].size()) +
                      " targets for " + std::to_string(logits.back().rows()) + " outputs");
    }
    labels.insert(labels.end(), targets[d].begin(), targets[d].end());
  }
  return cross_entropy(logits.size() == 1 ? logits[0] : concat(logits, 0), labels);
}

FinetuneTrainer::FinetuneTrainer(ModelConfig config, ParameterRegistry& params, FinetuneTask task, TrainHyper hyper)
    : config_(std::move(config)),
      params_(params),
      task_(task),
      hyper_(hyper),
      schedule_(hyper.peak_lr, hyper.total_steps, hyper.warmup_fraction),
      adam_(hyper.adam) {}

StepResult FinetuneTrainer::train_step(std::span<const PreparedDocument* const> batch,
                                       std::span<const std::vector<std::size_t>> targets) {
  StepResult result;
  result.step = step_;
  result.lr = schedule_.at(step_);
  ++step_;
  const Tensor loss = task_loss(batch, targets, task_, params_, config_);
  result.loss = loss.item();
  if (!std::isfinite(result.loss)) {
    std::ostringstream msg;
    msg << "non-finite " << to_string(task_) << " loss at step " << result.step << " (lr " << result.lr << ")";
    throw NumericError(msg.str());
  }
  params_.zero_grad();
  loss.backward();
  result.grad_norm = apply_update(params_, adam_, result.lr, hyper_.clip_norm);
  return result;
}

std::vector<std::vector<std::size_t>> predict(std::span<const PreparedDocument> docs, FinetuneTask task,
                                              const ParameterRegistry& params, const ModelConfig& config) {
  NoGradGuard no_grad;
  std::vector<std::vector<std::size_t>> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    const auto h = forward_document(d, params, config).hidden;
    out.push_back(argmax_rows(task == FinetuneTask::entity ? entity_logits(h, params) : doc_logits(h, params)));
  }
  return out;
}

TaskMetrics evaluate_task(std::span<const PreparedDocument> docs, std::span<const std::vector<std::size_t>> targets,
                          FinetuneTask task, const LabelSet& labels, std::optional<std::size_t> excluded,
                          const ParameterRegistry& params, const ModelConfig& config) {
  if (targets.size() != docs.size()) throw DataError("evaluate_task: one target list per document required");
  const auto predictions = predict(docs, task, params, config);
  std::vector<std::size_t> flat_pred, flat_gold;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (predictions[d].size() != targets[d].size()) throw DataError("evaluate_task: target count mismatch");
    flat_pred.insert(flat_pred.end(), predictions[d].begin(), predictions[d].end());
    flat_gold.insert(flat_gold.end(), targets[d].begin(), targets[d].end());
  }
  if (flat_gold.empty()) throw DataError("evaluate_task: no labelled examples");
  TaskMetrics m;
  m.task = task;
  m.examples = flat_gold.size();
  m.accuracy = accuracy(flat_pred, flat_gold);
  if (task == FinetuneTask::entity) m.f1 = entity_f1(flat_pred, flat_gold, labels, excluded);
  return m;
}

nlohmann::json metrics_to_json(const TaskMetrics& metrics) {
  auto score = [](const PrfScore& s) {
    return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                          {"tp", s.true_positives},   {"fp", s.false_positives}, {"fn", s.false_negatives}};
  };
  nlohmann::json j{{"task", to_string(metrics.task)}, {"examples", metrics.examples}, {"accuracy", metrics.accuracy}};
  if (metrics.f1) {
    j["micro"] = score(metrics.f1->micro);
    auto& per = j["per_label"];
    per = nlohmann::json::object();
    for (const auto& [name, s] : metrics.f1->per_label) per[name] = score(s);
  }
  return j;
}

}  // namespace docgat
