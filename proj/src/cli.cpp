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

#include "docgat/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "docgat/checkpoint.hpp"
#include "docgat/corpus.hpp"
#include "docgat/errors.hpp"
#include "docgat/log.hpp"

namespace docgat::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kHeadSeedSalt = 0x68656164ULL;

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

bool type_compatible(const json& schema, const json& value) {
  switch (schema.type()) {
    case json::value_t::string:
      return value.is_string();
    case json::value_t::boolean:
      return value.is_boolean();
    case json::value_t::number_unsigned:
    case json::value_t::number_integer:
      return value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0);
    case json::value_t::number_float:
      return value.is_number();
    case json::value_t::null:  // optional non-negative integer
      return value.is_null() || value.is_number_unsigned() ||
             (value.is_number_integer() && value.get<std::int64_t>() >= 0);
    default:
      return false;
  }
}

std::string expected_type(const json& schema) {
  switch (schema.type()) {
    case json::value_t::string:
      return "a string";
    case json::value_t::boolean:
      return "a boolean";
    case json::value_t::number_float:
      return "a number";
    default:
      return "a non-negative integer";
  }
}

void merge_into(json& target, const json& user, const json& schema, const std::string& path) {
  if (!user.is_object()) throw ConfigError((path.empty() ? "configuration" : path) + ": expected an object");
  for (const auto& [key, value] : user.items()) {
    const auto full = join_path(path, key);
    const auto it = schema.find(key);
    if (it == schema.end()) throw ConfigError("unknown configuration key '" + full + "'");
    if (it->is_object()) {
      merge_into(target[key], value, *it, full);
    } else if (!type_compatible(*it, value)) {
      throw ConfigError(full + ": expected " + expected_type(*it) + ", got " + value.dump());
    } else {
      target[key] = value;
    }
  }
}

void collect_paths(const json& node, const std::string& path, std::vector<std::string>& out) {
  for (const auto& [key, value] : node.items()) {
    if (value.is_object()) {
      collect_paths(value, join_path(path, key), out);
    } else {
      out.push_back(join_path(path, key));
    }
  }
}

const json* schema_leaf(const json& schema, const std::string& path) {
  const json* node = &schema;
  std::istringstream parts(path);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (!node->is_object()) return nullptr;
    const auto it = node->find(part);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return node->is_object() ? nullptr : node;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

ModelConfig model_from_metadata(const json& meta, const std::filesystem::path& source) {
  if (!meta.is_object() || !meta.contains("encoder")) {
    throw CheckpointError(source.string() + ": checkpoint metadata has no encoder configuration");
  }
  ModelConfig m;
  try {
    encoder_config_from_json(meta.at("encoder"), m.encoder);
    m.text_dim = meta.at("text_dim").get<std::size_t>();
    m.visual_dim = meta.at("visual_dim").get<std::size_t>();
    m.projection_bias = meta.at("projection_bias").get<bool>();
  } catch (const json::exception& e) {
    throw CheckpointError(source.string() + ": bad checkpoint metadata: " + e.what());
  }
  m.validate();
  return m;
}

json model_metadata(const ModelConfig& m, const json& labels) {
  return {{"encoder", encoder_config_to_json(m.encoder)},
          {"text_dim", m.text_dim},
          {"visual_dim", m.visual_dim},
          {"projection_bias", m.projection_bias},
          {"labels", labels.is_object() ? labels : json::object()}};
}

std::vector<DocumentRecord> load_run_corpus(const RunConfig& config) {
  require(!config.corpus.empty(), "data.corpus is required");
  auto docs = load_corpus(config.corpus);
  if (docs.empty()) throw DataError(config.corpus.string() + ": corpus is empty");
  return docs;
}

struct LoadedModel {
  ModelConfig model;
  ParameterRegistry params;
  json labels = json::object();
};

LoadedModel load_model(const RunConfig& config) {
  LoadedModel out;
  json meta;
  out.params = load_checkpoint(config.checkpoint, &meta);
  out.model = model_from_metadata(meta, config.checkpoint);
  if (encoder_config_to_json(out.model.encoder) != encoder_config_to_json(config.model.encoder)) {
    log::warn("using the encoder configuration stored in " + config.checkpoint.string() +
              "; the run configuration's encoder section is ignored");
  }
  if (meta.contains("labels") && meta["labels"].is_object()) out.labels = meta["labels"];
  return out;
}

std::vector<const PreparedDocument*> batch_at(const std::vector<PreparedDocument>& docs, std::size_t step,
                                              std::size_t batch_size) {
  const auto n = docs.size();
  const auto take = std::min(batch_size, n);
  std::vector<const PreparedDocument*> batch;
  batch.reserve(take);
  const auto start = (step * batch_size) % n;
  for (std::size_t i = 0; i < take; ++i) batch.push_back(&docs[(start + i) % n]);
  return batch;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

void prepare_out_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw DataError("cannot create output directory " + config.out.string() + ": " + ec.message());
  write_json(config.out / "config.json", config.json);
}

json step_record(const StepResult& r, bool with_masked) {
  json j{{"step", r.step}, {"lr", r.lr}};
  j["loss"] = r.skipped ? json(nullptr) : json(r.loss);
  if (with_masked) j["masked_count"] = r.masked_count;
  return j;
}

LabelSet task_labels(FinetuneTask task, std::span<const DocumentRecord> docs, const json& stored) {
  const auto key = to_string(task);
  if (stored.contains(key)) return LabelSet(stored[key].get<std::vector<std::string>>());
  return task == FinetuneTask::entity ? collect_entity_labels(docs) : collect_doc_labels(docs);
}

std::vector<std::vector<std::size_t>> task_targets(FinetuneTask task, std::span<const DocumentRecord> docs,
                                                   const LabelSet& labels) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    if (task == FinetuneTask::entity) {
      out.push_back(entity_targets(d, labels));
    } else {
      out.push_back({doc_target(d, labels)});
    }
  }
  return out;
}

std::optional<std::size_t> excluded_label(const RunConfig& config, const LabelSet& labels) {
  if (config.task != FinetuneTask::entity || config.exclude_label.empty()) return std::nullopt;
  return labels.find(config.exclude_label);
}

}  // namespace

json default_config() {
  auto encoder = encoder_config_to_json(EncoderConfig{});
  encoder["residual_gate_layers"] = nullptr;
  const TrainHyper hyper;
  const MsmPolicy policy;
  return {{"seed", 0},
          {"out", "out"},
          {"encoder", encoder},
          {"embeddings",
           {{"provider", "stub"}, {"dir", ""}, {"text_dim", 384}, {"visual_dim", 256}, {"seed", 0},
            {"projection_bias", true}}},
          {"optim",
           {{"lr", hyper.peak_lr},
            {"steps", hyper.total_steps},
            {"warmup_fraction", hyper.warmup_fraction},
            {"clip_norm", hyper.clip_norm},
            {"batch_size", 8},
            {"beta1", hyper.adam.beta1},
            {"beta2", hyper.adam.beta2},
            {"eps", hyper.adam.eps}}},
          {"msm",
           {{"select_prob", policy.select_prob},
            {"mask_prob", policy.mask_prob},
            {"random_prob", policy.random_prob},
            {"layout_free_target", false}}},
          {"data", {{"corpus", ""}, {"checkpoint", ""}}},
          {"task", {{"name", "entity"}, {"exclude_label", "other"}}},
          {"inspect", {{"doc_id", ""}}}};
}

json merge_config(const json& user) {
  const auto schema = default_config();
  auto merged = schema;
  if (!user.is_null()) merge_into(merged, user, schema, "");
  return merged;
}

void apply_override(json& config, const std::string& path, const std::string& text) {
  const auto schema = default_config();
  const json* leaf = schema_leaf(schema, path);
  if (!leaf) throw ConfigError("unknown configuration key '" + path + "'");
  json value;
  if (leaf->is_string()) {
    value = text;
  } else {
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      throw ConfigError(path + ": cannot parse '" + text + "'");
    }
  }
  json nested = value;
  std::vector<std::string> parts;
  std::istringstream in(path);
  for (std::string p; std::getline(in, p, '.');) parts.push_back(p);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) nested = json{{*it, nested}};
  merge_into(config, nested, schema, "");
}

std::vector<std::string> config_paths() {
  std::vector<std::string> out;
  collect_paths(default_config(), "", out);
  return out;
}

RunConfig make_run_config(const json& merged) {
  RunConfig c;
  c.json = merged;
  auto encoder = merged.at("encoder");
  if (encoder["residual_gate_layers"].is_null()) encoder.erase("residual_gate_layers");
  encoder_config_from_json(encoder, c.model.encoder);

  const auto& emb = merged.at("embeddings");
  c.provider = emb.at("provider").get<std::string>();
  require(c.provider == "stub" || c.provider == "precomputed",
          "embeddings.provider must be \"stub\" or \"precomputed\", got \"" + c.provider + "\"");
  c.embeddings_dir = emb.at("dir").get<std::string>();
  require(c.provider != "precomputed" || !c.embeddings_dir.empty(), "embeddings.dir is required for precomputed");
  c.model.text_dim = emb.at("text_dim").get<std::size_t>();
  c.model.visual_dim = emb.at("visual_dim").get<std::size_t>();
  c.model.projection_bias = emb.at("projection_bias").get<bool>();
  c.provider_seed = emb.at("seed").get<std::uint64_t>();
  c.model.validate();

  const auto& optim = merged.at("optim");
  c.hyper.peak_lr = optim.at("lr").get<double>();
  c.hyper.total_steps = optim.at("steps").get<std::size_t>();
  c.hyper.warmup_fraction = optim.at("warmup_fraction").get<double>();
  c.hyper.clip_norm = optim.at("clip_norm").get<double>();
  c.hyper.adam.beta1 = optim.at("beta1").get<double>();
  c.hyper.adam.beta2 = optim.at("beta2").get<double>();
  c.hyper.adam.eps = optim.at("eps").get<double>();
  c.batch_size = optim.at("batch_size").get<std::size_t>();
  require(c.hyper.peak_lr >= 0.0, "optim.lr must be non-negative");
  require(c.hyper.warmup_fraction >= 0.0 && c.hyper.warmup_fraction <= 1.0, "optim.warmup_fraction must lie in [0, 1]");
  require(c.hyper.clip_norm > 0.0, "optim.clip_norm must be positive");
  require(c.hyper.adam.beta1 >= 0.0 && c.hyper.adam.beta1 < 1.0, "optim.beta1 must lie in [0, 1)");
  require(c.hyper.adam.beta2 >= 0.0 && c.hyper.adam.beta2 < 1.0, "optim.beta2 must lie in [0, 1)");
  require(c.hyper.adam.eps > 0.0, "optim.eps must be positive");
  require(c.batch_size >= 1, "optim.batch_size must be at least 1");

  const auto& msm = merged.at("msm");
  c.policy.select_prob = msm.at("select_prob").get<double>();
  c.policy.mask_prob = msm.at("mask_prob").get<double>();
  c.policy.random_prob = msm.at("random_prob").get<double>();
  c.policy.validate();
  c.msm.layout_free_target = msm.at("layout_free_target").get<bool>();

  c.corpus = merged.at("data").at("corpus").get<std::string>();
  c.checkpoint = merged.at("data").at("checkpoint").get<std::string>();
  c.task = parse_finetune_task(merged.at("task").at("name").get<std::string>());
  c.exclude_label = merged.at("task").at("exclude_label").get<std::string>();
  c.doc_id = merged.at("inspect").at("doc_id").get<std::string>();
  c.seed = merged.at("seed").get<std::uint64_t>();
  c.out = merged.at("out").get<std::string>();
  require(!c.out.empty(), "out must not be empty");
  return c;
}

std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& config) {
  if (config.provider == "precomputed") {
    return std::make_unique<PrecomputedEmbeddingProvider>(config.embeddings_dir, config.model.text_dim,
                                                          config.model.visual_dim);
  }
  return make_stub_provider(config.model, config.provider_seed);
}

PretrainResult cmd_pretrain(const RunConfig& config) {
  const auto docs = load_run_corpus(config);
  const auto provider = make_provider(config);
  const auto prepared = prepare_corpus(docs, *provider, config.model);

  auto params = init_model_parameters(config.model, config.seed);
  std::mt19937_64 head_rng(config.seed ^ kHeadSeedSalt);
  add_msm_head(params, config.model.encoder.model_dim, head_rng);

  prepare_out_dir(config);
  auto log_file = open_output(config.out / "train_log.jsonl");
  PretrainResult result;
  MsmTrainer trainer(config.model, params, config.hyper, config.policy, config.msm, config.seed);
  log::info("pretraining on " + std::to_string(docs.size()) + " documents for " +
            std::to_string(config.hyper.total_steps) + " steps");
  for (std::size_t step = 0; step < config.hyper.total_steps; ++step) {
    try {
      result.steps.push_back(trainer.train_step(batch_at(prepared, step, config.batch_size)));
    } catch (const NumericError& e) {
      json dump{{"error", e.what()}, {"step", step}, {"recent", json::array()}};
      const auto first = result.steps.size() > 5 ? result.steps.size() - 5 : 0;
      for (std::size_t i = first; i < result.steps.size(); ++i) dump["recent"].push_back(step_record(result.steps[i], true));
      write_json(config.out / "diagnostics.json", dump);
      throw;
    }
    log_file << step_record(result.steps.back(), true).dump() << '\n';
  }
  if (trainer.skipped_steps() > 0) {
    log::warn(std::to_string(trainer.skipped_steps()) + " steps selected no regions and were skipped");
  }
  result.checkpoint = config.out / "checkpoint.bin";
  save_checkpoint(params, result.checkpoint, model_metadata(config.model, json::object()));
  return result;
}

FinetuneResult cmd_finetune(const RunConfig& config) {
  const auto docs = load_run_corpus(config);
  LoadedModel loaded;
  if (config.checkpoint.empty()) {
    loaded.model = config.model;
    loaded.params = init_model_parameters(config.model, config.seed);
  } else {
    loaded = load_model(config);
  }
  const auto labels = task_labels(config.task, docs, loaded.labels);
  const auto targets = task_targets(config.task, docs, labels);
  ensure_task_head(loaded.params, config.task, loaded.model.encoder.model_dim, labels.size(),
                   config.seed ^ kHeadSeedSalt);
  loaded.labels[to_string(config.task)] = labels.names();

  RunConfig effective = config;
  effective.model = loaded.model;
  const auto provider = make_provider(effective);
  const auto prepared = prepare_corpus(docs, *provider, loaded.model);

  prepare_out_dir(config);
  auto log_file = open_output(config.out / "train_log.jsonl");
  FinetuneResult result;
  FinetuneTrainer trainer(loaded.model, loaded.params, config.task, config.hyper);
  for (std::size_t step = 0; step < config.hyper.total_steps; ++step) {
    const auto batch = batch_at(prepared, step, config.batch_size);
    std::vector<std::vector<std::size_t>> batch_targets;
    for (const auto* d : batch) batch_targets.push_back(targets[static_cast<std::size_t>(d - prepared.data())]);
    result.steps.push_back(trainer.train_step(batch, batch_targets));
    log_file << step_record(result.steps.back(), false).dump() << '\n';
  }
  result.metrics = evaluate_task(prepared, targets, config.task, labels, excluded_label(config, labels),
                                 loaded.params, loaded.model);
  write_json(config.out / "metrics.json", metrics_to_json(result.metrics));
  result.checkpoint = config.out / "checkpoint.bin";
  save_checkpoint(loaded.params, result.checkpoint, model_metadata(loaded.model, loaded.labels));
  return result;
}

TaskMetrics cmd_eval(const RunConfig& config) {
  require(!config.checkpoint.empty(), "data.checkpoint is required for eval");
  const auto docs = load_run_corpus(config);
  const auto loaded = load_model(config);
  const auto key = to_string(config.task);
  if (!loaded.labels.contains(key)) {
    throw ConfigError(config.checkpoint.string() + " has no " + key + " head; fine-tune it first");
  }
  const LabelSet labels(loaded.labels[key].get<std::vector<std::string>>());
  const auto targets = task_targets(config.task, docs, labels);

  RunConfig effective = config;
  effective.model = loaded.model;
  const auto provider = make_provider(effective);
  const auto prepared = prepare_corpus(docs, *provider, loaded.model);
  const auto metrics = evaluate_task(prepared, targets, config.task, labels, excluded_label(config, labels),
                                     loaded.params, loaded.model);
  prepare_out_dir(config);
  write_json(config.out / "metrics.json", metrics_to_json(metrics));
  return metrics;
}

void cmd_inspect_graph(const RunConfig& config) {
  require(!config.doc_id.empty(), "inspect.doc_id is required");
  const auto docs = load_run_corpus(config);
  const auto it = std::find_if(docs.begin(), docs.end(), [&](const DocumentRecord& d) { return d.id == config.doc_id; });
  if (it == docs.end()) throw DataError("unknown document id '" + config.doc_id + "'");

  std::optional<LoadedModel> loaded;
  if (!config.checkpoint.empty()) loaded = load_model(config);
  const ModelConfig model = loaded ? loaded->model : config.model;

  const auto boxes = normalized_region_boxes(*it);
  const auto graph = build_encoder_graph(boxes, model.encoder);
  json nodes = json::array();
  for (std::size_t i = 0; i < graph.neighbors.size(); ++i) {
    nodes.push_back({{"node", i + 1}, {"region_id", it->regions[i].id}, {"neighbors", graph.neighbors[i]}});
  }
  json mask = json::array();
  for (std::size_t r = 0; r < graph.mask.rows(); ++r) {
    std::string row(graph.mask.cols(), '0');
    for (std::size_t c = 0; c < graph.mask.cols(); ++c)
      if (graph.mask(r, c)) row[c] = '1';
    mask.push_back(row);
  }
  prepare_out_dir(config);
  write_json(config.out / "graph.json", {{"doc_id", it->id},
                                         {"node_count", graph.node_count},
                                         {"k", graph.k},
                                         {"all_true", graph.mask.all()},
                                         {"nodes", nodes},
                                         {"mask", mask}});
  if (!loaded) return;

  RunConfig effective = config;
  effective.model = model;
  const auto provider = make_provider(effective);
  const auto prepared = prepare_document(*it, *provider, model);
  NoGradGuard no_grad;
  const auto out = forward_document(prepared, loaded->params, model);
  TensorContainer dump;
  dump.metadata = {{"doc_id", it->id}, {"node_count", graph.node_count}};
  for (std::size_t l = 0; l < out.layers.size(); ++l) {
    for (std::size_t h = 0; h < out.layers[l].attention.size(); ++h) {
      dump.tensors.emplace_back("attn/layer" + std::to_string(l) + "/head" + std::to_string(h),
                                out.layers[l].attention[h]);
    }
  }
  write_container(config.out / "attention.bin", dump);
}

namespace {

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

int synth_command(const SyntheticSpec& spec, const std::string& output) {
  write_corpus(output, gen_synthetic(spec));
  log::info("wrote " + std::to_string(spec.docs) + " documents to " + output);
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Graph-attention document encoder: pretraining, fine-tuning, evaluation and graph inspection"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");

  std::map<std::string, std::string> overrides;
  std::map<std::string, CLI::Option*> override_options;
  for (const auto& path : config_paths()) {
    override_options[path] = app.add_option("--" + path, overrides[path])->group("Configuration overrides");
  }
  const std::map<std::string, std::string> aliases{{"seed", "seed"},         {"out", "out"},
                                                   {"steps", "optim.steps"}, {"lr", "optim.lr"},
                                                   {"corpus", "data.corpus"}, {"checkpoint", "data.checkpoint"},
                                                   {"task", "task.name"},    {"doc-id", "inspect.doc_id"}};
  std::map<std::string, std::string> alias_values;
  std::map<std::string, CLI::Option*> alias_options;
  for (const auto& [flag, path] : aliases) {
    if (override_options.count(flag)) continue;
    alias_options[flag] = app.add_option("--" + flag, alias_values[flag], "Same as --" + path);
  }

  auto* pretrain = app.add_subcommand("pretrain", "Masked sentence modeling pretraining");
  auto* finetune = app.add_subcommand("finetune", "Fine-tune on the entity or docclass task");
  auto* eval = app.add_subcommand("eval", "Evaluate a fine-tuned checkpoint");
  auto* inspect = app.add_subcommand("inspect-graph", "Dump a document's neighbor sets, mask and attention");
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  SyntheticSpec spec;
  std::string synth_output;
  synth->add_option("--docs", spec.docs)->check(CLI::PositiveNumber);
  synth->add_option("--regions", spec.regions_per_doc)->check(CLI::PositiveNumber);
  synth->add_option("--classes", spec.classes)->check(CLI::PositiveNumber);
  synth->add_option("--synth-seed", spec.seed);
  synth->add_option("--output", synth_output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return synth_command(spec, synth_output);

    json config = config_path.empty() ? json::object() : read_config_file(config_path);
    config = merge_config(config);
    for (const auto& [path, opt] : override_options)
      if (opt->count() > 0) apply_override(config, path, overrides[path]);
    for (const auto& [flag, opt] : alias_options)
      if (opt->count() > 0) apply_override(config, aliases.at(flag), alias_values[flag]);
    const auto run_config = make_run_config(config);

    if (pretrain->parsed()) {
      const auto result = cmd_pretrain(run_config);
      if (!result.steps.empty()) {
        std::ostringstream msg;
        msg << "final loss " << result.steps.back().loss << " after " << result.steps.size() << " steps";
        log::info(msg.str());
      }
    } else if (finetune->parsed()) {
      const auto result = cmd_finetune(run_config);
      log::info(to_string(run_config.task) + " train score " + std::to_string(result.metrics.headline()));
    } else if (eval->parsed()) {
      const auto metrics = cmd_eval(run_config);
      log::info(to_string(run_config.task) + " score " + std::to_string(metrics.headline()));
    } else if (inspect->parsed()) {
      cmd_inspect_graph(run_config);
    }
    return 0;
  } catch (const ConfigError& e) {
    log::error(std::string("configuration error: ") + e.what());
    return 2;
  } catch (const DataError& e) {
    log::error(std::string("data error: ") + e.what());
    return 3;
  } catch (const NumericError& e) {
    log::error(std::string("numeric failure: ") + e.what());
    return 4;
  } catch (const std::exception& e) {
    log::error(e.what());
    return 1;
  }
}

}  // namespace docgat::cli
