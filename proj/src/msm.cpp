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

#include "docgat/msm.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "docgat/errors.hpp"
#include "docgat/ops.hpp"

namespace docgat {

std::size_t MaskAssignment::selected_count() const {
  std::size_t n = 0;
  for (const auto& r : regions) n += r.selected() ? 1 : 0;
  return n;
}

std::vector<std::size_t> MaskAssignment::selected_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i].selected()) out.push_back(i + 1);
  return out;
}

void MsmPolicy::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(select_prob) || !in_unit(mask_prob) || !in_unit(random_prob) || mask_prob + random_prob > 1.0) {
    throw ConfigError("msm: probabilities must lie in [0, 1] with mask_prob + random_prob <= 1");
  }
}

std::vector<MaskAssignment> sample_msm_masks(std::span<const std::size_t> region_counts, const MsmPolicy& policy,
                                             std::mt19937_64& rng) {
  policy.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t docs = region_counts.size();
  std::vector<MaskAssignment> out(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    auto& regions = out[d].regions;
    regions.resize(region_counts[d]);
    for (std::size_t i = 0; i < regions.size(); ++i) {
      auto& r = regions[i];
      if (unit(rng) >= policy.select_prob) continue;
      const double u = unit(rng);
      if (u < policy.mask_prob) {
        r.action = MaskAction::mask_symbol;
      } else if (u < policy.mask_prob + policy.random_prob) {
        r.action = MaskAction::random_replace;
        if (docs > 1) {
          std::uniform_int_distribution<std::size_t> pick_doc(0, docs - 2);
          std::size_t donor = pick_doc(rng);
          if (donor >= d) ++donor;
          r.donor_doc = donor;
          r.donor_region = std::uniform_int_distribution<std::size_t>(0, region_counts[donor] - 1)(rng);
        } else {
          r.donor_doc = d;
          if (regions.size() > 1) {
            std::size_t j = std::uniform_int_distribution<std::size_t>(0, regions.size() - 2)(rng);
            if (j >= i) ++j;
            r.donor_region = j;
          } else {
            r.donor_region = i;
          }
        }
      } else {
        r.action = MaskAction::unchanged_selected;
      }
    }
  }
  return out;
}

Tensor masked_sentence_embeddings(std::span<const PreparedDocument* const> batch, std::size_t doc_index,
                                  const MaskAssignment& mask, const Tensor& layout, const ParameterRegistry& params) {
  const auto& doc = *batch[doc_index];
  const auto n = doc.region_count();
  if (mask.regions.size() != n) throw ShapeError("mask assignment does not match the document's region count");

  std::vector<Tensor> sources{doc.raw.text};
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> masked(n + 1, 0.0);
  bool any_masked = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = mask.regions[i];
    if (r.action == MaskAction::random_replace) {
      if (r.donor_doc >= batch.size()) throw ShapeError("random replacement donor document out of range");
      const auto& donor = batch[r.donor_doc]->raw.text;
      if (r.donor_region >= donor.rows()) throw ShapeError("random replacement donor out of range");
      rows[i] = n + sources.size() - 1;
      sources.push_back(slice(donor, 0, r.donor_region, r.donor_region + 1));
    } else if (r.action == MaskAction::mask_symbol) {
      masked[i + 1] = 1.0;
      any_masked = true;
    }
  }
  const Tensor raw = sources.size() == 1 ? doc.raw.text : gather_rows(concat(sources, 0), rows);
  Tensor text = sentence_text_part(raw, params);
  if (any_masked) {
    std::vector<double> keep(n + 1);
    for (std::size_t i = 0; i <= n; ++i) keep[i] = 1.0 - masked[i];
    const Tensor keep_col = Tensor::from_data({n + 1, 1}, std::move(keep));
    const Tensor mask_col = Tensor::from_data({n + 1, 1}, std::move(masked));
    text = add(mul(text, keep_col), matmul(mask_col, params.at("embed.mask_token")));
  }
  return add(text, layout);
}

MaskedBatch apply_msm_mask(std::span<const PreparedDocument* const> batch, const ParameterRegistry& params,
                           const MsmPolicy& policy, std::uint64_t seed) {
  if (batch.empty()) throw DataError("apply_msm_mask: empty batch");
  std::vector<std::size_t> counts;
  for (const auto* d : batch) counts.push_back(d->region_count());
  std::mt19937_64 rng(seed);
  MaskedBatch out;
  out.assignments = sample_msm_masks(counts, policy, rng);
  for (std::size_t d = 0; d < batch.size(); ++d) {
    const auto layout = layout_embed(batch[d]->layout.boxes, params.at("embed.layout.x_table"),
                                     params.at("embed.layout.y_table"));
    out.masked_sentences.push_back(masked_sentence_embeddings(batch, d, out.assignments[d], layout, params));
  }
  return out;
}

Tensor msm_differences(const Tensor& hidden, const Tensor& targets, std::span<const std::size_t> selected,
                       const ParameterRegistry& params) {
  const Tensor predicted =
      add(matmul(gather_rows(hidden, selected), params.at("head.msm.weight")), params.at("head.msm.bias"));
  return sub(gather_rows(targets.detach(), selected), predicted);
}

Tensor msm_loss(const Tensor& hidden, const Tensor& targets, std::span<const std::size_t> selected,
                const ParameterRegistry& params) {
  return smooth_l1(msm_differences(hidden, targets, selected, params));
}

MsmBatchLoss msm_batch_loss(std::span<const PreparedDocument* const> batch, std::span<const MaskAssignment> masks,
                            const ParameterRegistry& params, const ModelConfig& config, const MsmOptions& options) {
  if (masks.size() != batch.size()) throw ShapeError("msm_batch_loss: one mask assignment per document required");
  std::vector<Tensor> diffs;
  MsmBatchLoss out;
  for (std::size_t d = 0; d < batch.size(); ++d) {
    const auto selected = masks[d].selected_nodes();
    if (selected.empty()) continue;
    const auto e = embed_document(*batch[d], params);
    const Tensor masked = masked_sentence_embeddings(batch, d, masks[d], e.layout, params);
    const auto enc = encode_document(masked, e.visual, batch[d]->layout, params, config.encoder);
    const Tensor& targets = options.layout_free_target ? e.text_part : e.sentence;
    diffs.push_back(msm_differences(enc.hidden, targets, selected, params));
    out.selected += selected.size();
  }
  if (!diffs.empty()) out.loss = smooth_l1(diffs.size() == 1 ? diffs[0] : concat(diffs, 0));
  return out;
}

MsmTrainer::MsmTrainer(ModelConfig config, ParameterRegistry& params, TrainHyper hyper, MsmPolicy policy,
                       MsmOptions options, std::uint64_t seed)
    : config_(std::move(config)),
      params_(params),
      hyper_(hyper),
      policy_(policy),
      options_(options),
      schedule_(hyper.peak_lr, hyper.total_steps, hyper.warmup_fraction),
      adam_(hyper.adam),
      rng_(seed) {
  policy_.validate();
  if (!params_.contains("head.msm.weight")) throw ConfigError("MSM training needs the head.msm parameters");
}

StepResult MsmTrainer::train_step(std::span<const PreparedDocument* const> batch) {
  if (batch.empty()) throw DataError("train_step: empty batch");
  std::vector<std::size_t> counts;
  for (const auto* d : batch) counts.push_back(d->region_count());
  const auto masks = sample_msm_masks(counts, policy_, rng_);

  StepResult result;
  result.step = step_;
  result.lr = schedule_.at(step_);
  ++step_;

  auto batch_loss = msm_batch_loss(batch, masks, params_, config_, options_);
  result.masked_count = batch_loss.selected;
  if (!batch_loss.loss.defined()) {
    ++skipped_;
    result.skipped = true;
    return result;
  }
  result.loss = batch_loss.loss.item();
  if (!std::isfinite(result.loss)) {
    std::ostringstream msg;
    msg << "non-finite MSM loss at step " << result.step << " (lr " << result.lr << ", " << result.masked_count
        << " masked regions, first document '" << batch[0]->record->id << "')";
    throw NumericError(msg.str());
  }
  params_.zero_grad();
  batch_loss.loss.backward();
  try {
    result.grad_norm = apply_update(params_, adam_, result.lr, hyper_.clip_norm);
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " at step " + std::to_string(result.step));
  }
  return result;
}

double evaluate_msm_loss(std::span<const PreparedDocument> docs, const ParameterRegistry& params,
                         const ModelConfig& config, const MsmPolicy& policy, const MsmOptions& options,
                         std::uint64_t seed) {
  NoGradGuard no_grad;
  std::vector<const PreparedDocument*> batch;
  std::vector<std::size_t> counts;
  for (const auto& d : docs) {
    batch.push_back(&d);
    counts.push_back(d.region_count());
  }
  std::mt19937_64 rng(seed);
  const auto masks = sample_msm_masks(counts, policy, rng);
  const auto loss = msm_batch_loss(batch, masks, params, config, options);
  if (!loss.loss.defined()) throw DataError("evaluate_msm_loss: the evaluation mask selected no regions");
  return loss.loss.item();
}

}  // namespace docgat
