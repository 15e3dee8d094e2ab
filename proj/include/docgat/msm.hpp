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
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "docgat/model.hpp"
#include "docgat/optim.hpp"

namespace docgat {

enum class MaskAction { keep, mask_symbol, random_replace, unchanged_selected };

struct RegionMask {
  MaskAction action = MaskAction::keep;
  // Source of the replacement text for random_replace.
  std::size_t donor_doc = 0;
  std::size_t donor_region = 0;

  bool selected() const { return action != MaskAction::keep; }
};

/// Per-region decisions for one document; regions[i] is node i + 1. The
/// global node is never selected.
struct MaskAssignment {
  std::vector<RegionMask> regions;

  std::size_t selected_count() const;
  std::vector<std::size_t> selected_nodes() const;
};

struct MsmPolicy {
  double select_prob = 0.15;
  double mask_prob = 0.8;
  double random_prob = 0.1;  // the remainder keeps the original text

  void validate() const;
};

/// Independent Bernoulli(select_prob) selection per region, then a
/// categorical mask/random/unchanged draw. Random replacements come from a
/// region of another document in the batch; a single-document batch draws
/// from the other regions of the same document.
std::vector<MaskAssignment> sample_msm_masks(std::span<const std::size_t> region_counts, const MsmPolicy& policy,
                                             std::mt19937_64& rng);

/// Sentence embeddings of `batch[doc_index]` under `mask`: mask_symbol rows
/// become embed.mask_token + l_i, random_replace rows take the donor's
/// projected text + l_i, everything else is unchanged.
Tensor masked_sentence_embeddings(std::span<const PreparedDocument* const> batch, std::size_t doc_index,
                                  const MaskAssignment& mask, const Tensor& layout, const ParameterRegistry& params);

struct MaskedBatch {
  std::vector<MaskAssignment> assignments;
  std::vector<Tensor> masked_sentences;
};

MaskedBatch apply_msm_mask(std::span<const PreparedDocument* const> batch, const ParameterRegistry& params,
                           const MsmPolicy& policy, std::uint64_t seed);

struct MsmOptions {
  // Regress s_i - l_i instead of s_i.
  bool layout_free_target = false;
};

/// Mean smooth-L1 between targets (detached) and head.msm predictions over
/// `selected` rows of `hidden`. Returns the per-component differences so a
/// batch can be reduced jointly; see msm_batch_loss.
Tensor msm_differences(const Tensor& hidden, const Tensor& targets, std::span<const std::size_t> selected,
                       const ParameterRegistry& params);

Tensor msm_loss(const Tensor& hidden, const Tensor& targets, std::span<const std::size_t> selected,
                const ParameterRegistry& params);

struct MsmBatchLoss {
  Tensor loss;  // undefined when nothing was selected
  std::size_t selected = 0;
};

MsmBatchLoss msm_batch_loss(std::span<const PreparedDocument* const> batch, std::span<const MaskAssignment> masks,
                            const ParameterRegistry& params, const ModelConfig& config, const MsmOptions& options);

struct TrainHyper {
  double peak_lr = 5e-5;
  std::size_t total_steps = 1000;
  double warmup_fraction = 0.1;
  double clip_norm = 1.0;
  AdamConfig adam;
};

struct StepResult {
  std::size_t step = 0;
  double lr = 0.0;
  double loss = 0.0;
  std::size_t masked_count = 0;
  double grad_norm = 0.0;
  bool skipped = false;
};

/// Masked Sentence Modeling trainer. Owns the masking RNG and optimizer
/// state; mutates `params` in place.
class MsmTrainer {
 public:
  MsmTrainer(ModelConfig config, ParameterRegistry& params, TrainHyper hyper, MsmPolicy policy, MsmOptions options,
             std::uint64_t seed);

  /// One forward/backward/update on `batch`. Throws NumericError on a
  /// non-finite loss or gradient.
  StepResult train_step(std::span<const PreparedDocument* const> batch);

  std::size_t step() const { return step_; }
  std::size_t skipped_steps() const { return skipped_; }

 private:
  ModelConfig config_;
  ParameterRegistry& params_;
  TrainHyper hyper_;
  MsmPolicy policy_;
  MsmOptions options_;
  LinearWarmupDecay schedule_;
  Adam adam_;
  std::mt19937_64 rng_;
  std::size_t step_ = 0;
  std::size_t skipped_ = 0;
};

/// Loss under a fixed-seed mask over the whole set, without updates.
double evaluate_msm_loss(std::span<const PreparedDocument> docs, const ParameterRegistry& params,
                         const ModelConfig& config, const MsmPolicy& policy, const MsmOptions& options,
                         std::uint64_t seed);

}  // namespace docgat
