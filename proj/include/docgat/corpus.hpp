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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docgat/document.hpp"

namespace docgat {

// JSON-lines corpus, one document per line:
//   {"doc_class"?, "height", "id", "regions":[{"id","label"?,"quad":[8 numbers],"text"}], "width"}
// Regions may give "box":[x0,y0,x2,y2] instead of "quad". Output always
// uses "quad" with keys in sorted order.

std::vector<DocumentRecord> parse_corpus(std::istream& in, const std::string& source = "<stream>");
std::vector<DocumentRecord> load_corpus(const std::filesystem::path& path);

std::string document_to_json_line(const DocumentRecord& doc);
std::string corpus_to_string(std::span<const DocumentRecord> docs);
void write_corpus(const std::filesystem::path& path, std::span<const DocumentRecord> docs);

struct SyntheticSpec {
  std::size_t docs = 20;
  std::size_t regions_per_doc = 12;
  std::size_t classes = 4;
  std::uint64_t seed = 0;
};

/// Deterministic form-like corpus. Each document has a header naming its
/// class at the top, question/answer rows in the body (questions in the left
/// third of the page) and a footer. Region labels follow
/// synthetic_label_rule exactly.
std::vector<DocumentRecord> gen_synthetic(const SyntheticSpec& spec);

/// header above 10% of the page height, other below 90%, otherwise question
/// when the center lies in the left third and answer elsewhere.
std::string synthetic_label_rule(const DocumentRecord& doc, const RegionRecord& region);

inline const std::vector<std::string>& synthetic_entity_labels() {
  static const std::vector<std::string> labels{"answer", "header", "other", "question"};
  return labels;
}

}  // namespace docgat
