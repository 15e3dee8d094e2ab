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

#include "docgat/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "docgat/errors.hpp"
#include "docgat/log.hpp"
#include "docgat/random.hpp"

namespace docgat {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& source, std::size_t line, const std::string& doc_id,
                               const std::string& field, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": document '" << (doc_id.empty() ? "?" : doc_id) << "' field '" << field
      << "': " << what;
  throw DataError(msg.str());
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& source,
                std::size_t line, const std::string& doc_id, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      schema_error(source, line, doc_id, path + key, "unknown key");
    }
  }
}

double clamp_coord(double v, double extent, bool& clamped) {
  const double c = std::clamp(v, 0.0, extent);
  if (c != v) clamped = true;
  return c;
}

RegionRecord parse_region(const json& r, std::size_t index, const DocumentRecord& doc, const std::string& source,
                          std::size_t line) {
  const std::string path = "regions[" + std::to_string(index) + "].";
  if (!r.is_object()) schema_error(source, line, doc.id, path, "region must be an object");
  check_keys(r, {"id", "text", "quad", "box", "label"}, source, line, doc.id, path);

  RegionRecord region;
  if (!r.contains("id") || !r["id"].is_string() || r["id"].get<std::string>().empty()) {
    schema_error(source, line, doc.id, path + "id", "expected a nonempty string");
  }
  region.id = r["id"].get<std::string>();
  if (!r.contains("text") || !r["text"].is_string()) schema_error(source, line, doc.id, path + "text", "expected a string");
  region.text = r["text"].get<std::string>();
  if (r.contains("label")) {
    if (!r["label"].is_string()) schema_error(source, line, doc.id, path + "label", "expected a string");
    region.label = r["label"].get<std::string>();
  }

  const bool has_quad = r.contains("quad"), has_box = r.contains("box");
  if (has_quad == has_box) schema_error(source, line, doc.id, path + "quad", "exactly one of quad or box is required");
  const char* key = has_quad ? "quad" : "box";
  const auto& coords = r[key];
  const std::size_t expected = has_quad ? 8 : 4;
  if (!coords.is_array() || coords.size() != expected ||
      !std::all_of(coords.begin(), coords.end(), [](const json& v) { return v.is_number(); })) {
    schema_error(source, line, doc.id, path + key, "expected " + std::to_string(expected) + " numbers");
  }
  std::vector<double> v;
  for (const auto& c : coords) v.push_back(c.get<double>());
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
    schema_error(source, line, doc.id, path + key, "non-finite coordinate");
  }

  if (has_box) {
    if (v[0] > v[2] || v[1] > v[3]) {
      log::warn(source + ":" + std::to_string(line) + ": document '" + doc.id + "' region '" + region.id +
                "': inverted box reordered");
      if (v[0] > v[2]) std::swap(v[0], v[2]);
      if (v[1] > v[3]) std::swap(v[1], v[3]);
    }
    region.box = BoundingBox::from_corners(v[0], v[1], v[2], v[3]);
  } else {
    for (std::size_t k = 0; k < 4; ++k) region.box.vertices[k] = Point{v[2 * k], v[2 * k + 1]};
  }

  bool clamped = false;
  for (auto& p : region.box.vertices) {
    p.x = clamp_coord(p.x, doc.width, clamped);
    p.y = clamp_coord(p.y, doc.height, clamped);
  }
  if (clamped) {
    log::warn(source + ":" + std::to_string(line) + ": document '" + doc.id + "' region '" + region.id +
              "': box clamped to the image");
  }
  return region;
}

DocumentRecord parse_document(const json& j, const std::string& source, std::size_t line) {
  DocumentRecord doc;
  if (!j.is_object()) schema_error(source, line, "", "", "document must be a JSON object");
  if (j.contains("id") && j["id"].is_string()) doc.id = j["id"].get<std::string>();
  if (doc.id.empty()) schema_error(source, line, doc.id, "id", "expected a nonempty string");
  check_keys(j, {"id", "width", "height", "regions", "doc_class"}, source, line, doc.id, "");

  for (const char* key : {"width", "height"}) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0) {
      schema_error(source, line, doc.id, key, "expected a positive integer");
    }
  }
  doc.width = j["width"].get<int>();
  doc.height = j["height"].get<int>();
  if (j.contains("doc_class")) {
    if (!j["doc_class"].is_string()) schema_error(source, line, doc.id, "doc_class", "expected a string");
    doc.doc_class = j["doc_class"].get<std::string>();
  }
  if (!j.contains("regions") || !j["regions"].is_array()) schema_error(source, line, doc.id, "regions", "expected an array");
  if (j["regions"].empty()) schema_error(source, line, doc.id, "regions", "empty document");

  std::set<std::string> ids;
  for (std::size_t i = 0; i < j["regions"].size(); ++i) {
    auto region = parse_region(j["regions"][i], i, doc, source, line);
    if (!ids.insert(region.id).second) {
      schema_error(source, line, doc.id, "regions[" + std::to_string(i) + "].id", "duplicate region id '" + region.id + "'");
    }
    doc.regions.push_back(std::move(region));
  }
  return doc;
}

json number(double v) {
  if (std::nearbyint(v) == v && std::abs(v) < 9.0e15) return json(static_cast<long long>(v));
  return json(v);
}

}  // namespace

std::vector<DocumentRecord> parse_corpus(std::istream& in, const std::string& source) {
  std::vector<DocumentRecord> docs;
  std::set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw DataError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
    }
    auto doc = parse_document(j, source, line);
    if (!ids.insert(doc.id).second) schema_error(source, line, doc.id, "id", "duplicate document id");
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<DocumentRecord> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus '" + path.string() + "'");
  return parse_corpus(in, path.string());
}

std::string document_to_json_line(const DocumentRecord& doc) {
  json j;
  j["id"] = doc.id;
  j["width"] = doc.width;
  j["height"] = doc.height;
  if (doc.doc_class) j["doc_class"] = *doc.doc_class;
  j["regions"] = json::array();
  for (const auto& r : doc.regions) {
    json jr;
    jr["id"] = r.id;
    jr["text"] = r.text;
    jr["quad"] = json::array();
    for (const auto& p : r.box.vertices) {
      jr["quad"].push_back(number(p.x));
      jr["quad"].push_back(number(p.y));
    }
    if (r.label) jr["label"] = *r.label;
    j["regions"].push_back(std::move(jr));
  }
  return j.dump();
}

std::string corpus_to_string(std::span<const DocumentRecord> docs) {
  std::string out;
  for (const auto& d : docs) {
    out += document_to_json_line(d);
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, std::span<const DocumentRecord> docs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << corpus_to_string(docs);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Synthetic corpus

namespace {

const std::vector<std::string> kClassKeywords{"INVOICE", "RECEIPT", "FORM", "LETTER",
                                              "MEMO",    "REPORT",  "RESUME", "BUDGET"};
const std::vector<std::string> kQuestions{"NAME:",    "DATE:",    "TOTAL:",   "ADDRESS:", "PHONE:",
                                          "EMAIL:",   "AMOUNT:",  "REF NO:",  "COMPANY:", "SIGNATURE:",
                                          "ACCOUNT:", "DUE DATE:"};

std::string class_keyword(std::size_t c) {
  return c < kClassKeywords.size() ? kClassKeywords[c] : "CLASS" + std::to_string(c);
}

int scaled(SplitMix64& rng, double lo, double hi, int extent) {
  const double f = lo + (hi - lo) * rng.next_unit();
  return static_cast<int>(std::lround(f * extent));
}

std::string region_id(std::size_t i) {
  std::string s = std::to_string(i);
  return "r" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

}  // namespace

std::string synthetic_label_rule(const DocumentRecord& doc, const RegionRecord& region) {
  const double cx = (region.box.vertices[0].x + region.box.vertices[2].x) / 2.0;
  const double cy = (region.box.vertices[0].y + region.box.vertices[2].y) / 2.0;
  if (cy < 0.1 * doc.height) return "header";
  if (cy > 0.9 * doc.height) return "other";
  return cx < doc.width / 3.0 ? "question" : "answer";
}

std::vector<DocumentRecord> gen_synthetic(const SyntheticSpec& spec) {
  if (spec.docs < 1 || spec.regions_per_doc < 1 || spec.classes < 1) {
    throw ConfigError("gen_synthetic: docs, regions_per_doc and classes must be at least 1");
  }
  SplitMix64 rng(spec.seed ^ 0x5DEECE66DULL);
  std::vector<DocumentRecord> docs;
  docs.reserve(spec.docs);
  for (std::size_t d = 0; d < spec.docs; ++d) {
    DocumentRecord doc;
    std::string num = std::to_string(d);
    doc.id = "doc" + std::string(num.size() < 4 ? 4 - num.size() : 0, '0') + num;
    doc.width = 1000 + 50 * static_cast<int>(rng.next_int(0, 8));
    doc.height = 1200 + 50 * static_cast<int>(rng.next_int(0, 8));
    const auto cls = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(spec.classes) - 1));
    doc.doc_class = [&] {
      auto k = class_keyword(cls);
      std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
      return k;
    }();
    const int W = doc.width, H = doc.height;

    auto add_region = [&](std::string text, int x0, int y0, int x2, int y2) {
      RegionRecord r;
      r.id = region_id(doc.regions.size());
      r.text = std::move(text);
      r.box = BoundingBox::from_corners(x0, y0, x2, y2);
      doc.regions.push_back(std::move(r));
    };

    // header
    {
      const int x0 = scaled(rng, 0.30, 0.40, W);
      const int x2 = x0 + scaled(rng, 0.20, 0.30, W);
      const int y0 = scaled(rng, 0.02, 0.04, H);
      add_region(class_keyword(cls), x0, y0, x2, y0 + scaled(rng, 0.025, 0.035, H));
    }
    const std::size_t body = spec.regions_per_doc >= 2 ? spec.regions_per_doc - 2 : 0;
    const std::size_t rows = (body + 1) / 2;
    const double spacing = rows ? 0.75 / static_cast<double>(rows) : 0.0;
    for (std::size_t row = 0, placed = 0; row < rows; ++row) {
      const double top = 0.12 + spacing * static_cast<double>(row);
      const int y0 = static_cast<int>(std::lround(top * H));
      const int height = std::max(2, static_cast<int>(std::lround(std::min(0.025, 0.6 * spacing) * H)));
      {
        const int x0 = scaled(rng, 0.03, 0.08, W);
        const auto q = static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(kQuestions.size()) - 1));
        add_region(kQuestions[q], x0, y0, x0 + scaled(rng, 0.12, 0.20, W), y0 + height);
        ++placed;
      }
      if (placed < body) {
        const int x0 = scaled(rng, 0.40, 0.50, W);
        add_region("v" + std::to_string(rng.next_int(0, 9999)), x0, y0, x0 + scaled(rng, 0.15, 0.35, W), y0 + height);
        ++placed;
      }
    }
    if (spec.regions_per_doc >= 2) {
      const int x0 = scaled(rng, 0.40, 0.45, W);
      const int y0 = scaled(rng, 0.92, 0.95, H);
      add_region("PAGE " + std::to_string(d + 1), x0, y0, x0 + scaled(rng, 0.08, 0.12, W), y0 + scaled(rng, 0.015, 0.025, H));
    }
    for (auto& r : doc.regions) r.label = synthetic_label_rule(doc, r);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace docgat
