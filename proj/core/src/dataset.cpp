// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <json.hpp>

#include "mqag/error.hpp"
#include "mqag/textmetrics.hpp"

namespace mqag {

std::size_t EvalDataset::num_systems() const {
  std::set<std::string_view> s;
  for (const auto& r : records) s.insert(r.system_id);
  return s.size();
}

std::size_t EvalDataset::num_documents() const {
  std::set<std::string_view> s;
  for (const auto& r : records) s.insert(r.doc_id);
  return s.size();
}

ScoreTable EvalDataset::human_scores() const {
  ScoreTable t;
  for (const auto& r : records) t.emplace(r.key(), r.human_score);
  return t;
}

std::string_view to_string(CorrelationLevel level) noexcept {
  return level == CorrelationLevel::System ? "system" : "summary";
}

std::optional<CorrelationLevel> parse_level(std::string_view name) noexcept {
  if (name == "summary") return CorrelationLevel::Summary;
  if (name == "system") return CorrelationLevel::System;
  return std::nullopt;
}

namespace {

using nlohmann::json;

std::string string_field(const json& obj, const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) throw SchemaError(line, field, "missing required field");
  if (!it->is_string()) throw SchemaError(line, field, "expected a string");
  return it->get<std::string>();
}

double number_field(const json& obj, const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) throw SchemaError(line, field, "missing required field");
  if (!it->is_number()) throw SchemaError(line, field, "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw SchemaError(line, field, "must be finite");
  return v;
}

}  // namespace

EvalDataset parse_dataset(std::istream& in, std::string name, CorrelationLevel level) {
  EvalDataset ds;
  ds.name = std::move(name);
  ds.level = level;
  std::set<RecordKey> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line, "record must be a JSON object");
    EvalRecord r;
    r.system_id = string_field(obj, "system_id", line);
    r.doc_id = string_field(obj, "doc_id", line);
    r.source = string_field(obj, "source", line);
    r.summary = string_field(obj, "summary", line);
    r.human_score = number_field(obj, "human_score", line);
    if (!seen.insert(r.key()).second) {
      throw DataError("line " + std::to_string(line) + ": duplicate record for system '" +
                      r.system_id + "', doc '" + r.doc_id + "'");
    }
    ds.records.push_back(std::move(r));
  }
  if (ds.records.empty()) throw EmptyDatasetError("dataset '" + ds.name + "' has no records");
  return ds;
}

EvalDataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  if (format != DatasetFormat::Jsonl) throw ContractViolation("unsupported dataset format");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");

  std::string name = path.stem().string();
  CorrelationLevel level = CorrelationLevel::Summary;
  const std::filesystem::path meta_path = path.string() + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta_in(meta_path);
    json meta;
    try {
      meta = json::parse(meta_in);
    } catch (const json::parse_error& e) {
      throw ParseError(1, "invalid sidecar " + meta_path.string() + ": " + e.what());
    }
    if (auto it = meta.find("name"); it != meta.end()) {
      if (!it->is_string()) throw SchemaError(1, "name", "expected a string");
      name = it->get<std::string>();
    }
    if (auto it = meta.find("level"); it != meta.end()) {
      const auto parsed = it->is_string() ? parse_level(it->get<std::string>()) : std::nullopt;
      if (!parsed) throw SchemaError(1, "level", "expected \"summary\" or \"system\"");
      level = *parsed;
    }
  }
  return parse_dataset(in, std::move(name), level);
}

void validate_for_level(const EvalDataset& dataset, CorrelationLevel level) {
  if (level == CorrelationLevel::System) {
    if (dataset.num_systems() < 2) {
      throw ShapeError("system-level evaluation needs at least 2 systems, dataset '" +
                       dataset.name + "' has " + std::to_string(dataset.num_systems()));
    }
    return;
  }
  std::map<std::string_view, std::size_t> systems_per_doc;
  for (const auto& r : dataset.records) ++systems_per_doc[r.doc_id];
  for (const auto& [doc, count] : systems_per_doc) {
    if (count < 2) {
      throw ShapeError("summary-level evaluation needs at least 2 systems per document; doc '" +
                       std::string(doc) + "' has " + std::to_string(count));
    }
  }
}

EvalDataset filter_systems(const EvalDataset& dataset, std::span<const std::string> allowlist) {
  if (allowlist.empty()) return dataset;
  const std::set<std::string> allowed(allowlist.begin(), allowlist.end());
  EvalDataset out;
  out.name = dataset.name;
  out.level = dataset.level;
  for (const auto& r : dataset.records) {
    if (allowed.contains(r.system_id)) out.records.push_back(r);
  }
  return out;
}

std::pair<EvalDataset, EvalDataset> abstractiveness_split(const EvalDataset& dataset) {
  if (dataset.records.size() < 2) {
    throw ContractViolation("abstractiveness split needs at least 2 records");
  }
  struct Item {
    double abstractiveness;
    const EvalRecord* record;
  };
  std::vector<Item> items;
  items.reserve(dataset.records.size());
  for (const auto& r : dataset.records) {
    items.push_back({text::abstractiveness(r.summary, r.source), &r});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.abstractiveness != b.abstractiveness) return a.abstractiveness < b.abstractiveness;
    if (a.record->doc_id != b.record->doc_id) return a.record->doc_id < b.record->doc_id;
    return a.record->system_id < b.record->system_id;
  });
  const std::size_t low_size = (items.size() + 1) / 2;
  std::pair<EvalDataset, EvalDataset> halves;
  halves.first.name = dataset.name + "-low";
  halves.second.name = dataset.name + "-high";
  halves.first.level = halves.second.level = dataset.level;
  for (std::size_t i = 0; i < items.size(); ++i) {
    (i < low_size ? halves.first : halves.second).records.push_back(*items[i].record);
  }
  return halves;
}

}  // namespace mqag
