// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqag/correlation.hpp"

namespace mqag {

struct EvalRecord {
  std::string system_id;
  std::string doc_id;
  std::string source;
  std::string summary;
  double human_score = 0.0;

  RecordKey key() const { return {system_id, doc_id}; }
};

struct EvalDataset {
  std::string name;
  CorrelationLevel level = CorrelationLevel::Summary;
  std::vector<EvalRecord> records;

  std::size_t num_systems() const;
  std::size_t num_documents() const;
  ScoreTable human_scores() const;
};

enum class DatasetFormat { Jsonl };

std::string_view to_string(CorrelationLevel level) noexcept;
std::optional<CorrelationLevel> parse_level(std::string_view name) noexcept;

/**
 * Reads UTF-8 line-delimited records of the form
 *
 *   {"system_id": str, "doc_id": str, "source": str, "summary": str, "human_score": number}
 *
 * Blank lines are ignored. If `<path>.meta.json` exists it may set
 * {"name": str, "level": "summary"|"system"}; otherwise the name is the file
 * stem and the level is summary.
 *
 * Throws EmptyDatasetError, ParseError (with line number), SchemaError
 * (naming the field) or DataError for a duplicate (system, doc) key or an
 * unreadable file.
 */
EvalDataset load_dataset(const std::filesystem::path& path,
                         DatasetFormat format = DatasetFormat::Jsonl);

/// Same as load_dataset but from a stream, without the sidecar lookup.
EvalDataset parse_dataset(std::istream& in, std::string name,
                          CorrelationLevel level = CorrelationLevel::Summary);

/// Throws ShapeError if the dataset cannot support correlation at `level`:
/// system level needs >= 2 systems, summary level >= 2 systems per document.
void validate_for_level(const EvalDataset& dataset, CorrelationLevel level);

/// Keeps only records whose system_id is in the allowlist. An empty
/// allowlist keeps everything.
EvalDataset filter_systems(const EvalDataset& dataset, std::span<const std::string> allowlist);

/// Sorts by abstractiveness of summary against source (ties by doc_id, then
/// system_id) and splits into two halves; the lower half gets the extra
/// record when the count is odd. Throws ContractViolation below 2 records.
std::pair<EvalDataset, EvalDataset> abstractiveness_split(const EvalDataset& dataset);

}  // namespace mqag
