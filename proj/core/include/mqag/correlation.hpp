// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file correlation.hpp
 * @brief Pearson / Spearman and the two meta-evaluation aggregations.
 *
 * With z[i][j] the metric score of system i on document j and h[i][j] the
 * human judgement:
 *
 *   system level : Corr({mean_j z[i][j], mean_j h[i][j]} over systems i)
 *   summary level: mean over documents j of Corr({z[i][j], h[i][j]} over i)
 *
 * At summary level a document whose correlation is undefined (constant
 * scores on either side) is skipped and counted, not treated as zero.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mqag {

struct RecordKey {
  std::string system_id;
  std::string doc_id;

  friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
  friend bool operator==(const RecordKey&, const RecordKey&) = default;
};

/// (system, document) -> score.
using ScoreTable = std::map<RecordKey, double>;

struct CorrelationResult {
  double pearson = 0.0;
  double spearman = 0.0;
  std::size_t n_used = 0;
  std::size_t n_skipped = 0;
};

enum class CorrelationLevel { Summary, System };
enum class CorrelationMethod { Pearson, Spearman };

/// Throws ContractViolation on unequal lengths or fewer than 2 points and
/// UndefinedCorrelation when either side has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson over average ranks (ties share the mean of their positions).
double spearman(std::span<const double> xs, std::span<const double> ys);

/// 1-based ranks; tied values get the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Requires both tables to hold the same keys, at least two systems and every
/// system covering the same documents; ShapeError otherwise.
CorrelationResult system_level_corr(const ScoreTable& metric, const ScoreTable& human);

/// Requires both tables to hold the same keys and at least two systems per
/// document (ShapeError). Throws UndefinedCorrelation if every document is
/// skipped.
CorrelationResult summary_level_corr(const ScoreTable& metric, const ScoreTable& human);

CorrelationResult correlate(CorrelationLevel level, const ScoreTable& metric,
                            const ScoreTable& human);

double pick(const CorrelationResult& r, CorrelationMethod method) noexcept;

}  // namespace mqag
