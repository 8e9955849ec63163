// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file harness.hpp
 * @brief Dataset scoring and the analyses built on top of it.
 *
 * - score_dataset: one score_pair per record, parallel over records.
 * - answerability_sweep: correlation as the answerability threshold shrinks,
 *   recomputed from recorded per-question data (no backend calls).
 * - convergence_curve: bootstrap over question subsets of size n to show how
 *   the correlation (and each record's score) stabilises as n grows.
 * - bernoulli_distance_grid: the four distances between [p1, 1-p1] and
 *   [p2, 1-p2] over a grid of p2.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mqag/backend.hpp"
#include "mqag/correlation.hpp"
#include "mqag/dataset.hpp"
#include "mqag/scoring.hpp"

namespace mqag {

struct ScoredRecord {
  RecordKey key;
  double human_score = 0.0;
  ScoreReport report;
};

/// Scores every record with `jobs` workers (records are independent).
/// Output order matches dataset order. The first failure is rethrown after
/// in-flight records finish.
std::vector<ScoredRecord> score_dataset(const EvalDataset& dataset, const ScoreConfig& config,
                                        Backend& backend, std::size_t jobs = 1);

ScoreTable metric_scores(std::span<const ScoredRecord> records);

/// Per-question data of the first run of each record (the Sum or Src pass).
std::map<RecordKey, std::vector<QuestionScore>> per_question_table(
    std::span<const ScoredRecord> records);

// ---------------------------------------------------------------------------
// Answerability sweep
// ---------------------------------------------------------------------------

inline const std::vector<double> kDefaultSweepThresholds = {4.0, 3.5, 3.0, 2.5, 2.0, 1.5, 1.0};

struct SweepPoint {
  double threshold = 0.0;
  CorrelationResult correlation;
  double mean_n_kept = 0.0;
};

/// For each threshold, rescore every record from its per-question data and
/// correlate against the human table. A threshold whose correlation is
/// undefined propagates UndefinedCorrelation.
std::vector<SweepPoint> answerability_sweep(
    const std::map<RecordKey, std::vector<QuestionScore>>& per_question, const ScoreTable& human,
    std::span<const double> thresholds, CorrelationLevel level);

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

inline const std::vector<std::size_t> kDefaultConvergenceGrid = {1, 2, 5, 10, 20, 50};

enum class ResampleMode {
  /// n indices drawn uniformly with replacement, independently per record.
  WithReplacement,
  /// The first n questions of each record; every replicate is identical.
  Prefix,
};

struct ConvergenceOptions {
  std::vector<std::size_t> n_grid = kDefaultConvergenceGrid;
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 0;
  CorrelationLevel level = CorrelationLevel::Summary;
  CorrelationMethod method = CorrelationMethod::Pearson;
  ResampleMode mode = ResampleMode::WithReplacement;
};

struct ConvergencePoint {
  std::size_t n = 0;
  double mean_corr = 0.0;
  double std_corr = 0.0;
  /// Average over records of the standard deviation of that record's score
  /// across replicates.
  double mean_score_std = 0.0;
  /// Replicates whose correlation was defined.
  std::size_t n_valid = 0;
};

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> values);

/**
 * Each record's score for a replicate is 1 - mean of its resampled question
 * distances. Replicates with an undefined correlation are skipped; if all of
 * them are, mean_corr and std_corr are NaN. Throws ContractViolation when a
 * record has fewer questions than max(n_grid) or bootstrap == 0.
 */
std::vector<ConvergencePoint> convergence_curve(
    const std::map<RecordKey, std::vector<double>>& per_question_distances,
    const ScoreTable& human, const ConvergenceOptions& options);

// ---------------------------------------------------------------------------
// Bernoulli distance curves
// ---------------------------------------------------------------------------

inline constexpr double kBernoulliP1Values[] = {0.0, 0.25, 0.5, 0.75};

struct DistanceRow {
  double p1 = 0.0;
  double p2 = 0.0;
  double kl = 0.0;
  double one_best = 0.0;
  double total_variation = 0.0;
  double hellinger = 0.0;
};

/// For each p1 in kBernoulliP1Values and p2 = i / (resolution - 1),
/// i = 0..resolution-1. Throws ContractViolation if resolution < 2.
std::vector<DistanceRow> bernoulli_distance_grid(std::size_t resolution);

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

void write_distance_csv(std::ostream& out, std::span<const DistanceRow> rows);
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);
void write_convergence_csv(std::ostream& out, std::span<const ConvergencePoint> points);

/// Columns: system_id, doc_id, score, human_score, n_kept.
void write_records_csv(std::ostream& out, std::span<const ScoredRecord> records);

struct EvaluationResults {
  std::string dataset_name;
  CorrelationLevel level = CorrelationLevel::Summary;
  ScoreConfig config;
  std::vector<ScoredRecord> records;
  /// Named tables, e.g. "all", "low", "high".
  std::map<std::string, CorrelationResult> correlations;
  std::vector<SweepPoint> sweep;
  std::vector<ConvergencePoint> convergence;
};

/// {"dataset": ..., "config": ..., "per_record": [...], "correlations": {...},
///  "curves": {"sweep": [...], "convergence": [...]}}
void write_results_json(std::ostream& out, const EvaluationResults& results);

/// Machine-readable form of a single report (used by the score command).
std::string report_to_json(const ScoreReport& report, int indent = 2);

}  // namespace mqag
