// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file scoring.hpp
 * @brief The MQAG scoring pipeline.
 *
 * Questions are generated from one text, answered against both the source
 * and the summary, filtered by answerability, and the remaining
 * (source-conditioned, summary-conditioned) distribution pairs are turned
 * into
 *
 *   inconsistency = (1/N) * sum_i D(p_source_i, p_summary_i)
 *   score         = 1 - inconsistency
 *
 * Sum generates from the summary (consistency), Src from the source
 * (coverage), F1 is the harmonic mean of the two. Scores never exceed 1 but
 * go negative with KL, and are reported unclipped.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqag/backend.hpp"
#include "mqag/distributions.hpp"

namespace mqag {

enum class Variant { Sum, Src, F1 };

std::string_view to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;

struct ScoreConfig {
  Variant variant = Variant::Sum;
  DistanceKind distance = DistanceKind::TotalVariation;
  std::size_t num_questions = 50;
  std::size_t num_options = kDefaultNumOptions;
  /// Reject questions whose effective number of options exceeds this.
  /// nullopt disables filtering.
  std::optional<double> answerability_threshold = 2.0;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ScoreConfig&, const ScoreConfig&) = default;
};

/// Throws ContractViolation if N < 1, K < 2 or the threshold is outside [1, K].
void validate(const ScoreConfig& config);

struct DistributionPair {
  OptionDistribution source;
  OptionDistribution summary;
};

struct AnsweredQuestion {
  MCQuestion question;
  OptionDistribution dist_source;
  OptionDistribution dist_summary;
  /// effective_options of the distribution conditioned on the text the
  /// question was generated from.
  double answerability = 0.0;
  bool kept = true;
};

struct QuestionScore {
  std::string id;
  double distance = 0.0;
  double answerability = 0.0;
  bool kept = true;

  friend bool operator==(const QuestionScore&, const QuestionScore&) = default;
};

/// One generate-answer-aggregate pass with questions drawn from one text.
struct RunReport {
  Variant generated_from = Variant::Sum;  // Sum or Src, never F1
  double score = 0.0;
  std::vector<AnsweredQuestion> answered;
  std::vector<QuestionScore> per_question;  // generation order
  std::size_t n_requested = 0;
  std::size_t n_generated = 0;
  std::size_t n_kept = 0;
};

struct ScoreReport {
  ScoreConfig config;
  double score = 0.0;
  /// Present for F1, and for the matching single variant.
  std::optional<double> sum_score;
  std::optional<double> src_score;
  /// One run for Sum/Src; two (Sum then Src) for F1.
  std::vector<RunReport> runs;

  std::size_t n_generated() const noexcept;
  std::size_t n_kept() const noexcept;
};

/// A backend call failed while scoring. partial() holds every run and
/// question finished before the failure; cause() is the original exception.
class PipelineError : public Error {
 public:
  PipelineError(const std::string& what, ScoreReport partial, std::exception_ptr cause)
      : Error(what), partial_(std::move(partial)), cause_(std::move(cause)) {}

  const ScoreReport& partial() const noexcept { return partial_; }
  const std::exception_ptr& cause() const noexcept { return cause_; }
  [[noreturn]] void rethrow_cause() const { std::rethrow_exception(cause_); }

 private:
  ScoreReport partial_;
  std::exception_ptr cause_;
};

/// Mean distance over the pairs, source-conditioned distribution first.
/// Throws ContractViolation on an empty list or a length mismatch.
double inconsistency(std::span<const DistributionPair> pairs, DistanceKind kind);

/// 1 - inconsistency(pairs, kind).
double mqag_score(std::span<const DistributionPair> pairs, DistanceKind kind);

/// Harmonic mean 2ab/(a+b); 0 when a + b <= 0.
double mqag_f1(double sum_score, double src_score) noexcept;

/// Keep flags for a list of answerability values: kept iff value <= threshold.
/// If nothing survives, the first item with the minimum value is kept.
/// nullopt keeps everything. Throws ContractViolation on empty input.
std::vector<bool> select_answerable(std::span<const double> answerability,
                                    std::optional<double> threshold);

/// Sets `kept` on every item per select_answerable. Throws ContractViolation
/// on empty input or a threshold outside [1, K].
std::vector<AnsweredQuestion> filter_answerable(std::vector<AnsweredQuestion> items,
                                                std::optional<double> threshold);

/// 1 - mean distance over the kept entries. Throws ContractViolation if none
/// is kept.
double score_kept(std::span<const QuestionScore> per_question);

/// Re-applies a threshold to recorded per-question data without touching the
/// backend. Returns the score; n_kept receives the surviving count.
double rescore(std::span<const QuestionScore> per_question, std::optional<double> threshold,
               std::size_t* n_kept = nullptr);

/**
 * Runs the full pipeline for one (source, summary) pair.
 *
 * Answer calls fan out over backend.max_concurrency() workers; results are
 * keyed by position so the report does not depend on completion order. A
 * short generation is accepted and recorded in n_generated. Any other
 * backend failure is rethrown as PipelineError carrying the partial report.
 */
ScoreReport score_pair(std::string_view source, std::string_view summary,
                       const ScoreConfig& config, Backend& backend);

}  // namespace mqag
