// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "mqag/detail/parallel.hpp"

namespace mqag {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Sum:
      return "sum";
    case Variant::Src:
      return "src";
    case Variant::F1:
      return "f1";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (n == "sum") return Variant::Sum;
  if (n == "src" || n == "source") return Variant::Src;
  if (n == "f1") return Variant::F1;
  return std::nullopt;
}

void validate(const ScoreConfig& config) {
  if (config.num_questions < 1) throw ContractViolation("num_questions must be >= 1");
  if (config.num_options < 2) throw ContractViolation("num_options must be >= 2");
  if (config.answerability_threshold) {
    const double t = *config.answerability_threshold;
    if (!(t >= 1.0 && t <= static_cast<double>(config.num_options))) {
      throw ContractViolation("answerability threshold " + std::to_string(t) +
                              " outside [1, " + std::to_string(config.num_options) + "]");
    }
  }
}

std::size_t ScoreReport::n_generated() const noexcept {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.n_generated;
  return n;
}

std::size_t ScoreReport::n_kept() const noexcept {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.n_kept;
  return n;
}

namespace {

// Shared by every aggregation path so that re-scoring recorded data is
// bit-identical to the original run.
double one_minus_mean(double sum, std::size_t n) { return 1.0 - sum / static_cast<double>(n); }

}  // namespace

double inconsistency(std::span<const DistributionPair> pairs, DistanceKind kind) {
  if (pairs.empty()) throw ContractViolation("inconsistency over an empty list of pairs");
  double sum = 0.0;
  for (const auto& pair : pairs) sum += distance(kind, pair.source, pair.summary);
  return sum / static_cast<double>(pairs.size());
}

double mqag_score(std::span<const DistributionPair> pairs, DistanceKind kind) {
  return 1.0 - inconsistency(pairs, kind);
}

double mqag_f1(double sum_score, double src_score) noexcept {
  const double denom = sum_score + src_score;
  if (!(denom > 0.0)) return 0.0;
  return 2.0 * sum_score * src_score / denom;
}

std::vector<bool> select_answerable(std::span<const double> answerability,
                                    std::optional<double> threshold) {
  if (answerability.empty()) throw ContractViolation("answerability filter on an empty list");
  std::vector<bool> kept(answerability.size(), true);
  if (!threshold) return kept;
  bool any = false;
  for (std::size_t i = 0; i < answerability.size(); ++i) {
    kept[i] = answerability[i] <= *threshold;
    any = any || kept[i];
  }
  if (!any) {
    const auto best = std::min_element(answerability.begin(), answerability.end());
    kept[static_cast<std::size_t>(best - answerability.begin())] = true;
  }
  return kept;
}

std::vector<AnsweredQuestion> filter_answerable(std::vector<AnsweredQuestion> items,
                                                std::optional<double> threshold) {
  if (items.empty()) throw ContractViolation("answerability filter on an empty list");
  if (threshold) {
    const auto k = static_cast<double>(items.front().question.options.size());
    if (!(*threshold >= 1.0 && *threshold <= k)) {
      throw ContractViolation("answerability threshold " + std::to_string(*threshold) +
                              " outside [1, " + std::to_string(static_cast<int>(k)) + "]");
    }
  }
  std::vector<double> values;
  values.reserve(items.size());
  for (const auto& it : items) values.push_back(it.answerability);
  const auto kept = select_answerable(values, threshold);
  for (std::size_t i = 0; i < items.size(); ++i) items[i].kept = kept[i];
  return items;
}

double score_kept(std::span<const QuestionScore> per_question) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& q : per_question) {
    if (!q.kept) continue;
    sum += q.distance;
    ++n;
  }
  if (n == 0) throw ContractViolation("no kept questions to score");
  return one_minus_mean(sum, n);
}

double rescore(std::span<const QuestionScore> per_question, std::optional<double> threshold,
               std::size_t* n_kept) {
  std::vector<double> values;
  values.reserve(per_question.size());
  for (const auto& q : per_question) values.push_back(q.answerability);
  const auto kept = select_answerable(values, threshold);
  std::vector<QuestionScore> copy(per_question.begin(), per_question.end());
  std::size_t count = 0;
  for (std::size_t i = 0; i < copy.size(); ++i) {
    copy[i].kept = kept[i];
    count += kept[i] ? 1 : 0;
  }
  if (n_kept) *n_kept = count;
  return score_kept(copy);
}

namespace {

struct RunFailure {
  RunReport partial;
  std::exception_ptr cause;
};

// Returns the run, or fills `failure` and returns nullopt.
std::optional<RunReport> run_once(Variant generated_from, std::string_view source,
                                  std::string_view summary, const ScoreConfig& config,
                                  Backend& backend, RunFailure& failure) {
  RunReport run;
  run.generated_from = generated_from;
  run.n_requested = config.num_questions;
  run.score = std::numeric_limits<double>::quiet_NaN();
  const std::string_view gen_text = generated_from == Variant::Sum ? summary : source;

  std::vector<MCQuestion> questions;
  try {
    questions = backend.generate_questions(GenerationRequest(
        std::string(gen_text), config.num_questions, config.num_options, config.seed));
  } catch (const ShortGenerationError& e) {
    questions = e.questions();
    if (questions.empty()) {
      failure = {std::move(run), std::current_exception()};
      return std::nullopt;
    }
  } catch (...) {
    failure = {std::move(run), std::current_exception()};
    return std::nullopt;
  }
  run.n_generated = questions.size();

  const std::size_t n = questions.size();
  std::vector<std::optional<OptionDistribution>> on_source(n), on_summary(n);
  try {
    detail::parallel_for(2 * n, backend.max_concurrency(), [&](std::size_t task) {
      const std::size_t qi = task / 2;
      if (task % 2 == 0) {
        on_source[qi] = backend.answer(AnswerRequest(std::string(source), questions[qi]));
      } else {
        on_summary[qi] = backend.answer(AnswerRequest(std::string(summary), questions[qi]));
      }
    });
  } catch (...) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!on_source[i] || !on_summary[i]) continue;
      const auto& gen_dist = generated_from == Variant::Sum ? *on_summary[i] : *on_source[i];
      run.answered.push_back({questions[i], *on_source[i], *on_summary[i],
                              effective_options(gen_dist), false});
    }
    failure = {std::move(run), std::current_exception()};
    return std::nullopt;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double answerability =
        effective_options(generated_from == Variant::Sum ? *on_summary[i] : *on_source[i]);
    run.answered.push_back({std::move(questions[i]), std::move(*on_source[i]),
                            std::move(*on_summary[i]), answerability, true});
  }
  run.answered = filter_answerable(std::move(run.answered), config.answerability_threshold);

  run.per_question.reserve(n);
  for (const auto& a : run.answered) {
    run.per_question.push_back({a.question.id, distance(config.distance, a.dist_source,
                                                        a.dist_summary),
                                a.answerability, a.kept});
    run.n_kept += a.kept ? 1 : 0;
  }
  run.score = score_kept(run.per_question);
  return run;
}

}  // namespace

ScoreReport score_pair(std::string_view source, std::string_view summary,
                       const ScoreConfig& config, Backend& backend) {
  validate(config);
  if (source.empty()) throw ContractViolation("source text is empty");
  if (summary.empty()) throw ContractViolation("summary text is empty");

  ScoreReport report;
  report.config = config;

  std::vector<Variant> passes;
  if (config.variant == Variant::F1) {
    passes = {Variant::Sum, Variant::Src};
  } else {
    passes = {config.variant};
  }

  for (Variant pass : passes) {
    RunFailure failure;
    auto run = run_once(pass, source, summary, config, backend, failure);
    if (!run) {
      report.score = std::numeric_limits<double>::quiet_NaN();
      report.runs.push_back(std::move(failure.partial));
      std::string what = "scoring failed during the ";
      what += to_string(pass);
      what += " pass";
      try {
        std::rethrow_exception(failure.cause);
      } catch (const std::exception& e) {
        what += ": ";
        what += e.what();
      } catch (...) {
      }
      throw PipelineError(what, std::move(report), failure.cause);
    }
    (pass == Variant::Sum ? report.sum_score : report.src_score) = run->score;
    report.runs.push_back(std::move(*run));
  }

  switch (config.variant) {
    case Variant::Sum:
      report.score = *report.sum_score;
      break;
    case Variant::Src:
      report.score = *report.src_score;
      break;
    case Variant::F1:
      report.score = mqag_f1(*report.sum_score, *report.src_score);
      break;
  }
  return report;
}

}  // namespace mqag
