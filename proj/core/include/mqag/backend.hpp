// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file backend.hpp
 * @brief Question generation / answering contracts and the offline mock.
 *
 * A Backend plays two roles: it generates multiple-choice questions from a
 * context, and it answers a question against a context by returning a
 * distribution over the question's options. Whether generation happens in one
 * stage or as question+answer followed by distractors is the backend's
 * business; the contract only fixes the output shape.
 *
 * Implementations must accept concurrent calls from several worker threads.
 */

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqag/distributions.hpp"
#include "mqag/error.hpp"

namespace mqag {

inline constexpr std::size_t kDefaultNumOptions = 4;

struct MCQuestion {
  std::string id;
  std::string stem;
  std::vector<std::string> options;
  std::size_t answer_index = 0;

  friend bool operator==(const MCQuestion&, const MCQuestion&) = default;
};

/// Throws ContractViolation unless K >= 2, answer_index < K and the options
/// are pairwise distinct after whitespace normalization.
void validate_question(const MCQuestion& q);

/// Makes duplicate options distinct by suffixing " (2)", " (3)", ... to later
/// copies. Returns true if anything changed.
bool repair_duplicate_options(MCQuestion& q);

/// Trims and collapses runs of whitespace to a single space.
std::string normalize_whitespace(std::string_view s);

class GenerationRequest {
 public:
  /// Throws ContractViolation on an empty context, num_questions < 1 or
  /// num_options < 2.
  GenerationRequest(std::string context, std::size_t num_questions,
                    std::size_t num_options = kDefaultNumOptions,
                    std::optional<std::uint64_t> seed = std::nullopt);

  const std::string& context() const noexcept { return context_; }
  std::size_t num_questions() const noexcept { return num_questions_; }
  std::size_t num_options() const noexcept { return num_options_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

 private:
  std::string context_;
  std::size_t num_questions_;
  std::size_t num_options_;
  std::optional<std::uint64_t> seed_;
};

class AnswerRequest {
 public:
  /// Throws ContractViolation on an empty context or an invalid question.
  AnswerRequest(std::string context, MCQuestion question);

  const std::string& context() const noexcept { return context_; }
  const MCQuestion& question() const noexcept { return question_; }

 private:
  std::string context_;
  MCQuestion question_;
};

/// The backend produced fewer questions than requested. The questions it did
/// produce travel with the error so the caller can decide to carry on.
class ShortGenerationError : public BackendError {
 public:
  ShortGenerationError(std::size_t requested, std::vector<MCQuestion> received)
      : BackendError("short generation: requested " + std::to_string(requested) +
                     ", received " + std::to_string(received.size())),
        requested_(requested),
        questions_(std::move(received)) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t received() const noexcept { return questions_.size(); }
  const std::vector<MCQuestion>& questions() const noexcept { return questions_; }

 private:
  std::size_t requested_;
  std::vector<MCQuestion> questions_;
};

class Backend {
 public:
  virtual ~Backend() = default;

  /// Exactly req.num_questions() valid questions with req.num_options()
  /// options each, or ShortGenerationError.
  virtual std::vector<MCQuestion> generate_questions(const GenerationRequest& req) = 0;

  /// Distribution over req.question().options, conditioned on req.context().
  virtual OptionDistribution answer(const AnswerRequest& req) = 0;

  /// How many calls the caller should keep in flight at once.
  virtual std::size_t max_concurrency() const noexcept { return 1; }
};

enum class BackendKind { Mock, Remote };

struct BackendDescriptor {
  BackendKind kind = BackendKind::Mock;
  std::optional<std::string> endpoint;
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
  int max_retries = 2;
  /// Delay before the first retry; doubles on each further attempt.
  std::chrono::milliseconds retry_backoff{250};
  std::size_t max_connections = 4;
  std::optional<std::string> bearer_token;
};

/// Throws ContractViolation if a Remote descriptor has no endpoint or any
/// limit is out of range.
void validate(const BackendDescriptor& desc);

std::unique_ptr<Backend> make_backend(const BackendDescriptor& desc);

// ---------------------------------------------------------------------------
// Mock backend
// ---------------------------------------------------------------------------

/// Softmax temperature of the mock answerer.
inline constexpr double kMockTemperature = 0.25;

/**
 * Deterministic cloze-style generator. For each question a seeded sentence of
 * the context is picked, one content word is replaced by "____" to form the
 * stem, the removed word becomes the answer, and k-1 distractors are drawn
 * from the content words of the other sentences (falling back to the same
 * sentence when the others run out). Option order is a seeded permutation.
 *
 * Pure function of (context, n, k, seed). Throws InsufficientContentError
 * when the context has fewer than k distinct content words.
 */
std::vector<MCQuestion> mock_generate(std::string_view context, std::size_t n, std::size_t k,
                                      std::optional<std::uint64_t> seed);

/// Scores each option by the fraction of its tokens present in the context
/// and returns softmax(score / kMockTemperature).
OptionDistribution mock_answer(std::string_view context, const MCQuestion& question);

class MockBackend final : public Backend {
 public:
  explicit MockBackend(std::size_t concurrency = 1) : concurrency_(concurrency ? concurrency : 1) {}

  std::vector<MCQuestion> generate_questions(const GenerationRequest& req) override;
  OptionDistribution answer(const AnswerRequest& req) override;
  std::size_t max_concurrency() const noexcept override { return concurrency_; }

 private:
  std::size_t concurrency_;
};

}  // namespace mqag
