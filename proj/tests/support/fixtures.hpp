// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqag/backend.hpp"
#include "mqag/dataset.hpp"

namespace mqag::testing {

// News article about a van robbery in Glasgow, and two one-sentence
// summaries: one faithful, one that moves the robbery to Edinburgh.
inline constexpr const char* kRobberySource =
    "A G4S security van has been robbed outside a branch of royal bank of Scotland in Glasgow "
    "city centre. Police said three armed men took a five-figure sum from the vehicle in the "
    "city's Sauchiehall street on Monday at about 21:45. A spokesman said no-one had been "
    "injured although two security guards aged 47 and 49 were left badly shaken. The area "
    "around the bank, which is near the Buchanan galleries shopping centre, has been cordoned "
    "off by police. Police said the security guards had been making their delivery when they "
    "were approached by the three armed men, who threatened them and demanded they hand over a "
    "box of money. It is understood the cash taken was in the region of 50,000 pounds. "
    "Following the robbery, the three men got into a white seat Leon car, which sped off along "
    "west Nile street towards the cowcaddens area.";

inline constexpr const char* kFaithfulSummary =
    "Two security guards have been threatened during a robbery at a bank in Glasgow.";

inline constexpr const char* kCorruptedSummary =
    "Two security guards have been threatened during a robbery at a bank in Edinburgh.";

/// Summaries with exactly four content words, all present in the source for
/// the faithful one. With four options per question every generated question
/// has the city among its options.
inline constexpr const char* kEntityFaithfulSummary = "Armed men robbed Glasgow.";
inline constexpr const char* kEntityCorruptedSummary = "Armed men robbed Edinburgh.";

/// Option distributions of the worked robbery example, conditioned on the
/// source and on the (inconsistent) summary.
inline OptionDistribution robbery_source_dist() {
  return OptionDistribution({0.077, 0.895, 0.018, 0.010});
}
inline OptionDistribution robbery_summary_dist() {
  return OptionDistribution({0.687, 0.295, 0.000, 0.018});
}

/// Deterministic synthetic corpus: each document is a block of made-up
/// sentences; each system copies two sentences and swaps a system- and
/// document-dependent number of words for words absent from the source.
/// human_score = fraction of summary words left untouched.
EvalDataset make_synthetic_dataset(std::size_t num_docs, std::size_t num_systems,
                                   CorrelationLevel level = CorrelationLevel::Summary);

/// Backend double returning canned questions and distributions.
class ScriptedBackend final : public Backend {
 public:
  std::vector<MCQuestion> questions;
  /// (context, question id) -> distribution.
  std::map<std::pair<std::string, std::string>, OptionDistribution> answers;
  /// Throw TransportError once this many answers have been served.
  std::optional<std::size_t> fail_after_answers;
  std::size_t concurrency = 1;

  std::vector<MCQuestion> generate_questions(const GenerationRequest& req) override;
  OptionDistribution answer(const AnswerRequest& req) override;
  std::size_t max_concurrency() const noexcept override { return concurrency; }

  std::size_t answers_served() const noexcept { return served_.load(); }

 private:
  std::atomic<std::size_t> served_{0};
};

/// Question with options "a".."d" (or fewer), answer at index 0.
MCQuestion simple_question(std::string id, std::size_t k = 4);

}  // namespace mqag::testing
