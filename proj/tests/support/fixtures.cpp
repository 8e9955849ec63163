// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include "mqag/error.hpp"

namespace mqag::testing {

namespace {

const char* const kSyllables[] = {"ka", "lo", "mi", "ru", "ven", "tor", "shi", "pa",
                                  "del", "qu", "zen", "bor", "fi", "gal", "hu", "nox"};

// Pronounceable made-up word, unique per id.
std::string word(std::size_t id) {
  std::string w;
  std::size_t x = id + 17;
  for (int i = 0; i < 3; ++i) {
    w += kSyllables[x % 16];
    x /= 16;
  }
  return w + std::to_string(id % 7);
}

}  // namespace

EvalDataset make_synthetic_dataset(std::size_t num_docs, std::size_t num_systems,
                                   CorrelationLevel level) {
  constexpr std::size_t kSentences = 6;
  constexpr std::size_t kWordsPerSentence = 8;
  EvalDataset ds;
  ds.name = "synthetic";
  ds.level = level;
  std::size_t foreign = 100000;
  for (std::size_t d = 0; d < num_docs; ++d) {
    std::vector<std::vector<std::string>> sentences(kSentences);
    std::string source;
    for (std::size_t s = 0; s < kSentences; ++s) {
      for (std::size_t w = 0; w < kWordsPerSentence; ++w) {
        sentences[s].push_back(word(d * 1000 + s * kWordsPerSentence + w));
      }
      for (std::size_t w = 0; w < kWordsPerSentence; ++w) {
        source += (w ? " " : "") + sentences[s][w];
      }
      source += ". ";
    }
    for (std::size_t sys = 0; sys < num_systems; ++sys) {
      // Corruption level varies with both system and document so that every
      // document has a spread of quality across systems.
      const std::size_t corrupt = (sys * 3 + d * 5) % 12;
      std::vector<std::string> words;
      for (std::size_t s : {d % kSentences, (d + 2) % kSentences}) {
        for (const auto& w : sentences[s]) words.push_back(w);
      }
      const std::vector<std::string> original = words;
      for (std::size_t i = 0; i < corrupt; ++i) {
        words[(i * 5 + sys) % words.size()] = "zz" + word(foreign++);
      }
      std::string summary;
      for (std::size_t i = 0; i < words.size(); ++i) {
        summary += (i ? " " : "") + words[i];
        if (i == kWordsPerSentence - 1) summary += ".";
      }
      summary += ".";
      // Replacement positions may repeat, so count what actually survived.
      std::size_t kept = 0;
      for (std::size_t i = 0; i < words.size(); ++i) kept += words[i] == original[i] ? 1 : 0;
      EvalRecord r;
      r.system_id = "sys" + std::to_string(sys);
      r.doc_id = "doc" + std::to_string(d);
      r.source = source;
      r.summary = summary;
      r.human_score = static_cast<double>(kept) / static_cast<double>(words.size());
      ds.records.push_back(std::move(r));
    }
  }
  return ds;
}

std::vector<MCQuestion> ScriptedBackend::generate_questions(const GenerationRequest& req) {
  if (questions.size() < req.num_questions()) {
    throw ShortGenerationError(req.num_questions(), questions);
  }
  return {questions.begin(),
          questions.begin() + static_cast<std::ptrdiff_t>(req.num_questions())};
}

OptionDistribution ScriptedBackend::answer(const AnswerRequest& req) {
  const std::size_t n = served_++;
  if (fail_after_answers && n >= *fail_after_answers) {
    throw TransportError("scripted failure");
  }
  auto it = answers.find({req.context(), req.question().id});
  if (it == answers.end()) {
    return OptionDistribution::uniform(req.question().options.size());
  }
  return it->second;
}

MCQuestion simple_question(std::string id, std::size_t k) {
  MCQuestion q;
  q.id = std::move(id);
  q.stem = "Which letter?";
  for (std::size_t i = 0; i < k; ++i) q.options.push_back(std::string(1, static_cast<char>('a' + i)));
  q.answer_index = 0;
  return q;
}

}  // namespace mqag::testing
