// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/backend.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

#include "mqag/detail/random.hpp"
#include "mqag/remote_backend.hpp"
#include "mqag/textmetrics.hpp"

namespace mqag {

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

void validate_question(const MCQuestion& q) {
  if (q.options.size() < 2) {
    throw ContractViolation("question '" + q.id + "' has " + std::to_string(q.options.size()) +
                            " options, need at least 2");
  }
  if (q.answer_index >= q.options.size()) {
    throw ContractViolation("question '" + q.id + "' answer_index " +
                            std::to_string(q.answer_index) + " out of range");
  }
  std::set<std::string> seen;
  for (const auto& opt : q.options) {
    if (!seen.insert(normalize_whitespace(opt)).second) {
      throw ContractViolation("question '" + q.id + "' has duplicate option '" + opt + "'");
    }
  }
}

bool repair_duplicate_options(MCQuestion& q) {
  bool changed = false;
  std::set<std::string> seen;
  for (auto& opt : q.options) {
    if (seen.insert(normalize_whitespace(opt)).second) continue;
    for (int copy = 2;; ++copy) {
      std::string candidate = opt + " (" + std::to_string(copy) + ")";
      if (seen.insert(normalize_whitespace(candidate)).second) {
        opt = std::move(candidate);
        break;
      }
    }
    changed = true;
  }
  return changed;
}

GenerationRequest::GenerationRequest(std::string context, std::size_t num_questions,
                                     std::size_t num_options, std::optional<std::uint64_t> seed)
    : context_(std::move(context)),
      num_questions_(num_questions),
      num_options_(num_options),
      seed_(seed) {
  if (context_.empty()) throw ContractViolation("generation context is empty");
  if (num_questions_ < 1) throw ContractViolation("num_questions must be >= 1");
  if (num_options_ < 2) throw ContractViolation("num_options must be >= 2");
}

AnswerRequest::AnswerRequest(std::string context, MCQuestion question)
    : context_(std::move(context)), question_(std::move(question)) {
  if (context_.empty()) throw ContractViolation("answer context is empty");
  validate_question(question_);
}

void validate(const BackendDescriptor& desc) {
  if (desc.kind == BackendKind::Remote && (!desc.endpoint || desc.endpoint->empty())) {
    throw ContractViolation("remote backend requires an endpoint");
  }
  if (desc.max_retries < 0 || desc.max_retries > 10) {
    throw ContractViolation("max_retries must be in [0, 10]");
  }
  if (desc.timeout.count() <= 0) throw ContractViolation("timeout must be positive");
  if (desc.max_connections < 1) throw ContractViolation("max_connections must be >= 1");
}

std::unique_ptr<Backend> make_backend(const BackendDescriptor& desc) {
  validate(desc);
  switch (desc.kind) {
    case BackendKind::Mock:
      return std::make_unique<MockBackend>(desc.max_connections);
    case BackendKind::Remote:
      return std::make_unique<RemoteBackend>(desc);
  }
  throw ContractViolation("unknown backend kind");
}

// ---------------------------------------------------------------------------
// Mock
// ---------------------------------------------------------------------------

namespace {

const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "the",   "and",    "for",   "are",   "was",   "were",  "has",   "have",  "had",
      "been",  "being",  "but",   "not",   "you",   "your",  "our",   "its",   "his",
      "her",   "their",  "they",  "them",  "she",   "him",   "who",   "whom",  "which",
      "that",  "this",   "these", "those", "with",  "from",  "into",  "onto",  "upon",
      "than",  "then",   "there", "here",  "when",  "where", "what",  "why",   "how",
      "all",   "any",    "each",  "few",   "more",  "most",  "other", "some",  "such",
      "only",  "own",    "same",  "too",   "very",  "can",   "will",  "just",  "should",
      "would", "could",  "about", "above", "after", "again", "against", "below", "between",
      "both",  "during", "before", "over", "under", "off",   "out",   "also",  "said",
      "did",   "does",   "doing", "may",   "might", "must",  "shall", "while", "because",
      "until", "through", "nor",  "yet",   "one",   "it's"};
  return words;
}

bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || c >= 0x80;
  });
}

bool is_content(std::string_view token) {
  return token.size() >= 3 && has_alnum(token) && !stopwords().contains(token);
}

// One whitespace-delimited word of a sentence, with its normalized token.
struct Word {
  std::string raw;
  std::string token;  // empty if the word is punctuation only
};

struct Sentence {
  std::vector<Word> words;
  std::vector<std::size_t> content_positions;
};

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    current += c;
    const bool terminal = c == '.' || c == '!' || c == '?';
    const bool boundary = i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n' ||
                          text[i + 1] == '\t' || text[i + 1] == '\r';
    if (terminal && boundary) {
      auto norm = normalize_whitespace(current);
      if (!norm.empty()) out.push_back(std::move(norm));
      current.clear();
    }
  }
  auto tail = normalize_whitespace(current);
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

Sentence analyse(const std::string& sentence) {
  Sentence s;
  std::size_t start = 0;
  while (start < sentence.size()) {
    auto end = sentence.find(' ', start);
    if (end == std::string::npos) end = sentence.size();
    Word w;
    w.raw = sentence.substr(start, end - start);
    auto toks = text::tokenize(w.raw);
    // A word like "state-of-the-art" stays one token; tokenize only splits on
    // whitespace, so at most one token comes back.
    if (!toks.empty()) w.token = std::move(toks.front());
    if (is_content(w.token)) s.content_positions.push_back(s.words.size());
    s.words.push_back(std::move(w));
    start = end + 1;
  }
  return s;
}

// Replaces the token part of a raw word with a blank, keeping punctuation
// such as a trailing full stop.
std::string blank_word(const Word& w) {
  std::string lower = w.raw;
  for (char& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  const auto at = lower.find(w.token);
  if (at == std::string::npos) return "____";
  return w.raw.substr(0, at) + "____" + w.raw.substr(at + w.token.size());
}

std::string make_stem(const Sentence& s, std::size_t blank_pos) {
  std::string stem;
  for (std::size_t i = 0; i < s.words.size(); ++i) {
    if (i) stem += ' ';
    stem += i == blank_pos ? blank_word(s.words[i]) : s.words[i].raw;
  }
  return stem;
}

void append_unique(std::vector<std::string>& pool, std::set<std::string>& seen,
                   const std::string& token, const std::string& exclude) {
  if (token != exclude && seen.insert(token).second) pool.push_back(token);
}

}  // namespace

std::vector<MCQuestion> mock_generate(std::string_view context, std::size_t n, std::size_t k,
                                      std::optional<std::uint64_t> seed) {
  if (context.empty()) throw ContractViolation("generation context is empty");
  if (k < 2) throw ContractViolation("num_options must be >= 2");

  std::vector<Sentence> sentences;
  std::set<std::string> vocabulary;
  for (const auto& raw : split_sentences(context)) {
    auto s = analyse(raw);
    for (auto pos : s.content_positions) vocabulary.insert(s.words[pos].token);
    sentences.push_back(std::move(s));
  }
  if (vocabulary.size() < k) {
    throw InsufficientContentError("context has " + std::to_string(vocabulary.size()) +
                                   " distinct content words, need at least " +
                                   std::to_string(k));
  }
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!sentences[i].content_positions.empty()) usable.push_back(i);
  }

  std::mt19937_64 rng(detail::mix_seed(seed.value_or(0), detail::fnv1a64(context)));
  std::vector<MCQuestion> questions;
  questions.reserve(n);
  for (std::size_t qi = 0; qi < n; ++qi) {
    const std::size_t si = usable[detail::uniform_index(rng, usable.size())];
    const Sentence& sentence = sentences[si];
    const std::size_t blank_pos =
        sentence.content_positions[detail::uniform_index(rng, sentence.content_positions.size())];
    const std::string& answer = sentence.words[blank_pos].token;

    std::vector<std::string> pool;
    std::set<std::string> seen;
    for (std::size_t other = 0; other < sentences.size(); ++other) {
      if (other == si) continue;
      for (auto pos : sentences[other].content_positions) {
        append_unique(pool, seen, sentences[other].words[pos].token, answer);
      }
    }
    // Partial Fisher-Yates over the cross-sentence pool first, then the same
    // sentence if that pool is too small.
    std::vector<std::string> distractors;
    auto draw_from = [&](std::vector<std::string>& from) {
      while (distractors.size() + 1 < k && !from.empty()) {
        const std::size_t j = detail::uniform_index(rng, from.size());
        distractors.push_back(std::move(from[j]));
        from[j] = std::move(from.back());
        from.pop_back();
      }
    };
    draw_from(pool);
    if (distractors.size() + 1 < k) {
      std::vector<std::string> local;
      for (auto pos : sentence.content_positions) {
        append_unique(local, seen, sentence.words[pos].token, answer);
      }
      draw_from(local);
    }

    MCQuestion q;
    q.id = "q" + std::to_string(qi);
    q.stem = make_stem(sentence, blank_pos);
    q.options.push_back(answer);
    for (auto& d : distractors) q.options.push_back(std::move(d));
    std::vector<std::size_t> order(q.options.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    detail::shuffle(order.begin(), order.end(), rng);
    std::vector<std::string> permuted(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      permuted[i] = q.options[order[i]];
      if (order[i] == 0) q.answer_index = i;
    }
    q.options = std::move(permuted);
    repair_duplicate_options(q);
    questions.push_back(std::move(q));
  }
  return questions;
}

OptionDistribution mock_answer(std::string_view context, const MCQuestion& question) {
  const auto ctx_tokens = text::tokenize(context);
  const std::unordered_set<std::string> vocab(ctx_tokens.begin(), ctx_tokens.end());

  std::vector<double> logits;
  logits.reserve(question.options.size());
  for (const auto& opt : question.options) {
    const auto toks = text::tokenize(opt);
    double score = 0.0;
    if (!toks.empty()) {
      std::size_t hits = 0;
      for (const auto& t : toks) hits += vocab.contains(t) ? 1 : 0;
      score = static_cast<double>(hits) / static_cast<double>(toks.size());
    }
    logits.push_back(score / kMockTemperature);
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logits) l /= total;
  return OptionDistribution(std::move(logits));
}

std::vector<MCQuestion> MockBackend::generate_questions(const GenerationRequest& req) {
  return mock_generate(req.context(), req.num_questions(), req.num_options(), req.seed());
}

OptionDistribution MockBackend::answer(const AnswerRequest& req) {
  return mock_answer(req.context(), req.question());
}

}  // namespace mqag
