// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file wire.hpp
 * @brief JSON codec for the mqag/1 backend protocol.
 *
 *   POST {endpoint}/generate
 *     request : {"context": str, "num_questions": int, "num_options": int, "seed": int|null}
 *     response: {"questions": [{"id": str, "stem": str, "options": [str], "answer_index": int}]}
 *   POST {endpoint}/answer
 *     request : {"context": str, "stem": str, "options": [str]}
 *     response: {"probabilities": [number]}
 *   errors (4xx): {"error": str}
 *
 * Encoders emit compact JSON with keys in the order above, so a payload in
 * that canonical form survives decode followed by encode byte for byte.
 * Decoders throw DecodeError (carrying the raw payload) on malformed JSON, a
 * missing required field or a wrong type. They never fill in defaults. Domain
 * checks such as probabilities summing to one happen in the client, which
 * throws ValidationError.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqag/backend.hpp"

namespace mqag::wire {

inline constexpr std::string_view kProtocolVersion = "mqag/1";
inline constexpr std::string_view kGeneratePath = "/generate";
inline constexpr std::string_view kAnswerPath = "/answer";

struct GenerateCall {
  std::string context;
  std::int64_t num_questions = 0;
  std::int64_t num_options = 0;
  std::optional<std::int64_t> seed;

  friend bool operator==(const GenerateCall&, const GenerateCall&) = default;
};

struct AnswerCall {
  std::string context;
  std::string stem;
  std::vector<std::string> options;

  friend bool operator==(const AnswerCall&, const AnswerCall&) = default;
};

GenerateCall to_call(const GenerationRequest& req);
AnswerCall to_call(const AnswerRequest& req);

std::string encode_generate_request(const GenerateCall& call);
GenerateCall decode_generate_request(std::string_view payload);

std::string encode_generate_response(std::span<const MCQuestion> questions);
std::vector<MCQuestion> decode_generate_response(std::string_view payload);

std::string encode_answer_request(const AnswerCall& call);
AnswerCall decode_answer_request(std::string_view payload);

std::string encode_answer_response(std::span<const double> probabilities);
std::vector<double> decode_answer_response(std::string_view payload);

std::string encode_error(std::string_view message);
std::string decode_error(std::string_view payload);

}  // namespace mqag::wire
