// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/wire.hpp"

#include <json.hpp>

namespace mqag::wire {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse(std::string_view payload) {
  try {
    return ojson::parse(payload);
  } catch (const ojson::parse_error& e) {
    throw DecodeError(std::string("malformed JSON: ") + e.what(), std::string(payload));
  }
}

const ojson& require(const ojson& obj, const char* field, std::string_view payload) {
  if (!obj.is_object()) {
    throw DecodeError("expected a JSON object", std::string(payload));
  }
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw DecodeError(std::string("missing required field '") + field + "'", std::string(payload));
  }
  return *it;
}

std::string as_string(const ojson& v, const char* field, std::string_view payload) {
  if (!v.is_string()) {
    throw DecodeError(std::string("field '") + field + "' must be a string", std::string(payload));
  }
  return v.get<std::string>();
}

std::int64_t as_int(const ojson& v, const char* field, std::string_view payload) {
  if (!v.is_number_integer()) {
    throw DecodeError(std::string("field '") + field + "' must be an integer",
                      std::string(payload));
  }
  return v.get<std::int64_t>();
}

std::vector<std::string> as_strings(const ojson& v, const char* field, std::string_view payload) {
  if (!v.is_array()) {
    throw DecodeError(std::string("field '") + field + "' must be an array", std::string(payload));
  }
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_string(e, field, payload));
  return out;
}

ojson strings_json(std::span<const std::string> values) {
  ojson arr = ojson::array();
  for (const auto& s : values) arr.push_back(s);
  return arr;
}

}  // namespace

GenerateCall to_call(const GenerationRequest& req) {
  GenerateCall call;
  call.context = req.context();
  call.num_questions = static_cast<std::int64_t>(req.num_questions());
  call.num_options = static_cast<std::int64_t>(req.num_options());
  if (req.seed()) call.seed = static_cast<std::int64_t>(*req.seed());
  return call;
}

AnswerCall to_call(const AnswerRequest& req) {
  return {req.context(), req.question().stem, req.question().options};
}

std::string encode_generate_request(const GenerateCall& call) {
  ojson j;
  j["context"] = call.context;
  j["num_questions"] = call.num_questions;
  j["num_options"] = call.num_options;
  j["seed"] = call.seed ? ojson(*call.seed) : ojson(nullptr);
  return j.dump();
}

GenerateCall decode_generate_request(std::string_view payload) {
  const ojson j = parse(payload);
  GenerateCall call;
  call.context = as_string(require(j, "context", payload), "context", payload);
  call.num_questions = as_int(require(j, "num_questions", payload), "num_questions", payload);
  call.num_options = as_int(require(j, "num_options", payload), "num_options", payload);
  const ojson& seed = require(j, "seed", payload);
  if (!seed.is_null()) call.seed = as_int(seed, "seed", payload);
  return call;
}

std::string encode_generate_response(std::span<const MCQuestion> questions) {
  ojson arr = ojson::array();
  for (const auto& q : questions) {
    ojson item;
    item["id"] = q.id;
    item["stem"] = q.stem;
    item["options"] = strings_json(q.options);
    item["answer_index"] = q.answer_index;
    arr.push_back(std::move(item));
  }
  ojson j;
  j["questions"] = std::move(arr);
  return j.dump();
}

std::vector<MCQuestion> decode_generate_response(std::string_view payload) {
  const ojson j = parse(payload);
  const ojson& arr = require(j, "questions", payload);
  if (!arr.is_array()) throw DecodeError("field 'questions' must be an array", std::string(payload));
  std::vector<MCQuestion> out;
  out.reserve(arr.size());
  for (const auto& item : arr) {
    MCQuestion q;
    q.id = as_string(require(item, "id", payload), "id", payload);
    q.stem = as_string(require(item, "stem", payload), "stem", payload);
    q.options = as_strings(require(item, "options", payload), "options", payload);
    const auto idx = as_int(require(item, "answer_index", payload), "answer_index", payload);
    if (idx < 0) throw DecodeError("field 'answer_index' must be >= 0", std::string(payload));
    q.answer_index = static_cast<std::size_t>(idx);
    out.push_back(std::move(q));
  }
  return out;
}

std::string encode_answer_request(const AnswerCall& call) {
  ojson j;
  j["context"] = call.context;
  j["stem"] = call.stem;
  j["options"] = strings_json(call.options);
  return j.dump();
}

AnswerCall decode_answer_request(std::string_view payload) {
  const ojson j = parse(payload);
  AnswerCall call;
  call.context = as_string(require(j, "context", payload), "context", payload);
  call.stem = as_string(require(j, "stem", payload), "stem", payload);
  call.options = as_strings(require(j, "options", payload), "options", payload);
  return call;
}

std::string encode_answer_response(std::span<const double> probabilities) {
  ojson j;
  ojson arr = ojson::array();
  for (double p : probabilities) arr.push_back(p);
  j["probabilities"] = std::move(arr);
  return j.dump();
}

std::vector<double> decode_answer_response(std::string_view payload) {
  const ojson j = parse(payload);
  const ojson& arr = require(j, "probabilities", payload);
  if (!arr.is_array()) {
    throw DecodeError("field 'probabilities' must be an array", std::string(payload));
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw DecodeError("field 'probabilities' must hold numbers", std::string(payload));
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::string encode_error(std::string_view message) {
  ojson j;
  j["error"] = std::string(message);
  return j.dump();
}

std::string decode_error(std::string_view payload) {
  const ojson j = parse(payload);
  return as_string(require(j, "error", payload), "error", payload);
}

}  // namespace mqag::wire
