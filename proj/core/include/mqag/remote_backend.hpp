// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "mqag/backend.hpp"

namespace mqag {

/// Parsed form of an "http://host[:port][/prefix]" endpoint.
struct Endpoint {
  std::string host;
  int port = 80;
  std::string base_path;  // no trailing slash; empty for the root

  /// Throws ContractViolation for anything but an http:// URL.
  static Endpoint parse(std::string_view url);
};

/**
 * Client for a model service speaking mqag/1 over HTTP.
 *
 * Each call retries transport failures and 5xx responses up to max_retries
 * times with exponential backoff, then throws TransportError or TimeoutError.
 * A 4xx response throws RequestRejected immediately. Responses are decoded
 * and validated: DecodeError for malformed payloads, ValidationError for
 * content that breaks a domain invariant, ShortGenerationError when fewer
 * questions come back than were asked for. Duplicate options in generated
 * questions are repaired rather than rejected.
 *
 * At most max_connections requests are in flight at once; calls beyond that
 * block until a slot frees up.
 */
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(const BackendDescriptor& desc);
  ~RemoteBackend() override;

  RemoteBackend(const RemoteBackend&) = delete;
  RemoteBackend& operator=(const RemoteBackend&) = delete;

  std::vector<MCQuestion> generate_questions(const GenerationRequest& req) override;
  OptionDistribution answer(const AnswerRequest& req) override;
  std::size_t max_concurrency() const noexcept override;

  const Endpoint& endpoint() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mqag
