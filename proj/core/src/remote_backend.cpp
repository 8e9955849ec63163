// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/remote_backend.hpp"

#include <httplib.h>

#include <chrono>
#include <semaphore>
#include <set>
#include <thread>

#include "mqag/wire.hpp"

namespace mqag {

Endpoint Endpoint::parse(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) {
    throw ContractViolation("endpoint must start with http:// (got '" + std::string(url) + "')");
  }
  std::string_view rest = url.substr(scheme.size());
  Endpoint ep;
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) {
    ep.base_path = std::string(rest.substr(slash));
    while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  }
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const std::string port(authority.substr(colon + 1));
    try {
      std::size_t used = 0;
      ep.port = std::stoi(port, &used);
      if (used != port.size() || ep.port <= 0 || ep.port > 65535) throw std::out_of_range("port");
    } catch (const std::exception&) {
      throw ContractViolation("invalid port in endpoint '" + std::string(url) + "'");
    }
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw ContractViolation("endpoint has no host: '" + std::string(url) + "'");
  ep.host = std::string(authority);
  return ep;
}

struct RemoteBackend::Impl {
  explicit Impl(const BackendDescriptor& d)
      : desc(d),
        endpoint(Endpoint::parse(*d.endpoint)),
        slots(static_cast<std::ptrdiff_t>(d.max_connections)) {}

  BackendDescriptor desc;
  Endpoint endpoint;
  std::counting_semaphore<> slots;

  struct SlotGuard {
    std::counting_semaphore<>& sem;
    explicit SlotGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
    ~SlotGuard() { sem.release(); }
  };

  // POSTs body to path and returns the 200 response body.
  std::string post(std::string_view path, const std::string& body) {
    SlotGuard guard(slots);
    const std::string target = endpoint.base_path + std::string(path);
    const int attempts = 1 + desc.max_retries;
    std::string last_error;
    bool last_was_timeout = false;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
      if (attempt > 1) {
        std::this_thread::sleep_for(desc.retry_backoff * (1 << (attempt - 2)));
      }
      httplib::Client client(endpoint.host, endpoint.port);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(desc.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(desc.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      httplib::Headers headers;
      if (desc.bearer_token) headers.emplace("Authorization", "Bearer " + *desc.bearer_token);

      const auto started = std::chrono::steady_clock::now();
      auto res = client.Post(target, headers, body, "application/json");
      const auto elapsed = std::chrono::steady_clock::now() - started;

      if (!res) {
        const auto err = res.error();
        last_was_timeout = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && elapsed >= desc.timeout);
        last_error = httplib::to_string(err);
        continue;
      }
      if (res->status == 200) return res->body;
      if (res->status >= 500) {
        last_was_timeout = false;
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      std::string message = res->body;
      try {
        message = wire::decode_error(res->body);
      } catch (const DecodeError&) {
      }
      throw RequestRejected(res->status, message);
    }
    const std::string what = "POST " + target + " to " + endpoint.host + ":" +
                             std::to_string(endpoint.port) + " failed after " +
                             std::to_string(attempts) + " attempt(s): " + last_error;
    if (last_was_timeout) throw TimeoutError(what);
    throw TransportError(what);
  }
};

RemoteBackend::RemoteBackend(const BackendDescriptor& desc) {
  BackendDescriptor d = desc;
  d.kind = BackendKind::Remote;
  validate(d);
  impl_ = std::make_unique<Impl>(d);
}

RemoteBackend::~RemoteBackend() = default;

std::size_t RemoteBackend::max_concurrency() const noexcept { return impl_->desc.max_connections; }

const Endpoint& RemoteBackend::endpoint() const noexcept { return impl_->endpoint; }

std::vector<MCQuestion> RemoteBackend::generate_questions(const GenerationRequest& req) {
  const std::string payload =
      impl_->post(wire::kGeneratePath, wire::encode_generate_request(wire::to_call(req)));
  auto questions = wire::decode_generate_response(payload);
  if (questions.size() > req.num_questions()) {
    throw ValidationError("backend returned " + std::to_string(questions.size()) +
                              " questions, requested " + std::to_string(req.num_questions()),
                          payload);
  }
  std::set<std::string> ids;
  for (auto& q : questions) {
    if (q.options.size() != req.num_options()) {
      throw ValidationError("question '" + q.id + "' has " + std::to_string(q.options.size()) +
                                " options, requested " + std::to_string(req.num_options()),
                            payload);
    }
    if (q.answer_index >= q.options.size()) {
      throw ValidationError("question '" + q.id + "' answer_index out of range", payload);
    }
    if (!ids.insert(q.id).second) {
      throw ValidationError("duplicate question id '" + q.id + "'", payload);
    }
    repair_duplicate_options(q);
  }
  if (questions.size() < req.num_questions()) {
    throw ShortGenerationError(req.num_questions(), std::move(questions));
  }
  return questions;
}

OptionDistribution RemoteBackend::answer(const AnswerRequest& req) {
  const std::string payload =
      impl_->post(wire::kAnswerPath, wire::encode_answer_request(wire::to_call(req)));
  auto probs = wire::decode_answer_response(payload);
  if (probs.size() != req.question().options.size()) {
    throw ValidationError("backend returned " + std::to_string(probs.size()) +
                              " probabilities for " +
                              std::to_string(req.question().options.size()) + " options",
                          payload);
  }
  try {
    return OptionDistribution(std::move(probs));
  } catch (const ContractViolation& e) {
    throw ValidationError(std::string("invalid option distribution: ") + e.what(), payload);
  }
}

}  // namespace mqag
