// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mqag::testing {

/// Directory holding the checked-in test fixtures.
std::filesystem::path fixtures_dir();

/// One stored payload. `kind` is the message type, e.g. "generate_request".
struct WirePayload {
  std::string kind;
  std::string name;
  std::string body;
};

/// Canonical payloads under wire/valid, named <kind>_<case>.json.
std::vector<WirePayload> load_valid_payloads();
/// Malformed payloads under wire/violations, named <kind>__<case>.json.
std::vector<WirePayload> load_violation_payloads();

/// Response bodies the codec accepts but the client must reject, under
/// wire/domain, named <endpoint>__<case>__<expected>.json. `endpoint` is
/// "generate" or "answer"; `expected` is "validation", "short" or "decode".
struct ServedViolation {
  std::string endpoint;
  std::string name;
  std::string expected;
  std::string body;
};
std::vector<ServedViolation> load_served_violations();

/// Decodes with the codec for `kind` and encodes the result again.
std::string decode_encode(const std::string& kind, const std::string& body);

}  // namespace mqag::testing
