// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mqag::cli {

/// Process exit codes. Stable; scripts depend on them.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBackend = 2,
  kExitData = 3,
};

/// Defaults normally taken from MQAG_BACKEND_URL / MQAG_BACKEND_TOKEN.
struct Environment {
  std::optional<std::string> backend_url;
  std::optional<std::string> backend_token;

  static Environment from_process();
};

/// Runs one command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = Environment::from_process());

}  // namespace mqag::cli
