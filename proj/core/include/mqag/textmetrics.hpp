// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mqag::text {

/// Lowercased word tokens; never contains an empty token.
using TokenSequence = std::vector<std::string>;

/// Lowercase (ASCII), split on Unicode whitespace, strip leading and trailing
/// punctuation from each piece, drop pieces that end up empty.
TokenSequence tokenize(std::string_view text);

/// Joins tokens with single spaces.
std::string join(std::span<const std::string> tokens);

/// Length of the longest common (not necessarily contiguous) subsequence.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Unigram F1 with clipped counts. 0 when either side is empty or nothing
/// overlaps.
double rouge1_f1(std::span<const std::string> candidate, std::span<const std::string> reference);

/// LCS(candidate, reference) / |candidate|. Throws ContractViolation on an
/// empty candidate.
double rougeL_precision(std::span<const std::string> candidate,
                        std::span<const std::string> reference);

/// 1 - ROUGE-L precision of the summary against the source.
double abstractiveness(std::string_view summary, std::string_view source);

}  // namespace mqag::text
