// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/textmetrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "mqag/error.hpp"

namespace mqag::text {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed
};

// Malformed sequences decode as a single opaque byte.
CodePoint decode_utf8(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_space(char32_t c) {
  switch (c) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1:
    case 0xA7:
    case 0xAB:
    case 0xB6:
    case 0xB7:
    case 0xBB:
    case 0xBF:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0xFF01 && c <= 0xFF0F);
}

std::string strip_and_lower(std::string_view piece) {
  // Walk code points, remembering the byte span between the first and last
  // non-punctuation characters.
  std::size_t begin = piece.size();
  std::size_t end = 0;
  for (std::size_t pos = 0; pos < piece.size();) {
    const auto cp = decode_utf8(piece, pos);
    if (!is_punct(cp.value)) {
      begin = std::min(begin, pos);
      end = pos + cp.length;
    }
    pos += cp.length;
  }
  if (begin >= end) return {};
  std::string out(piece.substr(begin, end - begin));
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence tokens;
  std::size_t piece_start = 0;
  bool in_piece = false;
  auto flush = [&](std::size_t piece_end) {
    if (!in_piece) return;
    auto tok = strip_and_lower(text.substr(piece_start, piece_end - piece_start));
    if (!tok.empty()) tokens.push_back(std::move(tok));
    in_piece = false;
  };
  for (std::size_t pos = 0; pos < text.size();) {
    const auto cp = decode_utf8(text, pos);
    if (is_space(cp.value)) {
      flush(pos);
    } else if (!in_piece) {
      piece_start = pos;
      in_piece = true;
    }
    pos += cp.length;
  }
  flush(text.size());
  return tokens;
}

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge1_f1(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  std::unordered_map<std::string_view, std::size_t> ref_counts;
  for (const auto& t : reference) ++ref_counts[t];
  std::size_t overlap = 0;
  for (const auto& t : candidate) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / static_cast<double>(candidate.size());
  const double recall = static_cast<double>(overlap) / static_cast<double>(reference.size());
  return 2.0 * precision * recall / (precision + recall);
}

double rougeL_precision(std::span<const std::string> candidate,
                        std::span<const std::string> reference) {
  if (candidate.empty()) throw ContractViolation("ROUGE-L precision of an empty candidate");
  return static_cast<double>(lcs_length(candidate, reference)) /
         static_cast<double>(candidate.size());
}

double abstractiveness(std::string_view summary, std::string_view source) {
  const auto s = tokenize(summary);
  if (s.empty()) throw ContractViolation("abstractiveness of a summary with no tokens");
  return 1.0 - rougeL_precision(s, tokenize(source));
}

}  // namespace mqag::text
