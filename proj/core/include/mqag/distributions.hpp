// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file distributions.hpp
 * @brief Categorical option distributions and the distances between them.
 *
 * An OptionDistribution is the probability an answering model assigns to each
 * option of one multiple-choice question. Four distances compare a
 * source-conditioned distribution against a summary-conditioned one:
 *
 * - KL:             sum_o p(o) * log2(p(o) / q(o)), after clamping to 1e-10
 * - OneBest:        0 if argmax p == argmax q, else 1
 * - TotalVariation: 0.5 * ||p - q||_1
 * - Hellinger:      (1 / sqrt 2) * ||sqrt p - sqrt q||_2
 *
 * KL is unbounded; the other three lie in [0, 1]. Logarithms are base 2
 * throughout, matching effective_options().
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mqag {

class OptionDistribution {
 public:
  /// Entries must be in [0, 1] and sum to 1 within kSumTolerance; they are
  /// stored renormalized. Throws ContractViolation otherwise or if K < 2.
  explicit OptionDistribution(std::vector<double> probs);

  static OptionDistribution uniform(std::size_t k);

  static constexpr double kSumTolerance = 1e-6;

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  /// Index of the largest entry; ties go to the lowest index.
  std::size_t argmax() const noexcept;

  friend bool operator==(const OptionDistribution&, const OptionDistribution&) = default;

 private:
  std::vector<double> probs_;
};

enum class DistanceKind { KL, OneBest, TotalVariation, Hellinger };

inline constexpr DistanceKind kAllDistanceKinds[] = {
    DistanceKind::KL, DistanceKind::OneBest, DistanceKind::TotalVariation,
    DistanceKind::Hellinger};

/// Short name used on the command line and in reports: kl, ob, tv, hl.
std::string_view to_string(DistanceKind kind) noexcept;

/// Accepts the short names plus kl-divergence, one-best, total-variation,
/// hellinger (case-insensitive).
std::optional<DistanceKind> parse_distance_kind(std::string_view name) noexcept;

/// Floor applied to every probability before the KL log ratio.
inline constexpr double kKlClampEpsilon = 1e-10;

// First argument is the reference (source-conditioned) distribution. All
// four throw ContractViolation on a length mismatch.
double kl_divergence(const OptionDistribution& p, const OptionDistribution& q);
double one_best(const OptionDistribution& p, const OptionDistribution& q);
double total_variation(const OptionDistribution& p, const OptionDistribution& q);
double hellinger(const OptionDistribution& p, const OptionDistribution& q);

double distance(DistanceKind kind, const OptionDistribution& p, const OptionDistribution& q);

/// Base-2 entropy in bits, with 0 log 0 = 0.
double entropy_bits(const OptionDistribution& p) noexcept;

/// 2^H(p): 1 for a one-hot distribution, K for the uniform one. Used as the
/// answerability measure of a question.
double effective_options(const OptionDistribution& p) noexcept;

}  // namespace mqag
