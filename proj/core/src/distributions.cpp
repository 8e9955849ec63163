// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "mqag/error.hpp"

namespace mqag {

namespace {

void require_same_length(const OptionDistribution& p, const OptionDistribution& q) {
  if (p.size() != q.size()) {
    throw ContractViolation("distance between distributions of different length (" +
                            std::to_string(p.size()) + " vs " + std::to_string(q.size()) +
                            ")");
  }
}

std::vector<double> clamp_and_renormalize(std::span<const double> probs) {
  std::vector<double> out(probs.begin(), probs.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::max(v, kKlClampEpsilon);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

OptionDistribution::OptionDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw ContractViolation("option distribution needs at least 2 entries, got " +
                            std::to_string(probs_.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double v = probs_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ContractViolation("probability at index " + std::to_string(i) +
                              " outside [0, 1]: " + std::to_string(v));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw ContractViolation("probabilities sum to " + std::to_string(total) +
                            ", expected 1 within 1e-6");
  }
  if (total != 1.0) {
    for (double& v : probs_) v /= total;
  }
}

OptionDistribution OptionDistribution::uniform(std::size_t k) {
  if (k < 2) throw ContractViolation("uniform distribution needs k >= 2");
  return OptionDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

std::size_t OptionDistribution::argmax() const noexcept {
  return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) -
                                  probs_.begin());
}

std::string_view to_string(DistanceKind kind) noexcept {
  switch (kind) {
    case DistanceKind::KL:
      return "kl";
    case DistanceKind::OneBest:
      return "ob";
    case DistanceKind::TotalVariation:
      return "tv";
    case DistanceKind::Hellinger:
      return "hl";
  }
  return "?";
}

std::optional<DistanceKind> parse_distance_kind(std::string_view name) noexcept {
  const std::string n = lower(name);
  if (n == "kl" || n == "kl-divergence") return DistanceKind::KL;
  if (n == "ob" || n == "one-best" || n == "onebest") return DistanceKind::OneBest;
  if (n == "tv" || n == "total-variation") return DistanceKind::TotalVariation;
  if (n == "hl" || n == "hellinger") return DistanceKind::Hellinger;
  return std::nullopt;
}

double kl_divergence(const OptionDistribution& p, const OptionDistribution& q) {
  require_same_length(p, q);
  const auto pc = clamp_and_renormalize(p.probs());
  const auto qc = clamp_and_renormalize(q.probs());
  double sum = 0.0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    if (pc[i] == qc[i]) continue;
    sum += pc[i] * std::log2(pc[i] / qc[i]);
  }
  // Gibbs: KL >= 0; rounding can push a near-zero sum slightly negative.
  return std::max(sum, 0.0);
}

double one_best(const OptionDistribution& p, const OptionDistribution& q) {
  require_same_length(p, q);
  return p.argmax() == q.argmax() ? 0.0 : 1.0;
}

double total_variation(const OptionDistribution& p, const OptionDistribution& q) {
  require_same_length(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double hellinger(const OptionDistribution& p, const OptionDistribution& q) {
  require_same_length(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    sum += d * d;
  }
  return std::clamp(std::sqrt(0.5 * sum), 0.0, 1.0);
}

double distance(DistanceKind kind, const OptionDistribution& p, const OptionDistribution& q) {
  switch (kind) {
    case DistanceKind::KL:
      return kl_divergence(p, q);
    case DistanceKind::OneBest:
      return one_best(p, q);
    case DistanceKind::TotalVariation:
      return total_variation(p, q);
    case DistanceKind::Hellinger:
      return hellinger(p, q);
  }
  throw ContractViolation("unknown distance kind");
}

double entropy_bits(const OptionDistribution& p) noexcept {
  double h = 0.0;
  for (double v : p.probs()) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::max(h, 0.0);
}

double effective_options(const OptionDistribution& p) noexcept {
  return std::clamp(std::exp2(entropy_bits(p)), 1.0, static_cast<double>(p.size()));
}

}  // namespace mqag
