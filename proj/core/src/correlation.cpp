// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mqag/error.hpp"

namespace mqag {

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ContractViolation("pearson on vectors of different length (" +
                            std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw ContractViolation("pearson needs at least 2 points");
  // Tested on the raw values: a rounded mean can leave residue in sxx.
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) throw UndefinedCorrelation("zero variance");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) share ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ContractViolation("spearman on vectors of different length");
  }
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

namespace {

void require_same_keys(const ScoreTable& metric, const ScoreTable& human) {
  if (metric.size() != human.size() ||
      !std::equal(metric.begin(), metric.end(), human.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw ShapeError("metric and human score tables cover different (system, doc) keys");
  }
}

}  // namespace

CorrelationResult system_level_corr(const ScoreTable& metric, const ScoreTable& human) {
  require_same_keys(metric, human);
  std::map<std::string, std::set<std::string>> docs_by_system;
  std::map<std::string, std::pair<double, double>> sums;
  for (const auto& [key, value] : metric) {
    docs_by_system[key.system_id].insert(key.doc_id);
    sums[key.system_id].first += value;
    sums[key.system_id].second += human.at(key);
  }
  if (docs_by_system.size() < 2) {
    throw ShapeError("system-level correlation needs at least 2 systems");
  }
  const auto& reference = docs_by_system.begin()->second;
  for (const auto& [system, docs] : docs_by_system) {
    if (docs != reference) {
      throw ShapeError("system '" + system + "' does not cover the same documents as '" +
                       docs_by_system.begin()->first + "'");
    }
  }
  const double m = static_cast<double>(reference.size());
  std::vector<double> metric_means, human_means;
  for (const auto& [system, s] : sums) {
    metric_means.push_back(s.first / m);
    human_means.push_back(s.second / m);
  }
  CorrelationResult r;
  r.pearson = pearson(metric_means, human_means);
  r.spearman = spearman(metric_means, human_means);
  r.n_used = metric_means.size();
  return r;
}

CorrelationResult summary_level_corr(const ScoreTable& metric, const ScoreTable& human) {
  require_same_keys(metric, human);
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_doc;
  for (const auto& [key, value] : metric) {
    auto& cols = by_doc[key.doc_id];
    cols.first.push_back(value);
    cols.second.push_back(human.at(key));
  }
  CorrelationResult r;
  double pearson_sum = 0.0, spearman_sum = 0.0;
  for (const auto& [doc, cols] : by_doc) {
    if (cols.first.size() < 2) {
      throw ShapeError("document '" + doc + "' has fewer than 2 systems");
    }
    try {
      const double p = pearson(cols.first, cols.second);
      const double s = spearman(cols.first, cols.second);
      pearson_sum += p;
      spearman_sum += s;
      ++r.n_used;
    } catch (const UndefinedCorrelation&) {
      ++r.n_skipped;
    }
  }
  if (r.n_used == 0) {
    throw UndefinedCorrelation("summary-level correlation undefined on every document");
  }
  r.pearson = pearson_sum / static_cast<double>(r.n_used);
  r.spearman = spearman_sum / static_cast<double>(r.n_used);
  return r;
}

CorrelationResult correlate(CorrelationLevel level, const ScoreTable& metric,
                            const ScoreTable& human) {
  return level == CorrelationLevel::System ? system_level_corr(metric, human)
                                           : summary_level_corr(metric, human);
}

double pick(const CorrelationResult& r, CorrelationMethod method) noexcept {
  return method == CorrelationMethod::Pearson ? r.pearson : r.spearman;
}

}  // namespace mqag
