// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <json.hpp>

#include "mqag/detail/parallel.hpp"
#include "mqag/detail/random.hpp"

namespace mqag {

std::vector<ScoredRecord> score_dataset(const EvalDataset& dataset, const ScoreConfig& config,
                                        Backend& backend, std::size_t jobs) {
  std::vector<std::optional<ScoreReport>> reports(dataset.records.size());
  detail::parallel_for(dataset.records.size(), jobs, [&](std::size_t i) {
    const auto& r = dataset.records[i];
    reports[i] = score_pair(r.source, r.summary, config, backend);
  });
  std::vector<ScoredRecord> out;
  out.reserve(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = dataset.records[i];
    out.push_back({r.key(), r.human_score, std::move(*reports[i])});
  }
  return out;
}

ScoreTable metric_scores(std::span<const ScoredRecord> records) {
  ScoreTable t;
  for (const auto& r : records) t.emplace(r.key, r.report.score);
  return t;
}

std::map<RecordKey, std::vector<QuestionScore>> per_question_table(
    std::span<const ScoredRecord> records) {
  std::map<RecordKey, std::vector<QuestionScore>> t;
  for (const auto& r : records) {
    if (r.report.runs.empty()) continue;
    t.emplace(r.key, r.report.runs.front().per_question);
  }
  return t;
}

std::vector<SweepPoint> answerability_sweep(
    const std::map<RecordKey, std::vector<QuestionScore>>& per_question, const ScoreTable& human,
    std::span<const double> thresholds, CorrelationLevel level) {
  std::vector<SweepPoint> points;
  points.reserve(thresholds.size());
  for (double t : thresholds) {
    ScoreTable metric;
    double kept_total = 0.0;
    for (const auto& [key, questions] : per_question) {
      std::size_t kept = 0;
      metric.emplace(key, rescore(questions, t, &kept));
      kept_total += static_cast<double>(kept);
    }
    SweepPoint p;
    p.threshold = t;
    p.correlation = correlate(level, metric, human);
    p.mean_n_kept = per_question.empty() ? 0.0 : kept_total / static_cast<double>(per_question.size());
    points.push_back(p);
  }
  return points;
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return 0.0;  // a rounded mean would leave residue
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

std::vector<ConvergencePoint> convergence_curve(
    const std::map<RecordKey, std::vector<double>>& per_question_distances,
    const ScoreTable& human, const ConvergenceOptions& options) {
  if (options.bootstrap == 0) throw ContractViolation("bootstrap count must be >= 1");
  if (options.n_grid.empty()) throw ContractViolation("empty question-count grid");
  const std::size_t max_n = *std::max_element(options.n_grid.begin(), options.n_grid.end());
  if (max_n == 0) throw ContractViolation("question counts must be >= 1");
  for (const auto& [key, d] : per_question_distances) {
    if (d.size() < max_n) {
      throw ContractViolation("record (" + key.system_id + ", " + key.doc_id + ") has " +
                              std::to_string(d.size()) + " questions, grid needs " +
                              std::to_string(max_n));
    }
  }

  std::vector<ConvergencePoint> curve;
  curve.reserve(options.n_grid.size());
  for (std::size_t n : options.n_grid) {
    if (n == 0) throw ContractViolation("question counts must be >= 1");
    std::mt19937_64 rng(detail::mix_seed(options.seed, n));
    std::vector<double> correlations;
    std::map<RecordKey, std::vector<double>> record_scores;
    for (std::size_t b = 0; b < options.bootstrap; ++b) {
      ScoreTable metric;
      for (const auto& [key, d] : per_question_distances) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t idx = options.mode == ResampleMode::Prefix
                                      ? i
                                      : detail::uniform_index(rng, d.size());
          sum += d[idx];
        }
        const double score = 1.0 - sum / static_cast<double>(n);
        metric.emplace(key, score);
        record_scores[key].push_back(score);
      }
      try {
        correlations.push_back(pick(correlate(options.level, metric, human), options.method));
      } catch (const UndefinedCorrelation&) {
      }
    }
    ConvergencePoint p;
    p.n = n;
    p.n_valid = correlations.size();
    if (correlations.empty()) {
      p.mean_corr = p.std_corr = std::numeric_limits<double>::quiet_NaN();
    } else {
      p.mean_corr = std::accumulate(correlations.begin(), correlations.end(), 0.0) /
                    static_cast<double>(correlations.size());
      p.std_corr = sample_std(correlations);
    }
    double std_total = 0.0;
    for (const auto& [key, scores] : record_scores) std_total += sample_std(scores);
    p.mean_score_std =
        record_scores.empty() ? 0.0 : std_total / static_cast<double>(record_scores.size());
    curve.push_back(p);
  }
  return curve;
}

std::vector<DistanceRow> bernoulli_distance_grid(std::size_t resolution) {
  if (resolution < 2) throw ContractViolation("grid resolution must be >= 2");
  std::vector<DistanceRow> rows;
  rows.reserve(std::size(kBernoulliP1Values) * resolution);
  for (double p1 : kBernoulliP1Values) {
    const OptionDistribution a({p1, 1.0 - p1});
    for (std::size_t i = 0; i < resolution; ++i) {
      const double p2 = static_cast<double>(i) / static_cast<double>(resolution - 1);
      const OptionDistribution b({p2, 1.0 - p2});
      rows.push_back({p1, p2, kl_divergence(a, b), one_best(a, b), total_variation(a, b),
                      hellinger(a, b)});
    }
  }
  return rows;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

using ojson = nlohmann::ordered_json;

ojson number_json(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson config_json(const ScoreConfig& c) {
  ojson j;
  j["variant"] = std::string(to_string(c.variant));
  j["distance"] = std::string(to_string(c.distance));
  j["num_questions"] = c.num_questions;
  j["num_options"] = c.num_options;
  j["answerability_threshold"] =
      c.answerability_threshold ? ojson(*c.answerability_threshold) : ojson(nullptr);
  j["seed"] = c.seed ? ojson(*c.seed) : ojson(nullptr);
  return j;
}

ojson correlation_json(const CorrelationResult& r) {
  ojson j;
  j["pearson"] = number_json(r.pearson);
  j["spearman"] = number_json(r.spearman);
  j["n_used"] = r.n_used;
  j["n_skipped"] = r.n_skipped;
  return j;
}

ojson run_json(const RunReport& run) {
  ojson j;
  j["generated_from"] = std::string(to_string(run.generated_from));
  j["score"] = number_json(run.score);
  j["n_requested"] = run.n_requested;
  j["n_generated"] = run.n_generated;
  j["n_kept"] = run.n_kept;
  ojson qs = ojson::array();
  for (std::size_t i = 0; i < run.per_question.size(); ++i) {
    const auto& q = run.per_question[i];
    ojson item;
    item["id"] = q.id;
    item["distance"] = number_json(q.distance);
    item["answerability"] = number_json(q.answerability);
    item["kept"] = q.kept;
    if (i < run.answered.size()) {
      const auto& a = run.answered[i];
      item["stem"] = a.question.stem;
      item["options"] = a.question.options;
      item["answer_index"] = a.question.answer_index;
      item["dist_source"] = std::vector<double>(a.dist_source.probs().begin(),
                                                a.dist_source.probs().end());
      item["dist_summary"] = std::vector<double>(a.dist_summary.probs().begin(),
                                                 a.dist_summary.probs().end());
    }
    qs.push_back(std::move(item));
  }
  j["per_question"] = std::move(qs);
  return j;
}

ojson report_json(const ScoreReport& report, bool with_questions) {
  ojson j;
  j["score"] = number_json(report.score);
  if (report.sum_score) j["sum_score"] = number_json(*report.sum_score);
  if (report.src_score) j["src_score"] = number_json(*report.src_score);
  j["n_generated"] = report.n_generated();
  j["n_kept"] = report.n_kept();
  j["config"] = config_json(report.config);
  if (with_questions) {
    ojson runs = ojson::array();
    for (const auto& r : report.runs) runs.push_back(run_json(r));
    j["runs"] = std::move(runs);
  }
  return j;
}

}  // namespace

void write_distance_csv(std::ostream& out, std::span<const DistanceRow> rows) {
  out << "p1,p2,kl,one_best,total_variation,hellinger\n";
  for (const auto& r : rows) {
    out << format_number(r.p1) << ',' << format_number(r.p2) << ',' << format_number(r.kl) << ','
        << format_number(r.one_best) << ',' << format_number(r.total_variation) << ','
        << format_number(r.hellinger) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "threshold,pearson,spearman,n_used,n_skipped,mean_n_kept\n";
  for (const auto& p : points) {
    out << format_number(p.threshold) << ',' << format_number(p.correlation.pearson) << ','
        << format_number(p.correlation.spearman) << ',' << p.correlation.n_used << ','
        << p.correlation.n_skipped << ',' << format_number(p.mean_n_kept) << '\n';
  }
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergencePoint> points) {
  out << "n,mean_corr,std_corr,mean_score_std,n_valid\n";
  for (const auto& p : points) {
    out << p.n << ',' << format_number(p.mean_corr) << ',' << format_number(p.std_corr) << ','
        << format_number(p.mean_score_std) << ',' << p.n_valid << '\n';
  }
}

void write_records_csv(std::ostream& out, std::span<const ScoredRecord> records) {
  out << "system_id,doc_id,score,human_score,n_kept\n";
  for (const auto& r : records) {
    out << csv_field(r.key.system_id) << ',' << csv_field(r.key.doc_id) << ','
        << format_number(r.report.score) << ',' << format_number(r.human_score) << ','
        << r.report.n_kept() << '\n';
  }
}

void write_results_json(std::ostream& out, const EvaluationResults& results) {
  ojson j;
  j["dataset"] = results.dataset_name;
  j["level"] = std::string(to_string(results.level));
  j["config"] = config_json(results.config);
  ojson records = ojson::array();
  for (const auto& r : results.records) {
    ojson item;
    item["system_id"] = r.key.system_id;
    item["doc_id"] = r.key.doc_id;
    item["human_score"] = number_json(r.human_score);
    const ojson report = report_json(r.report, false);
    for (const auto& [k, v] : report.items()) {
      if (k != "config") item[k] = v;
    }
    records.push_back(std::move(item));
  }
  j["per_record"] = std::move(records);
  ojson corr = ojson::object();
  for (const auto& [name, r] : results.correlations) corr[name] = correlation_json(r);
  j["correlations"] = std::move(corr);
  ojson curves = ojson::object();
  ojson sweep = ojson::array();
  for (const auto& p : results.sweep) {
    ojson item;
    item["threshold"] = p.threshold;
    item["correlation"] = correlation_json(p.correlation);
    item["mean_n_kept"] = p.mean_n_kept;
    sweep.push_back(std::move(item));
  }
  curves["sweep"] = std::move(sweep);
  ojson conv = ojson::array();
  for (const auto& p : results.convergence) {
    ojson item;
    item["n"] = p.n;
    item["mean_corr"] = number_json(p.mean_corr);
    item["std_corr"] = number_json(p.std_corr);
    item["mean_score_std"] = number_json(p.mean_score_std);
    item["n_valid"] = p.n_valid;
    conv.push_back(std::move(item));
  }
  curves["convergence"] = std::move(conv);
  j["curves"] = std::move(curves);
  out << j.dump(2) << '\n';
}

std::string report_to_json(const ScoreReport& report, int indent) {
  return report_json(report, true).dump(indent);
}

}  // namespace mqag
