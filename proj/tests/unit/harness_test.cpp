// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "mqag/harness.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "mqag/textmetrics.hpp"

namespace mqag {
namespace {

namespace fs = std::filesystem;
using testing::make_synthetic_dataset;

std::string record_line(const std::string& sys, const std::string& doc, const std::string& source,
                        const std::string& summary, double human) {
  nlohmann::ordered_json j;
  j["system_id"] = sys;
  j["doc_id"] = doc;
  j["source"] = source;
  j["summary"] = summary;
  j["human_score"] = human;
  return j.dump();
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("mqag-test-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// ---------------------------------------------------------------------------
// Dataset loading
// ---------------------------------------------------------------------------

TEST(Dataset, ParsesRecordsAndSkipsBlankLines) {
  std::istringstream in(record_line("A", "d1", "src one", "sum", 3.5) + "\n\n" +
                        record_line("B", "d1", "src one", "other", 2) + "\n");
  const auto ds = parse_dataset(in, "tiny");
  ASSERT_EQ(ds.records.size(), 2u);
  EXPECT_EQ(ds.records[1].summary, "other");
  EXPECT_EQ(ds.records[0].human_score, 3.5);
  EXPECT_EQ(ds.num_systems(), 2u);
  EXPECT_EQ(ds.num_documents(), 1u);
  EXPECT_EQ(ds.human_scores().at({"B", "d1"}), 2.0);
}

TEST(Dataset, ReportsLineNumbers) {
  std::istringstream bad_json(record_line("A", "d1", "s", "t", 1) + "\n\n{not json\n");
  try {
    parse_dataset(bad_json, "x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream missing(record_line("A", "d1", "s", "t", 1) +
                             "\n{\"system_id\":\"B\",\"doc_id\":\"d1\",\"source\":\"s\","
                             "\"summary\":\"t\"}\n");
  try {
    parse_dataset(missing, "x");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "human_score");
  }
  std::istringstream wrong_type(
      "{\"system_id\":1,\"doc_id\":\"d1\",\"source\":\"s\",\"summary\":\"t\",\"human_score\":1}\n");
  try {
    parse_dataset(wrong_type, "x");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "system_id");
  }
}

TEST(Dataset, RejectsDuplicatesAndEmptyInput) {
  std::istringstream dup(record_line("A", "d1", "s", "t", 1) + "\n" +
                         record_line("A", "d1", "s", "u", 2) + "\n");
  EXPECT_THROW(parse_dataset(dup, "x"), DataError);
  std::istringstream empty("\n  \n");
  EXPECT_THROW(parse_dataset(empty, "x"), EmptyDatasetError);
}

TEST(Dataset, LoadsFileWithAndWithoutSidecar) {
  TempDir dir;
  const fs::path file = dir.path() / "news.jsonl";
  write_text(file, record_line("A", "d1", "s", "t", 1) + "\n" + record_line("B", "d1", "s", "u", 2));
  auto ds = load_dataset(file);
  EXPECT_EQ(ds.name, "news");
  EXPECT_EQ(ds.level, CorrelationLevel::Summary);

  write_text(dir.path() / "news.jsonl.meta.json", R"({"name":"NewsBench","level":"system"})");
  ds = load_dataset(file);
  EXPECT_EQ(ds.name, "NewsBench");
  EXPECT_EQ(ds.level, CorrelationLevel::System);

  write_text(dir.path() / "news.jsonl.meta.json", R"({"level":"corpus"})");
  EXPECT_THROW(load_dataset(file), SchemaError);

  EXPECT_THROW(load_dataset(dir.path() / "missing.jsonl"), DataError);
}

TEST(Dataset, ValidateForLevel) {
  const auto ds = make_synthetic_dataset(3, 1);
  EXPECT_THROW(validate_for_level(ds, CorrelationLevel::System), ShapeError);
  EXPECT_THROW(validate_for_level(ds, CorrelationLevel::Summary), ShapeError);
  EXPECT_NO_THROW(validate_for_level(make_synthetic_dataset(2, 3), CorrelationLevel::System));
}

TEST(Dataset, FilterSystems) {
  const auto ds = make_synthetic_dataset(2, 4);
  const std::vector<std::string> keep = {"sys1", "sys3"};
  const auto f = filter_systems(ds, keep);
  EXPECT_EQ(f.records.size(), 4u);
  EXPECT_EQ(f.num_systems(), 2u);
  EXPECT_EQ(filter_systems(ds, {}).records.size(), ds.records.size());
}

TEST(Dataset, AbstractivenessSplit) {
  EvalDataset ds;
  ds.name = "s";
  const std::string source = "a b c d e f g h";
  // Abstractiveness 0, 0.25, 0.5, 0.75 for summaries of 4 tokens.
  ds.records = {{"S", "d3", source, "a b z z", 1},
                {"S", "d1", source, "a b c d", 1},
                {"S", "d4", source, "a z z z", 1},
                {"S", "d2", source, "a b c z", 1}};
  auto [low, high] = abstractiveness_split(ds);
  ASSERT_EQ(low.records.size(), 2u);
  ASSERT_EQ(high.records.size(), 2u);
  EXPECT_EQ(low.records[0].doc_id, "d1");
  EXPECT_EQ(low.records[1].doc_id, "d2");
  EXPECT_EQ(high.records[0].doc_id, "d3");
  EXPECT_EQ(high.records[1].doc_id, "d4");

  ds.records.push_back({"S", "d5", source, "z z z z", 1});
  std::tie(low, high) = abstractiveness_split(ds);
  EXPECT_EQ(low.records.size(), 3u);
  EXPECT_EQ(high.records.size(), 2u);

  EvalDataset extractive;
  for (const char* doc : {"d9", "d2", "d5", "d1"}) {
    extractive.records.push_back({"S", doc, source, "a b", 1});
  }
  std::tie(low, high) = abstractiveness_split(extractive);
  EXPECT_EQ(low.records[0].doc_id, "d1");
  EXPECT_EQ(low.records[1].doc_id, "d2");
  EXPECT_EQ(high.records[0].doc_id, "d5");
  EXPECT_EQ(high.records[1].doc_id, "d9");

  EvalDataset one;
  one.records = {{"S", "d", source, "a", 1}};
  EXPECT_THROW(abstractiveness_split(one), ContractViolation);
}

TEST(Dataset, SyntheticFixtureIsWellFormed) {
  const auto ds = make_synthetic_dataset(4, 3);
  EXPECT_EQ(ds.records.size(), 12u);
  for (const auto& r : ds.records) {
    EXPECT_GE(r.human_score, 0.0);
    EXPECT_LE(r.human_score, 1.0);
    EXPECT_NO_THROW(mock_generate(r.summary, 1, 4, 0));
  }
  EXPECT_NO_THROW(validate_for_level(ds, CorrelationLevel::Summary));
}

// ---------------------------------------------------------------------------
// Scoring a dataset
// ---------------------------------------------------------------------------

ScoreConfig small_config(std::size_t n) {
  ScoreConfig c;
  c.num_questions = n;
  c.seed = 2024;
  c.answerability_threshold = std::nullopt;
  return c;
}

TEST(ScoreDataset, ParallelMatchesSerial) {
  const auto ds = make_synthetic_dataset(3, 3);
  MockBackend mock;
  const auto serial = score_dataset(ds, small_config(10), mock, 1);
  const auto parallel = score_dataset(ds, small_config(10), mock, 4);
  ASSERT_EQ(serial.size(), ds.records.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].key, ds.records[i].key());
    EXPECT_EQ(serial[i].report.score, parallel[i].report.score);
  }
  const auto table = metric_scores(serial);
  EXPECT_EQ(table.size(), serial.size());
  EXPECT_EQ(per_question_table(serial).at(serial[0].key).size(), 10u);
}

TEST(ScoreDataset, MetricTracksHumanScore) {
  const auto ds = make_synthetic_dataset(6, 4);
  MockBackend mock;
  const auto scored = score_dataset(ds, small_config(30), mock, 2);
  const auto r = summary_level_corr(metric_scores(scored), ds.human_scores());
  EXPECT_GT(r.pearson, 0.3);
}

// ---------------------------------------------------------------------------
// Answerability sweep
// ---------------------------------------------------------------------------

// Per-question table with random distances and answerability in [1, 4].
std::map<RecordKey, std::vector<QuestionScore>> random_table(std::mt19937_64& rng, int systems,
                                                             int docs, int questions) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<RecordKey, std::vector<QuestionScore>> t;
  for (int s = 0; s < systems; ++s) {
    for (int d = 0; d < docs; ++d) {
      auto& v = t[{"s" + std::to_string(s), "d" + std::to_string(d)}];
      for (int q = 0; q < questions; ++q) {
        v.push_back({"q" + std::to_string(q), u(rng), 1.0 + 3.0 * u(rng), true});
      }
    }
  }
  return t;
}

ScoreTable random_human(std::mt19937_64& rng, const std::map<RecordKey, std::vector<QuestionScore>>& t) {
  std::uniform_real_distribution<double> u(0.0, 5.0);
  ScoreTable h;
  for (const auto& [k, v] : t) h[k] = u(rng);
  return h;
}

TEST(Sweep, ThresholdKEqualsUnfilteredAndKeptIsMonotone) {
  std::mt19937_64 rng(8);
  const auto table = random_table(rng, 4, 5, 20);
  const auto human = random_human(rng, table);
  const auto points =
      answerability_sweep(table, human, kDefaultSweepThresholds, CorrelationLevel::Summary);
  ASSERT_EQ(points.size(), 7u);
  ScoreTable unfiltered;
  for (const auto& [k, v] : table) unfiltered[k] = rescore(v, std::nullopt);
  const auto reference = summary_level_corr(unfiltered, human);
  EXPECT_EQ(points[0].threshold, 4.0);
  EXPECT_EQ(points[0].correlation.pearson, reference.pearson);
  EXPECT_EQ(points[0].correlation.spearman, reference.spearman);
  EXPECT_EQ(points[0].mean_n_kept, 20.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    EXPECT_LE(points[i].mean_n_kept, points[i - 1].mean_n_kept);
  }
  EXPECT_GE(points.back().mean_n_kept, 1.0);
}

TEST(Sweep, FourPointGrid) {
  std::mt19937_64 rng(9);
  const auto table = random_table(rng, 3, 3, 10);
  const std::vector<double> grid = {4.0, 3.0, 2.0, 1.0};
  EXPECT_EQ(answerability_sweep(table, random_human(rng, table), grid, CorrelationLevel::System)
                .size(),
            4u);
}

TEST(Sweep, ThresholdKMatchesPipelineScoreBitExactly) {
  const auto ds = make_synthetic_dataset(3, 3);
  MockBackend mock;
  const auto scored = score_dataset(ds, small_config(12), mock);
  const auto table = per_question_table(scored);
  for (const auto& r : scored) EXPECT_EQ(rescore(table.at(r.key), 4.0), r.report.score);
}

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

std::map<RecordKey, std::vector<double>> distances_of(
    const std::map<RecordKey, std::vector<QuestionScore>>& t) {
  std::map<RecordKey, std::vector<double>> out;
  for (const auto& [k, v] : t) {
    for (const auto& q : v) out[k].push_back(q.distance);
  }
  return out;
}

TEST(Convergence, SampleStd) {
  EXPECT_EQ(sample_std(std::vector<double>{}), 0.0);
  EXPECT_EQ(sample_std(std::vector<double>{3.0}), 0.0);
  EXPECT_NEAR(sample_std(std::vector<double>{1, 2, 3, 4}), std::sqrt(5.0 / 3.0), 1e-15);
}

TEST(Convergence, StdShrinksAndIsReproducible) {
  const auto ds = make_synthetic_dataset(4, 3);
  MockBackend mock;
  const auto scored = score_dataset(ds, small_config(50), mock, 2);
  const auto d = distances_of(per_question_table(scored));
  ConvergenceOptions opt;
  opt.bootstrap = 200;
  opt.seed = 5;
  const auto a = convergence_curve(d, ds.human_scores(), opt);
  const auto b = convergence_curve(d, ds.human_scores(), opt);
  ASSERT_EQ(a.size(), 6u);
  const auto at = [&](std::size_t n) {
    return *std::find_if(a.begin(), a.end(), [&](const auto& p) { return p.n == n; });
  };
  EXPECT_LT(at(50).mean_score_std, at(5).mean_score_std);
  EXPECT_LT(at(50).std_corr, at(5).std_corr);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mean_corr, b[i].mean_corr);
    EXPECT_EQ(a[i].std_corr, b[i].std_corr);
    EXPECT_EQ(a[i].mean_score_std, b[i].mean_score_std);
  }
}

TEST(Convergence, PrefixModeHasNoSpread) {
  std::mt19937_64 rng(3);
  const auto table = random_table(rng, 3, 3, 10);
  const auto human = random_human(rng, table);
  ConvergenceOptions opt;
  opt.n_grid = {1, 10};
  opt.bootstrap = 5;
  opt.mode = ResampleMode::Prefix;
  const auto curve = convergence_curve(distances_of(table), human, opt);
  for (const auto& p : curve) {
    EXPECT_EQ(p.mean_score_std, 0.0);
    EXPECT_EQ(p.std_corr, 0.0);
  }
  ScoreTable full;
  for (const auto& [k, v] : table) full[k] = rescore(v, std::nullopt);
  EXPECT_NEAR(curve[1].mean_corr, summary_level_corr(full, human).pearson, 1e-12);
}

TEST(Convergence, RejectsBadOptions) {
  std::mt19937_64 rng(4);
  const auto table = random_table(rng, 2, 2, 5);
  const auto human = random_human(rng, table);
  ConvergenceOptions opt;
  EXPECT_THROW(convergence_curve(distances_of(table), human, opt), ContractViolation);
  opt.n_grid = {5};
  opt.bootstrap = 0;
  EXPECT_THROW(convergence_curve(distances_of(table), human, opt), ContractViolation);
}

// ---------------------------------------------------------------------------
// Bernoulli grid and writers
// ---------------------------------------------------------------------------

TEST(BernoulliGrid, ShapeAndValues) {
  const auto rows = bernoulli_distance_grid(5);
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows[0].p1, 0.0);
  EXPECT_EQ(rows[4].p2, 1.0);
  EXPECT_EQ(rows[6].p1, 0.25);
  EXPECT_EQ(rows[6].p2, 0.25);
  EXPECT_EQ(rows[6].total_variation, 0.0);
  EXPECT_EQ(rows[6].kl, 0.0);
  EXPECT_THROW(bernoulli_distance_grid(1), ContractViolation);
}

TEST(Writers, FormatNumberRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -0.5, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Writers, CsvShapes) {
  std::ostringstream out;
  write_distance_csv(out, bernoulli_distance_grid(3));
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "p1,p2,kl,one_best,total_variation,hellinger");
  int n = 0;
  for (std::string l; std::getline(lines, l);) ++n;
  EXPECT_EQ(n, 12);

  const auto ds = make_synthetic_dataset(2, 2);
  MockBackend mock;
  const auto scored = score_dataset(ds, small_config(3), mock);
  std::ostringstream rec;
  write_records_csv(rec, scored);
  const std::string csv = rec.str();
  EXPECT_EQ(csv.rfind("system_id,doc_id,score,human_score,n_kept\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Writers, ResultsJson) {
  const auto ds = make_synthetic_dataset(2, 3);
  MockBackend mock;
  EvaluationResults results;
  results.dataset_name = ds.name;
  results.config = small_config(4);
  results.records = score_dataset(ds, results.config, mock);
  results.correlations["all"] = summary_level_corr(metric_scores(results.records), ds.human_scores());
  std::ostringstream out;
  write_results_json(out, results);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j.at("dataset"), "synthetic");
  EXPECT_EQ(j.at("per_record").size(), 6u);
  EXPECT_TRUE(j.at("correlations").contains("all"));
  EXPECT_TRUE(j.at("curves").contains("sweep"));
  EXPECT_TRUE(j.at("curves").contains("convergence"));

  const auto single = nlohmann::json::parse(report_to_json(results.records[0].report));
  EXPECT_EQ(single.at("score").get<double>(), results.records[0].report.score);
}

}  // namespace
}  // namespace mqag
