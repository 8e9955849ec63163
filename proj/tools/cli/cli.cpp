// Copyright 2026 The MQAG Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "mqag/mqag.hpp"

namespace mqag::cli {

Environment Environment::from_process() {
  Environment env;
  if (const char* url = std::getenv("MQAG_BACKEND_URL"); url && *url) env.backend_url = url;
  if (const char* tok = std::getenv("MQAG_BACKEND_TOKEN"); tok && *tok) env.backend_token = tok;
  return env;
}

namespace {

namespace fs = std::filesystem;

/// Bad flag values discovered after CLI11 has parsed.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScoringFlags {
  std::string variant = "sum";
  std::string distance = "tv";
  std::size_t num_questions = 50;
  std::size_t num_options = kDefaultNumOptions;
  std::string threshold = "2.0";
  std::optional<std::uint64_t> seed;
};

struct BackendFlags {
  std::string kind = "mock";
  std::string endpoint;
  double timeout_s = 120.0;
  int retries = 2;
  std::size_t max_connections = 4;
};

struct CommonFlags {
  std::size_t jobs = 1;
  int verbosity = 0;
};

void add_scoring_flags(CLI::App* cmd, ScoringFlags& f) {
  cmd->add_option("--variant", f.variant, "sum | src | f1")->capture_default_str();
  cmd->add_option("--distance", f.distance, "kl | ob | tv | hl")->capture_default_str();
  cmd->add_option("--n", f.num_questions, "Questions generated per pair")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--k", f.num_options, "Options per question")
      ->capture_default_str()
      ->check(CLI::Range(2, 26));
  cmd->add_option("--threshold", f.threshold,
                  "Answerability threshold in [1, K], or 'off'")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed passed to question generation");
}

void add_backend_flags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--backend", f.kind, "mock | remote")
      ->capture_default_str()
      ->check(CLI::IsMember({"mock", "remote"}));
  cmd->add_option("--endpoint", f.endpoint,
                  "Remote backend base URL (default: $MQAG_BACKEND_URL)");
  cmd->add_option("--timeout", f.timeout_s, "Per-request timeout in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--retries", f.retries, "Retries after a transport failure or 5xx")
      ->capture_default_str()
      ->check(CLI::Range(0, 10));
  cmd->add_option("--max-connections", f.max_connections,
                  "Concurrent requests per endpoint")
      ->capture_default_str()
      ->check(CLI::Range(1, 256));
}

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--jobs", f.jobs, "Worker threads for record-level parallelism")
      ->capture_default_str()
      ->check(CLI::Range(1, 256));
  cmd->add_flag("-v,--verbose", f.verbosity, "More logging on stderr (repeatable)");
}

ScoreConfig to_config(const ScoringFlags& f) {
  ScoreConfig c;
  const auto variant = parse_variant(f.variant);
  if (!variant) throw UsageError("--variant: unknown variant '" + f.variant + "'");
  c.variant = *variant;
  const auto kind = parse_distance_kind(f.distance);
  if (!kind) throw UsageError("--distance: unknown distance '" + f.distance + "'");
  c.distance = *kind;
  c.num_questions = f.num_questions;
  c.num_options = f.num_options;
  c.seed = f.seed;
  if (f.threshold == "off" || f.threshold == "none") {
    c.answerability_threshold.reset();
  } else {
    try {
      std::size_t used = 0;
      c.answerability_threshold = std::stod(f.threshold, &used);
      if (used != f.threshold.size()) throw std::invalid_argument(f.threshold);
    } catch (const std::exception&) {
      throw UsageError("--threshold: expected a number or 'off', got '" + f.threshold + "'");
    }
  }
  try {
    validate(c);
  } catch (const ContractViolation& e) {
    throw UsageError(std::string("--threshold/--n/--k: ") + e.what());
  }
  return c;
}

BackendDescriptor to_descriptor(const BackendFlags& f, const CommonFlags& common,
                                const Environment& env) {
  BackendDescriptor d;
  d.kind = f.kind == "remote" ? BackendKind::Remote : BackendKind::Mock;
  d.timeout = std::chrono::milliseconds(static_cast<long long>(f.timeout_s * 1000.0));
  d.max_retries = f.retries;
  d.max_connections = f.max_connections;
  if (d.kind == BackendKind::Mock) d.max_connections = std::max<std::size_t>(common.jobs, 1);
  if (!f.endpoint.empty()) {
    d.endpoint = f.endpoint;
  } else if (env.backend_url) {
    d.endpoint = env.backend_url;
  }
  d.bearer_token = env.backend_token;
  if (d.kind == BackendKind::Remote && !d.endpoint) {
    throw UsageError("--endpoint: remote backend needs --endpoint or MQAG_BACKEND_URL");
  }
  try {
    validate(d);
    if (d.endpoint && d.kind == BackendKind::Remote) Endpoint::parse(*d.endpoint);
  } catch (const ContractViolation& e) {
    throw UsageError(std::string("--endpoint: ") + e.what());
  }
  return d;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to `<path>.partial` and renames on success, so a failed run never
/// leaves a complete-looking file behind.
void write_output(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path partial = path.string() + ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + partial.string() + "'");
    body(out);
    out.flush();
    if (!out) throw DataError("failed writing '" + partial.string() + "'");
  }
  fs::rename(partial, path);
}

void emit(const std::optional<fs::path>& path, std::ostream& out,
          const std::function<void(std::ostream&)>& body) {
  if (path) {
    write_output(*path, body);
  } else {
    body(out);
  }
}

std::vector<double> parse_double_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& flag, const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(flag, text)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw UsageError(flag + ": expected positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_number(xs[i]);
  return s;
}

void log(const CommonFlags& common, std::ostream& err, int level, const std::string& msg) {
  if (common.verbosity >= level) err << "[mqag] " << msg << '\n';
}

void print_correlation_table(std::ostream& out,
                             const std::map<std::string, CorrelationResult>& tables) {
  out << std::left << std::setw(8) << "table" << std::right << std::setw(12) << "pearson"
      << std::setw(12) << "spearman" << std::setw(8) << "used" << std::setw(9) << "skipped"
      << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& [name, r] : tables) {
    out << std::left << std::setw(8) << name << std::right << std::setw(12) << r.pearson
        << std::setw(12) << r.spearman << std::setw(8) << r.n_used << std::setw(9)
        << r.n_skipped << '\n';
  }
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

ScoreTable restrict(const ScoreTable& table, const EvalDataset& subset) {
  ScoreTable out;
  for (const auto& r : subset.records) out.emplace(r.key(), table.at(r.key()));
  return out;
}

// Correlation on a subset of records. At summary level, documents left with
// a single system cannot be correlated and count as skipped.
CorrelationResult correlate_subset(CorrelationLevel level, const ScoreTable& metric,
                                   const ScoreTable& human) {
  if (level == CorrelationLevel::System) return system_level_corr(metric, human);
  std::map<std::string, std::size_t> per_doc;
  for (const auto& [key, v] : metric) ++per_doc[key.doc_id];
  ScoreTable m, h;
  std::size_t dropped = 0;
  for (const auto& [doc, count] : per_doc) dropped += count < 2 ? 1 : 0;
  for (const auto& [key, v] : metric) {
    if (per_doc[key.doc_id] < 2) continue;
    m.emplace(key, v);
    h.emplace(key, human.at(key));
  }
  if (m.empty()) throw UndefinedCorrelation("no document in this subset has 2 or more systems");
  auto r = summary_level_corr(m, h);
  r.n_skipped += dropped;
  return r;
}

struct DatasetFlags {
  std::string path;
  std::string level;  // empty: from the dataset sidecar
  std::vector<std::string> systems;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& f) {
  cmd->add_option("dataset", f.path, "Line-delimited JSON records")->required();
  cmd->add_option("--level", f.level, "summary | system (default: dataset sidecar)")
      ->check(CLI::IsMember({"summary", "system"}));
  cmd->add_option("--systems", f.systems, "Only use these system ids")->delimiter(',');
}

EvalDataset open_dataset(const DatasetFlags& f) {
  auto ds = load_dataset(f.path);
  if (!f.level.empty()) ds.level = *parse_level(f.level);
  ds = filter_systems(ds, f.systems);
  if (ds.records.empty()) throw EmptyDatasetError("no records left after --systems filter");
  validate_for_level(ds, ds.level);
  return ds;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct ScoreCommand {
  std::string source_file, summary_file;
  std::optional<std::string> output;
  ScoringFlags scoring;
  BackendFlags backend;
  CommonFlags common;

  int execute(std::ostream& out, std::ostream& err, const Environment& env) const {
    const auto config = to_config(scoring);
    const auto desc = to_descriptor(backend, common, env);
    const std::string source = read_file(source_file);
    const std::string summary = read_file(summary_file);
    auto be = make_backend(desc);
    log(common, err, 1, "scoring " + summary_file + " against " + source_file);
    const auto report = score_pair(source, summary, config, *be);
    log(common, err, 1,
        "score " + format_number(report.score) + ", kept " + std::to_string(report.n_kept()) +
            "/" + std::to_string(report.n_generated()));
    emit(output ? std::optional<fs::path>(*output) : std::nullopt, out,
         [&](std::ostream& o) { o << report_to_json(report) << '\n'; });
    return kExitOk;
  }
};

struct EvaluateCommand {
  DatasetFlags dataset;
  std::string split;
  std::string output_dir = "mqag-results";
  ScoringFlags scoring;
  BackendFlags backend;
  CommonFlags common;

  int execute(std::ostream& out, std::ostream& err, const Environment& env) const {
    const auto config = to_config(scoring);
    const auto desc = to_descriptor(backend, common, env);
    const auto ds = open_dataset(dataset);
    auto be = make_backend(desc);
    log(common, err, 1,
        "scoring " + std::to_string(ds.records.size()) + " records of '" + ds.name + "'");

    EvaluationResults results;
    results.dataset_name = ds.name;
    results.level = ds.level;
    results.config = config;
    results.records = score_dataset(ds, config, *be, common.jobs);
    const auto metric = metric_scores(results.records);
    const auto human = ds.human_scores();
    results.correlations["all"] = correlate(ds.level, metric, human);

    if (split == "abstractiveness") {
      const auto [low, high] = abstractiveness_split(ds);
      results.correlations["low"] =
          correlate_subset(ds.level, restrict(metric, low), restrict(human, low));
      results.correlations["high"] =
          correlate_subset(ds.level, restrict(metric, high), restrict(human, high));
    }

    const fs::path dir(output_dir);
    write_output(dir / "results.json",
                 [&](std::ostream& o) { write_results_json(o, results); });
    write_output(dir / "per_record.csv",
                 [&](std::ostream& o) { write_records_csv(o, results.records); });
    out << "dataset " << ds.name << " (" << ds.records.size() << " records, "
        << to_string(ds.level) << " level)\n";
    print_correlation_table(out, results.correlations);
    return kExitOk;
  }
};

struct SweepCommand {
  DatasetFlags dataset;
  std::string thresholds = join_numbers(kDefaultSweepThresholds);
  std::optional<std::string> output;
  ScoringFlags scoring;
  BackendFlags backend;
  CommonFlags common;

  int execute(std::ostream& out, std::ostream& err, const Environment& env) const {
    auto config = to_config(scoring);
    if (config.variant == Variant::F1) {
      throw UsageError("--variant: the sweep applies to sum or src only");
    }
    const auto grid = parse_double_list("--thresholds", thresholds);
    for (double t : grid) {
      if (t < 1.0 || t > static_cast<double>(config.num_options)) {
        throw UsageError("--thresholds: " + format_number(t) + " outside [1, K]");
      }
    }
    // Answerability is recorded per question regardless of the threshold;
    // the sweep re-filters without calling the backend again.
    config.answerability_threshold.reset();
    const auto desc = to_descriptor(backend, common, env);
    const auto ds = open_dataset(dataset);
    auto be = make_backend(desc);
    log(common, err, 1, "sweep over " + std::to_string(grid.size()) + " thresholds");
    const auto records = score_dataset(ds, config, *be, common.jobs);
    const auto points =
        answerability_sweep(per_question_table(records), ds.human_scores(), grid, ds.level);
    emit(output ? std::optional<fs::path>(*output) : std::nullopt, out,
         [&](std::ostream& o) { write_sweep_csv(o, points); });
    return kExitOk;
  }
};

struct ConvergenceCommand {
  DatasetFlags dataset;
  std::string n_grid = "1,2,5,10,20,50";
  std::size_t bootstrap = 1000;
  std::uint64_t bootstrap_seed = 0;
  std::string method = "pearson";
  std::optional<std::string> output;
  ScoringFlags scoring;
  BackendFlags backend;
  CommonFlags common;

  int execute(std::ostream& out, std::ostream& err, const Environment& env) const {
    auto config = to_config(scoring);
    if (config.variant == Variant::F1) {
      throw UsageError("--variant: convergence applies to sum or src only");
    }
    ConvergenceOptions opts;
    opts.n_grid = parse_size_list("--n-grid", n_grid);
    opts.bootstrap = bootstrap;
    opts.seed = bootstrap_seed;
    opts.method = method == "spearman" ? CorrelationMethod::Spearman : CorrelationMethod::Pearson;
    const std::size_t max_n = *std::max_element(opts.n_grid.begin(), opts.n_grid.end());
    if (max_n > config.num_questions) {
      throw UsageError("--n-grid: largest entry " + std::to_string(max_n) + " exceeds --n " +
                       std::to_string(config.num_questions));
    }
    // Every generated question takes part in the resampling.
    config.answerability_threshold.reset();
    const auto desc = to_descriptor(backend, common, env);
    const auto ds = open_dataset(dataset);
    opts.level = ds.level;
    auto be = make_backend(desc);
    log(common, err, 1, "convergence with B=" + std::to_string(bootstrap));
    const auto records = score_dataset(ds, config, *be, common.jobs);
    std::map<RecordKey, std::vector<double>> distances;
    for (const auto& [key, qs] : per_question_table(records)) {
      auto& d = distances[key];
      for (const auto& q : qs) d.push_back(q.distance);
    }
    const auto curve = convergence_curve(distances, ds.human_scores(), opts);
    emit(output ? std::optional<fs::path>(*output) : std::nullopt, out,
         [&](std::ostream& o) { write_convergence_csv(o, curve); });
    return kExitOk;
  }
};

struct DistancesCommand {
  std::size_t resolution = 101;
  std::optional<std::string> output;

  int execute(std::ostream& out) const {
    const auto rows = bernoulli_distance_grid(resolution);
    emit(output ? std::optional<fs::path>(*output) : std::nullopt, out,
         [&](std::ostream& o) { write_distance_csv(o, rows); });
    return kExitOk;
  }
};

int report_error(std::ostream& err, int code, const std::string& msg) {
  err << "mqag: " << msg << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env) {
  CLI::App app{"Information-consistency scoring of summaries with multiple-choice questions",
               "mqag"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  ScoreCommand score;
  auto* score_cmd = app.add_subcommand("score", "Score one summary against its source");
  score_cmd->add_option("source", score.source_file, "Source document file")->required();
  score_cmd->add_option("summary", score.summary_file, "Summary file")->required();
  score_cmd->add_option("-o,--output", score.output, "Write the JSON report here");
  add_scoring_flags(score_cmd, score.scoring);
  add_backend_flags(score_cmd, score.backend);
  add_common_flags(score_cmd, score.common);

  EvaluateCommand evaluate;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Correlate scores with human judgements on a dataset");
  add_dataset_flags(eval_cmd, evaluate.dataset);
  eval_cmd->add_option("--split", evaluate.split, "Also report per-half tables")
      ->check(CLI::IsMember({"abstractiveness"}));
  eval_cmd->add_option("--output-dir", evaluate.output_dir, "Where results.json and "
                       "per_record.csv go")
      ->capture_default_str();
  add_scoring_flags(eval_cmd, evaluate.scoring);
  add_backend_flags(eval_cmd, evaluate.backend);
  add_common_flags(eval_cmd, evaluate.common);

  SweepCommand sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Correlation against the answerability threshold");
  add_dataset_flags(sweep_cmd, sweep.dataset);
  sweep_cmd->add_option("--thresholds", sweep.thresholds, "Comma-separated thresholds")
      ->capture_default_str();
  sweep_cmd->add_option("-o,--output", sweep.output, "CSV output file");
  add_scoring_flags(sweep_cmd, sweep.scoring);
  add_backend_flags(sweep_cmd, sweep.backend);
  add_common_flags(sweep_cmd, sweep.common);

  ConvergenceCommand conv;
  auto* conv_cmd =
      app.add_subcommand("convergence", "Bootstrap correlation against the question count");
  add_dataset_flags(conv_cmd, conv.dataset);
  conv_cmd->add_option("--n-grid", conv.n_grid, "Comma-separated question counts")
      ->capture_default_str();
  conv_cmd->add_option("--bootstrap", conv.bootstrap, "Bootstrap replicates per grid point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--bootstrap-seed", conv.bootstrap_seed, "Seed for resampling")
      ->capture_default_str();
  conv_cmd->add_option("--method", conv.method, "pearson | spearman")
      ->capture_default_str()
      ->check(CLI::IsMember({"pearson", "spearman"}));
  conv_cmd->add_option("-o,--output", conv.output, "CSV output file");
  add_scoring_flags(conv_cmd, conv.scoring);
  add_backend_flags(conv_cmd, conv.backend);
  add_common_flags(conv_cmd, conv.common);

  DistancesCommand dist;
  auto* dist_cmd =
      app.add_subcommand("distances", "Distances between two Bernoulli distributions");
  dist_cmd->add_option("--resolution", dist.resolution, "Grid points for p2 in [0, 1]")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  dist_cmd->add_option("-o,--output", dist.output, "CSV output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (score_cmd->parsed()) return score.execute(out, err, env);
    if (eval_cmd->parsed()) return evaluate.execute(out, err, env);
    if (sweep_cmd->parsed()) return sweep.execute(out, err, env);
    if (conv_cmd->parsed()) return conv.execute(out, err, env);
    if (dist_cmd->parsed()) return dist.execute(out);
  } catch (const UsageError& e) {
    return report_error(err, kExitUsage, e.what());
  } catch (const PipelineError& e) {
    return report_error(err, kExitBackend, e.what());
  } catch (const BackendError& e) {
    return report_error(err, kExitBackend, e.what());
  } catch (const DataError& e) {
    return report_error(err, kExitData, e.what());
  } catch (const ContractViolation& e) {
    return report_error(err, kExitData, e.what());
  } catch (const fs::filesystem_error& e) {
    return report_error(err, kExitData, e.what());
  } catch (const std::exception& e) {
    return report_error(err, kExitData, e.what());
  }
  return report_error(err, kExitUsage, "no command given");
}

}  // namespace mqag::cli
