#include "opinion/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opinion/backend.hpp"
#include "opinion/cache.hpp"
#include "opinion/config.hpp"
#include "opinion/corpus.hpp"
#include "opinion/error.hpp"
#include "opinion/estimator.hpp"
#include "opinion/fs_util.hpp"
#include "opinion/hash.hpp"
#include "opinion/readability.hpp"
#include "opinion/summarizer.hpp"
#include "opinion/survey.hpp"
#include "opinion/table.hpp"

namespace opinion {

namespace {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Configuration:
    case ErrorCode::InvalidParameter:
    case ErrorCode::MissingFile:
    case ErrorCode::SchemaViolation:
    case ErrorCode::DuplicateCaseId:
      return kExitUsage;
    default:
      return kExitPartialFailure;
  }
}

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

void emit(const std::optional<std::string>& path, const std::string& contents, std::ostream& out) {
  if (path) {
    write_file_atomic(*path, contents);
  } else {
    out << contents;
  }
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string registry = "data/registry.json";
  std::optional<std::string> out;
};

int cmd_ingest(const IngestArgs& args, std::ostream& out) {
  const auto registry = load_registry(args.registry);
  out << "registry: " << args.registry << "\n";
  out << "cases: " << registry.cases().size() << "\n";
  for (auto topic : kAllTopics) {
    const auto it = registry.by_topic().find(topic);
    const std::size_t n = it == registry.by_topic().end() ? 0 : it->second.size();
    out << "  " << to_string(topic) << ": " << n << "\n";
  }
  if (args.out) write_file_atomic(*args.out, serialize_registry(registry));
  return kExitSuccess;
}

// ------------------------------------------------------------- summarize

struct SummarizeArgs {
  std::optional<std::string> config_file;
  std::optional<std::string> registry;
  std::optional<std::string> cache_dir;
  bool mock = false;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<std::string> styles;
  std::optional<std::size_t> parallelism;
  std::vector<std::string> cases;
  std::string out = "bundles";
};

RunConfig assemble_config(const SummarizeArgs& args) {
  RunConfig config;
  if (args.config_file) config = load_config_file(*args.config_file);
  if (args.registry) config.registry_path = *args.registry;
  if (args.cache_dir) config.cache_dir = fs::path(*args.cache_dir);
  if (args.mock && args.endpoint) {
    throw Error(ErrorCode::Configuration, "--mock and --endpoint are mutually exclusive");
  }
  if (args.mock) config.mock = true;
  if (args.endpoint) {
    config.mock = false;
    config.endpoint_url = *args.endpoint;
  }
  if (args.model) config.model_id = *args.model;
  if (args.styles) config.styles = parse_style_list(*args.styles);
  if (args.parallelism) config.parallelism = *args.parallelism;
  config.validate();
  return config;
}

nlohmann::json prompt_hashes(const std::set<OutputStyle>& styles) {
  nlohmann::json hashes = nlohmann::json::object();
  hashes["facts"] = sha256_hex(PromptTemplate(TemplateId::FactsSummary).render());
  hashes["syllabus"] = sha256_hex(PromptTemplate(TemplateId::SyllabusSummary).render());
  for (auto style : styles) {
    hashes["style:" + std::string(style_key(style))] =
        sha256_hex(PromptTemplate(TemplateId::StyleTransfer, style).render());
  }
  return hashes;
}

int cmd_summarize(const SummarizeArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig config = assemble_config(args);

  // Resolve the backend before touching the registry or the network so a
  // missing key fails fast.
  std::unique_ptr<CompletionBackend> transport;
  std::unique_ptr<RetryingBackend> retrying;
  std::unique_ptr<RateLimiter> limiter;
  std::unique_ptr<RateLimitedBackend> limited;
  CompletionBackend* backend = nullptr;
  if (config.mock) {
    transport = std::make_unique<MockBackend>();
    backend = transport.get();
  } else {
    const char* key = std::getenv(kApiKeyEnv);
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorCode::Configuration,
                  std::string("live backend requires the ") + kApiKeyEnv + " environment variable");
    }
    transport = std::make_unique<HttpChatBackend>(HttpBackendConfig{config.endpoint_url, key});
    retrying = std::make_unique<RetryingBackend>(*transport);
    limiter = std::make_unique<RateLimiter>(config.requests_per_second);
    limited = std::make_unique<RateLimitedBackend>(*retrying, *limiter);
    backend = limited.get();
  }

  const auto registry = load_registry(config.registry_path);
  std::vector<OpinionCase> selected;
  if (args.cases.empty()) {
    selected = registry.cases();
  } else {
    for (const auto& id : args.cases) {
      const auto* found = registry.find(id);
      if (!found) throw Error(ErrorCode::Configuration, "unknown case '" + id + "'");
      selected.push_back(*found);
    }
  }
  if (selected.empty()) err << "warning: no cases selected; nothing to summarize\n";

  CompletionCache cache(config.cache_dir);
  SummarizerOptions options;
  options.model_id = config.model_id;
  options.budget = config.budget;
  if (config.mock) options.clock = fixed_timestamp;
  Summarizer summarizer(*backend, cache, options);

  const auto outcomes = run_pipelines(summarizer, selected, config.styles, config.parallelism);

  const fs::path out_dir = args.out;
  fs::create_directories(out_dir);
  nlohmann::json manifest;
  manifest["backend"] = config.mock ? "mock" : "live";
  manifest["model_id"] = config.model_id;
  if (!config.mock) manifest["endpoint"] = config.endpoint_url;
  std::vector<std::string> style_keys;
  for (auto style : config.styles) style_keys.emplace_back(style_key(style));
  manifest["styles"] = style_keys;
  manifest["prompt_hashes"] = prompt_hashes(config.styles);
  manifest["budget"] = {{"context_limit", config.budget.context_limit},
                        {"reserved_output", config.budget.reserved_output}};
  manifest["cases"] = nlohmann::json::array();

  std::size_t failures = 0;
  std::size_t total_in = 0;
  std::size_t total_out = 0;
  for (const auto& outcome : outcomes) {
    nlohmann::json entry{{"case_id", outcome.case_id}};
    if (outcome.bundle) {
      const std::string file = outcome.case_id + ".json";
      write_file_atomic(out_dir / file, serialize_bundle(*outcome.bundle));
      entry["status"] = "ok";
      entry["bundle"] = file;
      nlohmann::json stages = nlohmann::json::object();
      for (const auto& [stage, record] : outcome.bundle->provenance) {
        stages[stage] = {{"model_id", record.model_id},
                         {"prompt_hash", record.prompt_hash},
                         {"timestamp", record.timestamp},
                         {"input_tokens", record.input_tokens},
                         {"output_tokens", record.output_tokens}};
        total_in += record.input_tokens;
        total_out += record.output_tokens;
      }
      entry["stages"] = std::move(stages);
      out << "wrote " << (out_dir / file).string() << "\n";
    } else {
      ++failures;
      entry["status"] = "error";
      entry["error"] = outcome.error;
      err << "error: case " << outcome.case_id << ": " << outcome.error << "\n";
    }
    manifest["cases"].push_back(std::move(entry));
  }
  manifest["token_usage"] = {{"input_tokens", total_in}, {"output_tokens", total_out}};
  write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");

  if (failures > 0) {
    err << failures << " of " << outcomes.size() << " cases failed\n";
    return kExitPartialFailure;
  }
  return kExitSuccess;
}

// ----------------------------------------------------------------- score

struct ScoreArgs {
  std::vector<std::string> paths;
  std::optional<std::string> out;
  std::string constant = "default";
};

FleschConstant parse_constant(const std::string& name) {
  if (name == "default") return FleschConstant::Default;
  if (name == "canonical") return FleschConstant::Canonical;
  throw Error(ErrorCode::Configuration, "--constant must be 'default' or 'canonical'");
}

/// Texts to score from one path: a bundle yields one entry per stage.
std::vector<std::pair<std::string, std::string>> texts_from(const fs::path& path) {
  const std::string contents = read_file(path);
  const std::string stem = path.stem().string();
  if (path.extension() != ".json") return {{stem, contents}};

  nlohmann::json document;
  try {
    document = nlohmann::json::parse(contents);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
  const auto bundle = bundle_from_json(document);
  std::vector<std::pair<std::string, std::string>> texts;
  texts.emplace_back(bundle.case_id + ":syllabus", bundle.source_text);
  texts.emplace_back(bundle.case_id + ":intermediate", bundle.intermediate_summary);
  for (const auto& [style, text] : bundle.styled_outputs) {
    texts.emplace_back(bundle.case_id + ":" + std::string(style_key(style)), text);
  }
  return texts;
}

int cmd_score(const ScoreArgs& args, std::ostream& out, std::ostream& err) {
  const auto constant = parse_constant(args.constant);
  std::ostringstream csv;
  csv << "text_id,words,sentences,syllables,flesch,band\n";
  std::vector<double> scores;
  std::size_t failures = 0;
  for (const auto& path : args.paths) {
    std::vector<std::pair<std::string, std::string>> texts;
    try {
      texts = texts_from(path);
    } catch (const Error& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      ++failures;
      continue;
    }
    for (const auto& [id, text] : texts) {
      try {
        const auto scored = score_text(id, text, constant);
        csv << id << ',' << scored.stats.total_words << ',' << scored.stats.total_sentences << ','
            << scored.stats.total_syllables << ',' << fixed(scored.score, 4) << ','
            << to_string(scored.band) << '\n';
        scores.push_back(scored.score);
      } catch (const Error& e) {
        err << "error: " << id << ": " << e.what() << "\n";
        ++failures;
      }
    }
  }
  emit(args.out, csv.str(), out);
  if (!scores.empty()) {
    double sum = 0.0;
    for (double s : scores) sum += s;
    const double mean = sum / static_cast<double>(scores.size());
    err << "mean flesch: " << fixed(mean, 2) << " (" << to_string(interpret_score(mean)) << ") over "
        << scores.size() << " texts\n";
  }
  return failures > 0 ? kExitPartialFailure : kExitSuccess;
}

// --------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string dataset;
  std::optional<std::string> outcomes;
  std::optional<std::string> interaction;
  std::string format = "markdown";
  std::optional<std::string> out;
  std::optional<std::string> json;
};

std::vector<Outcome> parse_outcome_list(const std::string& list) {
  std::vector<Outcome> outcomes;
  std::stringstream stream(list);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    const auto outcome = parse_outcome(item);
    if (!outcome) throw Error(ErrorCode::Configuration, "unknown outcome '" + item + "'");
    outcomes.push_back(*outcome);
  }
  if (outcomes.empty()) throw Error(ErrorCode::Configuration, "no outcomes selected");
  return outcomes;
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
  TableFormat format = TableFormat::Markdown;
  if (args.format == "plain") {
    format = TableFormat::PlainText;
  } else if (args.format != "markdown") {
    throw Error(ErrorCode::Configuration, "--format must be 'markdown' or 'plain'");
  }
  std::optional<Covariate> covariate;
  if (args.interaction) {
    covariate = parse_covariate(*args.interaction);
    if (!covariate) {
      throw Error(ErrorCode::Configuration, "unsupported interaction '" + *args.interaction + "'");
    }
  }
  const auto outcomes = args.outcomes
                            ? parse_outcome_list(*args.outcomes)
                            : std::vector<Outcome>(kAllOutcomes.begin(), kAllOutcomes.end());

  std::ifstream stream(args.dataset);
  if (!stream) throw Error(ErrorCode::MissingFile, "cannot open dataset " + args.dataset);
  const auto data = read_survey_csv(stream);

  std::vector<RegressionResult> results;
  std::vector<std::string> labels;
  for (auto outcome : outcomes) {
    RegressionSpec spec;
    spec.outcome = outcome;
    results.push_back(estimate_treatment_effect(data, spec));
    labels.emplace_back(display_label(outcome));
  }
  if (covariate) {
    for (auto outcome : outcomes) {
      RegressionSpec spec;
      spec.outcome = outcome;
      spec.interaction_with = covariate;
      results.push_back(estimate_interaction(data, spec));
      labels.push_back(std::string(display_label(outcome)) + " (x " + std::string(to_string(*covariate)) + ")");
    }
  }

  emit(args.out, render_table(results, labels, format), out);
  if (args.json) write_file_atomic(*args.json, results_to_json(results).dump(2) + "\n");
  return kExitSuccess;
}

// -------------------------------------------------------------- simulate

struct SimulateArgs {
  std::optional<std::string> config_file;
  std::optional<std::string> registry;
  std::optional<std::uint64_t> seed;
  std::size_t respondents = 120;
  std::optional<double> noise;
  std::optional<double> non_college_share;
  bool continuous = false;
  std::optional<std::string> out;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  RunConfig config;
  if (args.config_file) config = load_config_file(*args.config_file);
  if (args.registry) config.registry_path = *args.registry;
  if (args.seed) config.seed = *args.seed;

  SurveyDgp dgp;
  if (args.noise) dgp.noise_scale = *args.noise;
  if (args.non_college_share) dgp.non_college_share = *args.non_college_share;
  dgp.discretize = !args.continuous;

  const auto registry = load_registry(config.registry_path);
  const auto data = simulate_survey(registry, args.respondents, dgp, config.seed);
  std::ostringstream csv;
  write_survey_csv(csv, data);
  emit(args.out, csv.str(), out);
  return kExitSuccess;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string bundles = "bundles";
  std::optional<std::string> out;
  std::string constant = "default";
};

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  const auto constant = parse_constant(args.constant);
  if (!fs::is_directory(args.bundles)) {
    throw Error(ErrorCode::MissingFile, "bundle directory " + args.bundles + " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.bundles)) {
    if (entry.path().extension() == ".json" && entry.path().filename() != "manifest.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  // Stage label -> scores, in first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_stage;
  std::size_t failures = 0;
  for (const auto& file : files) {
    try {
      for (const auto& [id, text] : texts_from(file)) {
        const std::string stage = id.substr(id.find(':') + 1);
        if (!by_stage.count(stage)) order.push_back(stage);
        by_stage[stage].push_back(score_text(id, text, constant).score);
      }
    } catch (const Error& e) {
      err << "error: " << file.string() << ": " << e.what() << "\n";
      ++failures;
    }
  }

  std::ostringstream md;
  md << "# Readability by stage\n\n";
  md << "Bundles: " << files.size() << "\n\n";
  md << "| Stage | Texts | Mean Flesch | Band |\n|---|---:|---:|---|\n";
  for (const auto& stage : order) {
    const auto& scores = by_stage[stage];
    double sum = 0.0;
    for (double s : scores) sum += s;
    const double mean = sum / static_cast<double>(scores.size());
    md << "| " << stage << " | " << scores.size() << " | " << fixed(mean, 1) << " | "
       << to_string(interpret_score(mean)) << " |\n";
  }
  emit(args.out, md.str(), out);
  return failures > 0 ? kExitPartialFailure : kExitSuccess;
}


}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Summarize judicial opinions, score readability, and analyze survey experiments",
               "opinion-simplify"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a case registry and list its topics");
  ingest_cmd->add_option("--registry", ingest.registry, "Registry JSON");
  ingest_cmd->add_option("--out", ingest.out, "Write the normalized registry here");

  SummarizeArgs summarize;
  auto* summarize_cmd = app.add_subcommand("summarize", "Run the summarization pipeline");
  summarize_cmd->add_option("--config", summarize.config_file, "Config file (key = value)");
  summarize_cmd->add_option("--registry", summarize.registry, "Registry JSON");
  summarize_cmd->add_option("--cache-dir", summarize.cache_dir, "Completion cache directory");
  summarize_cmd->add_flag("--mock", summarize.mock, "Use the offline mock backend");
  summarize_cmd->add_option("--endpoint", summarize.endpoint, "Chat-completion endpoint URL");
  summarize_cmd->add_option("--model", summarize.model, "Model id");
  summarize_cmd->add_option("--styles", summarize.styles,
                            "Comma list of 7th-grade, twitter-thread, youtube-comment");
  summarize_cmd->add_option("--parallelism", summarize.parallelism, "Concurrent cases");
  summarize_cmd->add_option("--case", summarize.cases, "Only these case ids (repeatable)");
  summarize_cmd->add_option("--out", summarize.out, "Bundle output directory");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Flesch reading ease for texts or bundles");
  score_cmd->add_option("paths", score.paths, "Text files or bundle JSON files")->required();
  score_cmd->add_option("--out", score.out, "CSV output path (stdout by default)");
  score_cmd->add_option("--constant", score.constant, "default (206.185) or canonical (206.835) intercept");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Estimate treatment effects from a survey CSV");
  analyze_cmd->add_option("dataset", analyze.dataset, "Survey CSV")->required();
  analyze_cmd->add_option("--outcomes", analyze.outcomes, "Comma list of outcome columns");
  analyze_cmd->add_option("--interaction", analyze.interaction, "Interact treatment with non_college");
  analyze_cmd->add_option("--format", analyze.format, "markdown or plain");
  analyze_cmd->add_option("--out", analyze.out, "Table output path (stdout by default)");
  analyze_cmd->add_option("--json", analyze.json, "Write full-precision results JSON here");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a survey dataset");
  simulate_cmd->add_option("--config", simulate.config_file, "Config file (key = value)");
  simulate_cmd->add_option("--registry", simulate.registry, "Registry JSON");
  simulate_cmd->add_option("--seed", simulate.seed, "Random seed");
  simulate_cmd->add_option("--respondents", simulate.respondents, "Number of respondents");
  simulate_cmd->add_option("--noise", simulate.noise, "Noise scale (0 for noiseless)");
  simulate_cmd->add_option("--non-college-share", simulate.non_college_share,
                           "Share of respondents without a college degree");
  simulate_cmd->add_flag("--continuous", simulate.continuous,
                         "Keep outcomes at their latent values instead of rounding");
  simulate_cmd->add_option("--out", simulate.out, "CSV output path (stdout by default)");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Readability summary across a bundle directory");
  report_cmd->add_option("bundles", report.bundles, "Bundle directory");
  report_cmd->add_option("--out", report.out, "Markdown output path (stdout by default)");
  report_cmd->add_option("--constant", report.constant, "default (206.185) or canonical (206.835) intercept");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out);
    if (*summarize_cmd) return cmd_summarize(summarize, out, err);
    if (*score_cmd) return cmd_score(score, out, err);
    if (*analyze_cmd) return cmd_analyze(analyze, out);
    if (*simulate_cmd) return cmd_simulate(simulate, out);
    if (*report_cmd) return cmd_report(report, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitUsage;
}

}  // namespace opinion
