#include "opinion/summarizer.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <thread>

#include "opinion/error.hpp"
#include "opinion/hash.hpp"

namespace opinion {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += separator;
    out += parts[i];
  }
  return out;
}

template <typename F>
auto in_stage(const std::string& stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw e.with_context("stage '" + stage + "'");
  }
}

}  // namespace

std::string build_intermediate(const std::string& facts_summary,
                               const std::vector<std::string>& chunk_summaries) {
  if (facts_summary.empty()) {
    throw Error(ErrorCode::InvalidParameter, "facts summary must be nonempty");
  }
  std::string out = facts_summary;
  for (const auto& summary : chunk_summaries) {
    out += kIntermediateSeparator;
    out += summary;
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

nlohmann::json to_json(const SummaryBundle& bundle) {
  nlohmann::json styled = nlohmann::json::object();
  for (const auto& [style, text] : bundle.styled_outputs) styled[std::string(style_key(style))] = text;

  nlohmann::json provenance = nlohmann::json::object();
  for (const auto& [stage, record] : bundle.provenance) {
    provenance[stage] = {
        {"model_id", record.model_id},       {"prompt_hash", record.prompt_hash},
        {"timestamp", record.timestamp},     {"input_tokens", record.input_tokens},
        {"output_tokens", record.output_tokens},
    };
  }
  return {
      {"case_id", bundle.case_id},
      {"source_text", bundle.source_text},
      {"facts_summary", bundle.facts_summary},
      {"chunk_summaries", bundle.chunk_summaries},
      {"intermediate_summary", bundle.intermediate_summary},
      {"styled_outputs", styled},
      {"provenance", provenance},
  };
}

SummaryBundle bundle_from_json(const nlohmann::json& json) {
  try {
    SummaryBundle bundle;
    bundle.case_id = json.at("case_id").get<std::string>();
    bundle.source_text = json.value("source_text", std::string());
    bundle.facts_summary = json.at("facts_summary").get<std::string>();
    bundle.chunk_summaries = json.at("chunk_summaries").get<std::vector<std::string>>();
    bundle.intermediate_summary = json.at("intermediate_summary").get<std::string>();
    for (const auto& [key, value] : json.at("styled_outputs").items()) {
      const auto style = parse_style(key);
      if (!style) throw Error(ErrorCode::SchemaViolation, "unknown style '" + key + "' in bundle");
      if (!bundle.styled_outputs.emplace(*style, value.get<std::string>()).second) {
        throw Error(ErrorCode::SchemaViolation, "style '" + key + "' appears twice in bundle");
      }
    }
    if (json.contains("provenance")) {
      for (const auto& [stage, record] : json.at("provenance").items()) {
        bundle.provenance[stage] = StageRecord{
            record.at("model_id").get<std::string>(), record.at("prompt_hash").get<std::string>(),
            record.at("timestamp").get<std::string>(), record.value("input_tokens", std::size_t{0}),
            record.value("output_tokens", std::size_t{0})};
      }
    }
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("malformed bundle: ") + e.what());
  }
}

std::string serialize_bundle(const SummaryBundle& bundle) { return to_json(bundle).dump(2) + "\n"; }

Summarizer::Summarizer(CompletionBackend& backend, CompletionCache& cache,
                       SummarizerOptions options)
    : backend_(backend), cache_(cache), options_(std::move(options)) {
  options_.budget.validate();
  if (!options_.clock) options_.clock = utc_timestamp;
  if (!options_.counter) options_.counter = estimate_tokens;
}

TokenBudget Summarizer::budget_for(const PromptTemplate& prompt) const {
  auto budget = options_.budget.with_overhead(options_.counter(prompt.render()));
  budget.validate();
  return budget;
}

std::string Summarizer::call(const std::string& case_id, const std::string& stage,
                             const PromptTemplate& prompt, const std::string& input,
                             Provenance* provenance) {
  const auto budget = budget_for(prompt);
  CompletionRequest request{options_.model_id, prompt.render(), input, 0.0,
                            budget.reserved_output};
  if (!request.within_budget(budget.context_limit, options_.counter)) {
    throw Error(ErrorCode::BudgetUnsatisfiable,
                "request needs " + std::to_string(request.total_tokens(options_.counter)) +
                    " tokens, context limit is " + std::to_string(budget.context_limit));
  }

  const std::string prompt_hash = sha256_hex(request.instruction);
  const CacheKey key{case_id, stage, prompt_hash, options_.model_id, sha256_hex(input)};

  auto guard = cache_.lock_key(key);
  auto entry = cache_.get(key);
  if (!entry) {
    entry = CacheEntry{backend_.complete(request), options_.model_id, prompt_hash,
                       options_.clock()};
    cache_.put(key, *entry);
  }
  if (provenance) {
    (*provenance)[stage] = StageRecord{entry->model_id, entry->prompt_hash, entry->timestamp,
                                       options_.counter(request.instruction) +
                                           options_.counter(request.input_text),
                                       options_.counter(entry->output)};
  }
  return entry->output;
}

std::vector<std::string> Summarizer::summarize_chunks(const std::string& case_id,
                                                      const std::string& stage_prefix,
                                                      const PromptTemplate& prompt,
                                                      const std::string& text,
                                                      Provenance* provenance) {
  const auto chunks = chunk_text(text, budget_for(prompt), options_.counter);
  std::vector<std::string> out;
  out.reserve(chunks.chunks.size());
  for (std::size_t i = 0; i < chunks.chunks.size(); ++i) {
    out.push_back(call(case_id, stage_prefix + "[" + std::to_string(i) + "]", prompt,
                       chunks.chunks[i], provenance));
  }
  return out;
}

std::string Summarizer::summarize_facts(const OpinionCase& opinion, Provenance* provenance) {
  if (opinion.facts_text.empty()) {
    throw Error(ErrorCode::SchemaViolation, "case '" + opinion.case_id + "' has empty facts_text");
  }
  const PromptTemplate prompt(TemplateId::FactsSummary);
  if (options_.counter(opinion.facts_text) <= budget_for(prompt).input_allowance()) {
    return call(opinion.case_id, "facts", prompt, opinion.facts_text, provenance);
  }
  return join(summarize_chunks(opinion.case_id, "facts", prompt, opinion.facts_text, provenance),
              " ");
}

std::vector<std::string> Summarizer::summarize_syllabus(const OpinionCase& opinion,
                                                        Provenance* provenance) {
  if (opinion.syllabus_text.empty()) {
    throw Error(ErrorCode::SchemaViolation,
                "case '" + opinion.case_id + "' has empty syllabus_text");
  }
  return summarize_chunks(opinion.case_id, "syllabus", PromptTemplate(TemplateId::SyllabusSummary),
                          opinion.syllabus_text, provenance);
}

std::string Summarizer::style_transfer(const std::string& case_id, const std::string& intermediate,
                                       OutputStyle style, Provenance* provenance,
                                       std::optional<std::size_t> max_depth) {
  const PromptTemplate prompt(TemplateId::StyleTransfer, style);
  const std::size_t allowance = budget_for(prompt).input_allowance();
  const PromptTemplate condense(TemplateId::SyllabusSummary);

  std::string current = intermediate;
  const std::size_t depth_limit = max_depth.value_or(options_.max_recursion_depth);
  for (std::size_t depth = 0; options_.counter(current) > allowance; ++depth) {
    if (depth == depth_limit) {
      throw Error(ErrorCode::BudgetUnsatisfiable,
                  "intermediate summary still needs " + std::to_string(options_.counter(current)) +
                      " tokens after " + std::to_string(depth) +
                      " condensing rounds; style-transfer allowance is " +
                      std::to_string(allowance));
    }
    current = join(summarize_chunks(case_id, "condense[" + std::to_string(depth + 1) + "]",
                                    condense, current, provenance),
                   kIntermediateSeparator);
  }
  return call(case_id, "style:" + std::string(style_key(style)), prompt, current, provenance);
}

SummaryBundle Summarizer::run_pipeline(const OpinionCase& opinion,
                                       const std::set<OutputStyle>& styles) {
  SummaryBundle bundle;
  bundle.case_id = opinion.case_id;
  bundle.source_text = opinion.syllabus_text;

  bundle.facts_summary =
      in_stage("facts", [&] { return summarize_facts(opinion, &bundle.provenance); });
  bundle.chunk_summaries =
      in_stage("syllabus", [&] { return summarize_syllabus(opinion, &bundle.provenance); });
  bundle.intermediate_summary = build_intermediate(bundle.facts_summary, bundle.chunk_summaries);

  for (OutputStyle style : styles) {
    const std::string stage = "style:" + std::string(style_key(style));
    bundle.styled_outputs[style] = in_stage(stage, [&] {
      return style_transfer(opinion.case_id, bundle.intermediate_summary, style,
                            &bundle.provenance);
    });
  }
  return bundle;
}

std::vector<CaseOutcome> run_pipelines(Summarizer& summarizer,
                                       const std::vector<OpinionCase>& cases,
                                       const std::set<OutputStyle>& styles,
                                       std::size_t parallelism) {
  std::vector<CaseOutcome> outcomes(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      outcomes[i].case_id = cases[i].case_id;
      try {
        outcomes[i].bundle = summarizer.run_pipeline(cases[i], styles);
      } catch (const std::exception& e) {
        outcomes[i].error = "case '" + cases[i].case_id + "', " + e.what();
      }
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(parallelism, cases.size()));
  if (threads == 1) {
    worker();
    return outcomes;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return outcomes;
}

}  // namespace opinion
