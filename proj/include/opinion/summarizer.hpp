#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opinion/backend.hpp"
#include "opinion/cache.hpp"
#include "opinion/chunker.hpp"
#include "opinion/corpus.hpp"
#include "opinion/prompts.hpp"

namespace opinion {

struct StageRecord {
  std::string model_id;
  std::string prompt_hash;
  std::string timestamp;
  std::size_t input_tokens = 0;
  std::size_t output_tokens = 0;

  bool operator==(const StageRecord&) const = default;
};

using Provenance = std::map<std::string, StageRecord>;

struct SummaryBundle {
  std::string case_id;
  std::string source_text;
  std::string facts_summary;
  std::vector<std::string> chunk_summaries;
  std::string intermediate_summary;
  std::map<OutputStyle, std::string> styled_outputs;
  Provenance provenance;

  bool operator==(const SummaryBundle&) const = default;
};

inline constexpr std::string_view kIntermediateSeparator = "\n\n";

/// Facts summary first, then chunk summaries in order, separated by a blank line.
/// Throws InvalidParameter when the facts summary is empty.
std::string build_intermediate(const std::string& facts_summary,
                               const std::vector<std::string>& chunk_summaries);

nlohmann::json to_json(const SummaryBundle& bundle);
SummaryBundle bundle_from_json(const nlohmann::json& json);
/// Pretty JSON with sorted keys and a trailing newline.
std::string serialize_bundle(const SummaryBundle& bundle);

/// ISO-8601 UTC wall-clock time.
std::string utc_timestamp();
/// Clock for reproducible offline runs.
inline std::string fixed_timestamp() { return "1970-01-01T00:00:00Z"; }

struct SummarizerOptions {
  std::string model_id = "gpt-4";
  TokenBudget budget{};
  std::size_t max_recursion_depth = 3;
  std::function<std::string()> clock = utc_timestamp;
  TokenCounter counter = estimate_tokens;
};

/// Runs the facts -> syllabus chunks -> intermediate -> style transfer chain
/// for one case at a time. Every backend call goes through the cache first.
class Summarizer {
public:
  Summarizer(CompletionBackend& backend, CompletionCache& cache, SummarizerOptions options = {});

  const SummarizerOptions& options() const noexcept { return options_; }

  std::string summarize_facts(const OpinionCase& opinion, Provenance* provenance = nullptr);

  std::vector<std::string> summarize_syllabus(const OpinionCase& opinion,
                                              Provenance* provenance = nullptr);

  /// Re-chunks and condenses an oversize intermediate up to `max_depth`
  /// rounds (options().max_recursion_depth when unset).
  std::string style_transfer(const std::string& case_id, const std::string& intermediate,
                             OutputStyle style, Provenance* provenance = nullptr,
                             std::optional<std::size_t> max_depth = std::nullopt);

  SummaryBundle run_pipeline(const OpinionCase& opinion, const std::set<OutputStyle>& styles);

private:
  std::string call(const std::string& case_id, const std::string& stage,
                   const PromptTemplate& prompt, const std::string& input,
                   Provenance* provenance);
  std::vector<std::string> summarize_chunks(const std::string& case_id,
                                            const std::string& stage_prefix,
                                            const PromptTemplate& prompt,
                                            const std::string& text, Provenance* provenance);
  TokenBudget budget_for(const PromptTemplate& prompt) const;

  CompletionBackend& backend_;
  CompletionCache& cache_;
  SummarizerOptions options_;
};

struct CaseOutcome {
  std::string case_id;
  std::optional<SummaryBundle> bundle;
  std::string error;  // empty on success
};

/// Runs cases on up to `parallelism` threads; stages within a case stay
/// sequential. Outcomes come back in input order.
std::vector<CaseOutcome> run_pipelines(Summarizer& summarizer,
                                       const std::vector<OpinionCase>& cases,
                                       const std::set<OutputStyle>& styles,
                                       std::size_t parallelism);

}  // namespace opinion
