#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "opinion/chunker.hpp"
#include "opinion/prompts.hpp"

namespace opinion {

/// Settings shared by the pipeline commands. Command-line flags override the
/// config file, which overrides these defaults.
///
/// Config file keys (`key = value`, `#` comments, optional quotes, `[section]`
/// headers ignored):
///   registry, cache_dir, backend (mock | live), endpoint, model, styles
///   (comma list), parallelism, seed, context_limit, reserved_output,
///   requests_per_second
struct RunConfig {
  std::filesystem::path registry_path = "data/registry.json";
  std::optional<std::filesystem::path> cache_dir;
  bool mock = false;
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string model_id = "gpt-4";
  TokenBudget budget{};
  std::set<OutputStyle> styles{OutputStyle::SeventhGrade};
  std::size_t parallelism = 1;
  std::uint64_t seed = 42;
  double requests_per_second = 1.0;

  /// Throws Configuration.
  void validate() const;
};

/// Parses `key = value` lines; throws Configuration naming the bad line.
std::map<std::string, std::string> parse_config_text(std::string_view text);

/// Applies parsed keys onto `config`; unknown keys and malformed values throw
/// Configuration.
void apply_config(RunConfig& config, const std::map<std::string, std::string>& values);

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// "7th-grade,twitter-thread" -> styles; throws Configuration on unknown keys.
std::set<OutputStyle> parse_style_list(std::string_view list);

}  // namespace opinion
