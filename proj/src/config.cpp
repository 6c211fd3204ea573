#include "opinion/config.hpp"

#include <charconv>
#include <cmath>

#include "opinion/error.hpp"
#include "opinion/fs_util.hpp"

namespace opinion {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::Configuration, "'" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw Error(ErrorCode::Configuration, "'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (parallelism < 1) throw Error(ErrorCode::Configuration, "parallelism must be at least 1");
  if (!(requests_per_second > 0.0)) {
    throw Error(ErrorCode::Configuration, "requests_per_second must be positive");
  }
  if (styles.empty()) throw Error(ErrorCode::Configuration, "at least one style is required");
  if (model_id.empty()) throw Error(ErrorCode::Configuration, "model id is empty");
  if (!mock && endpoint_url.empty()) {
    throw Error(ErrorCode::Configuration, "live backend needs an endpoint URL");
  }
  try {
    budget.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Configuration, e.detail());
  }
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> values;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    std::string line = trim(text.substr(start, end - start));
    start = end + 1;

    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty() || line.front() == '[') continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Configuration,
                  "config line " + std::to_string(line_number) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw Error(ErrorCode::Configuration,
                  "config line " + std::to_string(line_number) + ": empty key");
    }
    values[key] = value;
  }
  return values;
}

std::set<OutputStyle> parse_style_list(std::string_view list) {
  std::set<OutputStyle> styles;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const std::string key = trim(list.substr(start, end - start));
    start = end + 1;
    if (key.empty()) continue;
    const auto style = parse_style(key);
    if (!style) {
      throw Error(ErrorCode::Configuration,
                  "unknown style '" + key + "' (expected 7th-grade, twitter-thread, youtube-comment)");
    }
    styles.insert(*style);
  }
  return styles;
}

void apply_config(RunConfig& config, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "registry") {
      config.registry_path = value;
    } else if (key == "cache_dir") {
      config.cache_dir = value.empty() ? std::nullopt : std::optional<std::filesystem::path>(value);
    } else if (key == "backend") {
      if (value != "mock" && value != "live") {
        throw Error(ErrorCode::Configuration, "backend must be 'mock' or 'live'");
      }
      config.mock = value == "mock";
    } else if (key == "endpoint") {
      config.endpoint_url = value;
    } else if (key == "model") {
      config.model_id = value;
    } else if (key == "styles") {
      config.styles = parse_style_list(value);
    } else if (key == "parallelism") {
      config.parallelism = parse_integer<std::size_t>(key, value);
    } else if (key == "seed") {
      config.seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "context_limit") {
      config.budget.context_limit = parse_integer<std::size_t>(key, value);
    } else if (key == "reserved_output") {
      config.budget.reserved_output = parse_integer<std::size_t>(key, value);
    } else if (key == "requests_per_second") {
      config.requests_per_second = parse_real(key, value);
    } else {
      throw Error(ErrorCode::Configuration, "unknown config key '" + key + "'");
    }
  }
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::Configuration, e.detail());
  }
  apply_config(base, parse_config_text(text));
  return base;
}

}  // namespace opinion
