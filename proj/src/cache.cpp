#include "opinion/cache.hpp"

#include <nlohmann/json.hpp>

#include "opinion/error.hpp"
#include "opinion/fs_util.hpp"
#include "opinion/hash.hpp"

namespace opinion {

std::string CacheKey::digest() const {
  constexpr char kSep = '\x1f';
  return sha256_hex(case_id + kSep + stage + kSep + prompt_hash + kSep + model_id + kSep +
                    input_hash);
}

CompletionCache::CompletionCache(std::optional<std::filesystem::path> directory)
    : directory_(std::move(directory)) {
  if (directory_) std::filesystem::create_directories(*directory_);
}

std::optional<CacheEntry> CompletionCache::get(const CacheKey& key) {
  const auto digest = key.digest();
  {
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(digest); it != memory_.end()) return it->second;
  }
  if (!directory_) return std::nullopt;

  const auto path = *directory_ / (digest + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const auto json = nlohmann::json::parse(read_file(path));
    CacheEntry entry{json.at("output").get<std::string>(), json.at("model_id").get<std::string>(),
                     json.at("prompt_hash").get<std::string>(),
                     json.at("timestamp").get<std::string>()};
    std::lock_guard lock(mutex_);
    memory_.emplace(digest, entry);
    return entry;
  } catch (const nlohmann::json::exception&) {
    // Corrupt entry: treat as a miss, it gets rewritten.
    return std::nullopt;
  }
}

void CompletionCache::put(const CacheKey& key, const CacheEntry& entry) {
  const auto digest = key.digest();
  {
    std::lock_guard lock(mutex_);
    memory_[digest] = entry;
  }
  if (!directory_) return;
  nlohmann::json json = {
      {"case_id", key.case_id},   {"stage", key.stage},
      {"input_hash", key.input_hash}, {"model_id", entry.model_id},
      {"prompt_hash", entry.prompt_hash}, {"timestamp", entry.timestamp},
      {"output", entry.output},
  };
  write_file_atomic(*directory_ / (digest + ".json"), json.dump(2) + "\n");
}

std::unique_lock<std::mutex> CompletionCache::lock_key(const CacheKey& key) {
  std::mutex* key_mutex = nullptr;
  {
    std::lock_guard lock(mutex_);
    auto& slot = key_locks_[key.digest()];
    if (!slot) slot = std::make_unique<std::mutex>();
    key_mutex = slot.get();
  }
  return std::unique_lock(*key_mutex);
}

}  // namespace opinion
