#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace opinion {

struct CacheKey {
  std::string case_id;
  std::string stage;
  std::string prompt_hash;
  std::string model_id;
  std::string input_hash;

  /// SHA-256 over the five fields; also the on-disk file stem.
  std::string digest() const;
};

struct CacheEntry {
  std::string output;
  std::string model_id;
  std::string prompt_hash;
  std::string timestamp;
};

/// Content-addressed completion cache. With a directory, entries persist as
/// `<digest>.json`; without one the cache lives in memory only.
class CompletionCache {
public:
  explicit CompletionCache(std::optional<std::filesystem::path> directory = std::nullopt);

  std::optional<CacheEntry> get(const CacheKey& key);
  void put(const CacheKey& key, const CacheEntry& entry);

  /// Serializes the lookup-call-store sequence for one key across threads.
  std::unique_lock<std::mutex> lock_key(const CacheKey& key);

private:
  std::optional<std::filesystem::path> directory_;
  std::mutex mutex_;
  std::map<std::string, CacheEntry> memory_;
  std::map<std::string, std::unique_ptr<std::mutex>> key_locks_;
};

}  // namespace opinion
