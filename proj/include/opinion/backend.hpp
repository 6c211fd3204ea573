#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "opinion/chunker.hpp"

namespace opinion {

struct CompletionRequest {
  std::string model_id;
  std::string instruction;
  std::string input_text;
  double temperature = 0.0;
  std::size_t max_output_tokens = 4096;

  /// estimate(instruction) + estimate(input) + max_output_tokens.
  std::size_t total_tokens(const TokenCounter& counter = estimate_tokens) const;
  /// Temperature is zero and the request fits within context_limit.
  bool within_budget(std::size_t context_limit,
                     const TokenCounter& counter = estimate_tokens) const;
};

/// Raised by transports for failures that may succeed on retry (HTTP 429,
/// 5xx, connection errors). Anything else is permanent.
class TransientBackendError : public std::runtime_error {
public:
  TransientBackendError(int status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  int status() const noexcept { return status_; }

private:
  int status_;
};

class CompletionBackend {
public:
  virtual ~CompletionBackend() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Offline stand-in: a tag naming the model and instruction digest followed by
/// the first `sentences` sentences of the input. Deterministic and thread-safe.
class MockBackend : public CompletionBackend {
public:
  explicit MockBackend(std::size_t sentences = 2) : sentences_(sentences) {}

  std::string complete(const CompletionRequest& request) override;
  std::size_t calls() const noexcept { return calls_.load(); }

private:
  std::size_t sentences_;
  std::atomic<std::size_t> calls_{0};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

void real_sleep(std::chrono::milliseconds duration);

struct RetryPolicy {
  std::size_t max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
};

/// Retries transient failures with exponential backoff; converts every
/// failure into Error(BackendFailure) naming the attempts made.
class RetryingBackend : public CompletionBackend {
public:
  RetryingBackend(CompletionBackend& inner, RetryPolicy policy = {},
                  Sleeper sleeper = real_sleep)
      : inner_(inner), policy_(policy), sleeper_(std::move(sleeper)) {}

  std::string complete(const CompletionRequest& request) override;

private:
  CompletionBackend& inner_;
  RetryPolicy policy_;
  Sleeper sleeper_;
};

/// Spaces successive acquisitions at least `1 / requests_per_second` apart.
/// Shared by every worker in a pipeline run.
class RateLimiter {
public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit RateLimiter(double requests_per_second = 1.0, Clock clock = nullptr,
                       Sleeper sleeper = real_sleep);

  void acquire();

private:
  std::chrono::nanoseconds interval_;
  Clock clock_;
  Sleeper sleeper_;
  std::mutex mutex_;
  std::optional<std::chrono::steady_clock::time_point> next_slot_;
};

class RateLimitedBackend : public CompletionBackend {
public:
  RateLimitedBackend(CompletionBackend& inner, RateLimiter& limiter)
      : inner_(inner), limiter_(limiter) {}

  std::string complete(const CompletionRequest& request) override {
    limiter_.acquire();
    return inner_.complete(request);
  }

private:
  CompletionBackend& inner_;
  RateLimiter& limiter_;
};

inline constexpr const char* kApiKeyEnv = "OPINION_SIMPLIFY_API_KEY";

struct HttpBackendConfig {
  std::string endpoint_url;  // e.g. https://api.openai.com/v1/chat/completions
  std::string api_key;
  std::chrono::seconds timeout{120};
};

/// Chat-completion transport: POSTs a JSON body with the instruction as the
/// system message and the input as the user message.
class HttpChatBackend : public CompletionBackend {
public:
  explicit HttpChatBackend(HttpBackendConfig config);

  std::string complete(const CompletionRequest& request) override;

private:
  HttpBackendConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

/// Request body sent by HttpChatBackend (exposed for tests and tooling).
std::string chat_request_body(const CompletionRequest& request);

/// Extracts choices[0].message.content; throws Error(BackendFailure) otherwise.
std::string parse_chat_response(const std::string& body);

}  // namespace opinion
