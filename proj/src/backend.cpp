#include "opinion/backend.hpp"

#include <thread>

#include "opinion/error.hpp"
#include "opinion/hash.hpp"
#include "opinion/readability.hpp"

namespace opinion {

std::size_t CompletionRequest::total_tokens(const TokenCounter& counter) const {
  return counter(instruction) + counter(input_text) + max_output_tokens;
}

bool CompletionRequest::within_budget(std::size_t context_limit,
                                      const TokenCounter& counter) const {
  return temperature == 0.0 && total_tokens(counter) <= context_limit;
}

std::string MockBackend::complete(const CompletionRequest& request) {
  ++calls_;
  std::string out = "[mock " + request.model_id + " " +
                    sha256_hex(request.instruction).substr(0, 8) + "]";
  const auto sentences = segment_sentences(request.input_text);
  for (std::size_t i = 0; i < sentences.size() && i < sentences_; ++i) {
    out += ' ';
    out += sentences[i];
  }
  return out;
}

void real_sleep(std::chrono::milliseconds duration) { std::this_thread::sleep_for(duration); }

std::string RetryingBackend::complete(const CompletionRequest& request) {
  auto backoff = policy_.initial_backoff;
  std::string last_error;
  const std::size_t attempts = policy_.max_attempts == 0 ? 1 : policy_.max_attempts;
  for (std::size_t attempt = 1; attempt <= attempts; ++attempt) {
    try {
      return inner_.complete(request);
    } catch (const TransientBackendError& e) {
      last_error = e.what();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::BackendFailure) throw;
      throw Error(ErrorCode::BackendFailure, e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::BackendFailure, std::string("permanent failure: ") + e.what());
    }
    if (attempt < attempts) {
      sleeper_(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) * policy_.multiplier));
    }
  }
  throw Error(ErrorCode::BackendFailure, "gave up after " + std::to_string(attempts) +
                                             " attempts; last error: " + last_error);
}

RateLimiter::RateLimiter(double requests_per_second, Clock clock, Sleeper sleeper)
    : clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
      sleeper_(std::move(sleeper)) {
  if (!(requests_per_second > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "rate limit must be positive");
  }
  interval_ = std::chrono::nanoseconds(static_cast<long long>(1e9 / requests_per_second));
}

void RateLimiter::acquire() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = clock_();
    slot = next_slot_ && *next_slot_ > now ? *next_slot_ : now;
    next_slot_ = slot + interval_;
  }
  const auto now = clock_();
  if (slot > now) {
    sleeper_(std::chrono::ceil<std::chrono::milliseconds>(slot - now));
  }
}

}  // namespace opinion
