#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace opinion {

/// Word-ratio token estimate: ceil(words * 4096 / 3000), i.e. 6000 words map
/// to an 8192-token context window. Words are whitespace-delimited tokens.
std::size_t estimate_tokens(std::string_view text);

/// Token estimate for an already-counted number of words.
std::size_t estimate_tokens_for_words(std::size_t word_count);

/// Any text -> token-count function; estimate_tokens is the default. A real
/// tokenizer can be dropped in as long as it is monotone in appended text.
using TokenCounter = std::function<std::size_t(std::string_view)>;

struct TokenBudget {
  std::size_t context_limit = 8192;
  std::size_t reserved_output = 4096;
  std::size_t prompt_overhead = 0;

  /// Throws InvalidParameter unless context_limit > reserved_output + prompt_overhead.
  void validate() const;
  std::size_t input_allowance() const;

  TokenBudget with_overhead(std::size_t overhead) const {
    TokenBudget copy = *this;
    copy.prompt_overhead = overhead;
    return copy;
  }
};

struct ChunkSet {
  std::vector<std::string> chunks;
  std::size_t source_length_words = 0;
};

/// Splits text into chunks whose estimated token count fits the budget's
/// input allowance. Each chunk is a contiguous span of the source (first to
/// last word, inner whitespace kept), so the chunks' words are exactly the
/// source's words in order.
/// Boundaries prefer sentence ends; a sentence longer than the allowance is
/// split between words. Throws BudgetUnsatisfiable if a single word does not fit.
ChunkSet chunk_text(std::string_view text, const TokenBudget& budget,
                    const TokenCounter& counter = estimate_tokens);

}  // namespace opinion
