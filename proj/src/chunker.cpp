#include "opinion/chunker.hpp"

#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

namespace {

// Source text spanning `words[begin, end)`, original spacing preserved.
class WordRange {
public:
  explicit WordRange(const std::vector<std::string_view>& words) : words_(words) {}

  std::string_view span(std::size_t begin, std::size_t end) const {
    const char* first = words_[begin].data();
    const char* last = words_[end - 1].data() + words_[end - 1].size();
    return {first, static_cast<std::size_t>(last - first)};
  }

private:
  const std::vector<std::string_view>& words_;
};

}  // namespace

std::size_t estimate_tokens_for_words(std::size_t word_count) {
  return (word_count * 4096 + 2999) / 3000;
}

std::size_t estimate_tokens(std::string_view text) {
  return estimate_tokens_for_words(text::split_whitespace(text).size());
}

void TokenBudget::validate() const {
  if (context_limit <= reserved_output + prompt_overhead || reserved_output + prompt_overhead == 0) {
    throw Error(ErrorCode::InvalidParameter,
                "token budget leaves no input allowance (context " + std::to_string(context_limit) +
                    ", reserved output " + std::to_string(reserved_output) +
                    ", prompt overhead " + std::to_string(prompt_overhead) + ")");
  }
}

std::size_t TokenBudget::input_allowance() const {
  validate();
  return context_limit - reserved_output - prompt_overhead;
}

ChunkSet chunk_text(std::string_view source, const TokenBudget& budget,
                    const TokenCounter& counter) {
  const std::size_t allowance = budget.input_allowance();
  const auto words = text::split_whitespace(source);

  ChunkSet result;
  result.source_length_words = words.size();
  if (words.empty()) return result;

  // Sentence spans as [begin, end) word indices.
  std::vector<std::pair<std::size_t, std::size_t>> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (text::ends_sentence(words[i]) || i + 1 == words.size()) {
      sentences.emplace_back(start, i + 1);
      start = i + 1;
    }
  }

  const WordRange range(words);
  auto fits = [&](std::size_t begin, std::size_t end) {
    return counter(range.span(begin, end)) <= allowance;
  };

  std::size_t chunk_begin = 0;
  std::size_t chunk_end = 0;  // exclusive; chunk is empty when equal
  auto flush = [&] {
    if (chunk_end > chunk_begin) result.chunks.emplace_back(range.span(chunk_begin, chunk_end));
    chunk_begin = chunk_end;
  };

  for (const auto& [s_begin, s_end] : sentences) {
    if (fits(chunk_begin, s_end)) {
      chunk_end = s_end;
      continue;
    }
    flush();
    if (fits(s_begin, s_end)) {
      chunk_end = s_end;
      continue;
    }
    // Sentence alone is over budget: fall back to word boundaries.
    for (std::size_t w = s_begin; w < s_end; ++w) {
      if (fits(chunk_begin, w + 1)) {
        chunk_end = w + 1;
        continue;
      }
      flush();
      if (!fits(w, w + 1)) {
        throw Error(ErrorCode::BudgetUnsatisfiable,
                    "word '" + std::string(words[w]) + "' alone exceeds the input allowance of " +
                        std::to_string(allowance) + " tokens");
      }
      chunk_end = w + 1;
    }
  }
  flush();
  return result;
}

}  // namespace opinion
