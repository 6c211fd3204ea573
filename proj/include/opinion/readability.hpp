#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opinion {

struct TextStatistics {
  std::size_t total_words = 0;
  std::size_t total_sentences = 0;
  std::size_t total_syllables = 0;

  TextStatistics& operator+=(const TextStatistics& other) {
    total_words += other.total_words;
    total_sentences += other.total_sentences;
    total_syllables += other.total_syllables;
    return *this;
  }
};

/// Intercept of the reading-ease formula: 206.185 by default, or the
/// canonical Flesch value 206.835.
enum class FleschConstant { Default, Canonical };

double flesch_intercept(FleschConstant constant);

enum class ReadabilityBand {
  VeryEasy,
  Easy,
  FairlyEasy,
  PlainEnglish,
  FairlyDifficult,
  HardToRead,
  VeryDifficult,
};

std::string_view to_string(ReadabilityBand band);

/// Splits on `.`, `!`, `?` (plus trailing closing quotes/brackets) followed by
/// whitespace or end of text, and on blank lines. Abbreviations such as "v."
/// and "U.S." and list markers such as "1." do not end a sentence.
std::vector<std::string> segment_sentences(std::string_view text);

/// Vowel-group syllable heuristic with silent-e, -es and -ed adjustments.
/// Throws NoAlphabetic when the word has no letters.
int count_syllables(std::string_view word);

/// Drops paragraph markers ("1)", "2/10") at line starts and glossary asterisks.
std::string strip_formatting(std::string_view text);

/// Counts over the text as given (no formatting stripped). Words are
/// whitespace tokens containing a letter; sentences are segments holding a word.
TextStatistics compute_statistics(std::string_view text);

/// Throws EmptyText when there are no words or no sentences.
double flesch_reading_ease(const TextStatistics& stats,
                           FleschConstant constant = FleschConstant::Default);

ReadabilityBand interpret_score(double score);

struct ScoredText {
  std::string text_id;
  TextStatistics stats;
  double score = 0.0;
  ReadabilityBand band = ReadabilityBand::PlainEnglish;
};

struct ReadabilityReport {
  std::vector<ScoredText> per_text;
  double mean_score = 0.0;
  ReadabilityBand mean_band = ReadabilityBand::PlainEnglish;
};

/// Scores a single text after strip_formatting.
ScoredText score_text(std::string text_id, std::string_view text,
                      FleschConstant constant = FleschConstant::Default);

ReadabilityReport score_corpus(const std::vector<std::pair<std::string, std::string>>& texts,
                               FleschConstant constant = FleschConstant::Default);

}  // namespace opinion
