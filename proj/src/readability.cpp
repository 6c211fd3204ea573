#include "opinion/readability.hpp"

#include <numeric>

#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_consonant(char c) { return text::is_alpha(c) && !is_vowel(c); }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool closes_quote(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// Index one past the sentence terminator run starting at `i`, or npos when the
// punctuation at `i` does not end a sentence.
std::size_t sentence_end_at(std::string_view s, std::size_t i, std::size_t token_start) {
  std::size_t j = i;
  while (j < s.size() && (s[j] == '.' || s[j] == '!' || s[j] == '?')) ++j;
  while (j < s.size() && closes_quote(s[j])) ++j;
  if (j < s.size() && !text::is_space(s[j])) return std::string_view::npos;
  if (s[i] == '.' && j == i + 1) {
    std::string_view token = s.substr(token_start, i + 1 - token_start);
    if (text::is_abbreviation(token)) return std::string_view::npos;
    // "1." opening a line is a list marker.
    bool line_start = token_start == 0 || s[token_start - 1] == '\n';
    if (line_start && text::is_list_marker(token)) return std::string_view::npos;
  }
  return j;
}

}  // namespace

double flesch_intercept(FleschConstant constant) {
  return constant == FleschConstant::Default ? 206.185 : 206.835;
}

std::string_view to_string(ReadabilityBand band) {
  switch (band) {
    case ReadabilityBand::VeryEasy: return "very easy";
    case ReadabilityBand::Easy: return "easy";
    case ReadabilityBand::FairlyEasy: return "fairly easy";
    case ReadabilityBand::PlainEnglish: return "plain English";
    case ReadabilityBand::FairlyDifficult: return "fairly difficult";
    case ReadabilityBand::HardToRead: return "hard to read";
    case ReadabilityBand::VeryDifficult: return "very difficult to read";
  }
  return "unknown";
}

std::vector<std::string> segment_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  auto emit = [&](std::size_t end) {
    std::size_t b = begin;
    while (b < end && text::is_space(s[b])) ++b;
    std::size_t e = end;
    while (e > b && text::is_space(s[e - 1])) --e;
    if (e > b) out.emplace_back(s.substr(b, e - b));
    begin = end;
  };

  std::size_t token_start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (text::is_space(c)) {
      // Blank line: paragraph break.
      if (c == '\n') {
        std::size_t j = i + 1;
        while (j < s.size() && (s[j] == ' ' || s[j] == '\t' || s[j] == '\r')) ++j;
        if (j < s.size() && s[j] == '\n') {
          emit(i);
        } else {
          // A numbered or bulleted item opens a new sentence.
          std::size_t k = j;
          while (k < s.size() && !text::is_space(s[k])) ++k;
          const auto first = s.substr(j, k - j);
          if (text::is_list_marker(first) || first == "-" || first == "*") emit(i);
        }
      }
      ++i;
      token_start = i;
      continue;
    }
    if (c == '.' || c == '!' || c == '?') {
      const std::size_t end = sentence_end_at(s, i, token_start);
      if (end != std::string_view::npos) {
        emit(end);
        i = end;
        token_start = i;
        continue;
      }
    }
    ++i;
  }
  emit(s.size());
  return out;
}

int count_syllables(std::string_view raw) {
  std::string word;
  for (char c : raw) {
    if (text::is_alpha(c)) word.push_back(text::to_lower(c));
  }
  if (word.empty()) {
    throw Error(ErrorCode::NoAlphabetic, "token '" + std::string(raw) + "' has no letters");
  }

  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    const bool vowel = is_vowel(c);
    if (vowel && !in_group) ++groups;
    in_group = vowel;
  }

  const std::size_t n = word.size();
  auto at = [&](std::size_t from_end) { return from_end < n ? word[n - 1 - from_end] : '\0'; };

  if (ends_with(word, "e") && is_consonant(at(1))) {
    // Silent final e, except consonant + "le" (ta-ble).
    const bool syllabic_le = at(1) == 'l' && is_consonant(at(2));
    if (!syllabic_le) --groups;
  } else if (ends_with(word, "es") && is_consonant(at(2))) {
    const char before = at(2);
    const bool sibilant = before == 's' || before == 'x' || before == 'z' || before == 'c' ||
                          before == 'g' || (before == 'h' && (at(3) == 'c' || at(3) == 's'));
    const bool syllabic_les = before == 'l' && is_consonant(at(3));
    if (!sibilant && !syllabic_les) --groups;
  } else if (ends_with(word, "ed") && is_consonant(at(2)) && at(2) != 't' && at(2) != 'd') {
    --groups;
  }
  return groups < 1 ? 1 : groups;
}

std::string strip_formatting(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  bool line_start = true;
  std::size_t i = 0;
  while (i < input.size()) {
    if (line_start) {
      std::size_t j = i;
      while (j < input.size() && (input[j] == ' ' || input[j] == '\t')) ++j;
      std::size_t k = j;
      while (k < input.size() && !text::is_space(input[k])) ++k;
      std::string_view first = input.substr(j, k - j);
      if (text::is_list_marker(first)) {
        i = k;
        while (i < input.size() && (input[i] == ' ' || input[i] == '\t')) ++i;
      }
      line_start = false;
      continue;
    }
    const char c = input[i++];
    if (c == '*') continue;
    out.push_back(c);
    if (c == '\n') line_start = true;
  }
  return out;
}

TextStatistics compute_statistics(std::string_view input) {
  TextStatistics stats;
  for (const auto& sentence : segment_sentences(input)) {
    std::size_t words_here = 0;
    for (auto token : text::split_whitespace(sentence)) {
      auto core = text::strip_enclosing_punctuation(token);
      if (!text::has_letter(core)) continue;
      ++words_here;
      stats.total_syllables += static_cast<std::size_t>(count_syllables(core));
    }
    stats.total_words += words_here;
    if (words_here > 0) ++stats.total_sentences;
  }
  return stats;
}

double flesch_reading_ease(const TextStatistics& stats, FleschConstant constant) {
  if (stats.total_words == 0 || stats.total_sentences == 0) {
    throw Error(ErrorCode::EmptyText, "reading ease needs at least one word and one sentence");
  }
  const double words = static_cast<double>(stats.total_words);
  const double sentences = static_cast<double>(stats.total_sentences);
  const double syllables = static_cast<double>(stats.total_syllables);
  return flesch_intercept(constant) - 1.015 * (words / sentences) - 84.6 * (syllables / words);
}

ReadabilityBand interpret_score(double score) {
  if (score >= 90.0) return ReadabilityBand::VeryEasy;
  if (score >= 80.0) return ReadabilityBand::Easy;
  if (score >= 70.0) return ReadabilityBand::FairlyEasy;
  if (score >= 60.0) return ReadabilityBand::PlainEnglish;
  if (score >= 50.0) return ReadabilityBand::FairlyDifficult;
  // 30 itself reads as "very difficult" (graduate level).
  if (score > 30.0) return ReadabilityBand::HardToRead;
  return ReadabilityBand::VeryDifficult;
}

ScoredText score_text(std::string text_id, std::string_view input, FleschConstant constant) {
  ScoredText scored;
  scored.text_id = std::move(text_id);
  scored.stats = compute_statistics(strip_formatting(input));
  if (scored.stats.total_words == 0) {
    throw Error(ErrorCode::EmptyText, "text '" + scored.text_id + "' has no words");
  }
  scored.score = flesch_reading_ease(scored.stats, constant);
  scored.band = interpret_score(scored.score);
  return scored;
}

ReadabilityReport score_corpus(const std::vector<std::pair<std::string, std::string>>& texts,
                               FleschConstant constant) {
  ReadabilityReport report;
  for (const auto& [id, body] : texts) report.per_text.push_back(score_text(id, body, constant));
  if (!report.per_text.empty()) {
    const double sum = std::accumulate(
        report.per_text.begin(), report.per_text.end(), 0.0,
        [](double acc, const ScoredText& t) { return acc + t.score; });
    report.mean_score = sum / static_cast<double>(report.per_text.size());
    report.mean_band = interpret_score(report.mean_score);
  }
  return report;
}

}  // namespace opinion
