#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

/// Prose-like text with abbreviations and irregular whitespace.
inline std::string random_text(std::mt19937_64& gen, std::size_t max_words = 800) {
  static const std::vector<std::string> vocab = {
      "the", "court", "held", "that", "a", "state", "law", "violated", "Amendment",
      "U.S.", "v.", "No.", "petitioner", "respondent", "argued", "12", "2/10", "e.g.",
      "constitutional", "question", "Justice", "opinion", "affirmed", "reversed", "(1)",
      "\"quoted\"", "rights", "Dr.", "Mr.", "search", "warrant", "phone", "data"};
  static const std::vector<std::string> ends = {".", "?", "!", ".\"", ""};
  static const std::vector<std::string> gaps = {" ", " ", " ", "  ", "\n", "\n\n", "\t"};

  std::uniform_int_distribution<std::size_t> words(0, max_words);
  std::uniform_int_distribution<std::size_t> sentence_len(1, 60);
  std::uniform_int_distribution<std::size_t> pick_vocab(0, vocab.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_end(0, ends.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_gap(0, gaps.size() - 1);
  std::uniform_int_distribution<int> coin(0, 9);

  const std::size_t total = words(gen);
  std::ostringstream out;
  if (coin(gen) == 0) out << "  ";
  std::size_t remaining_in_sentence = sentence_len(gen);
  for (std::size_t i = 0; i < total; ++i) {
    if (i > 0) out << gaps[pick_gap(gen)];
    out << vocab[pick_vocab(gen)];
    if (--remaining_in_sentence == 0) {
      out << ends[pick_end(gen)];
      remaining_in_sentence = coin(gen) == 0 ? 200 : sentence_len(gen);
    }
  }
  if (coin(gen) == 0) out << "\n";
  return out.str();
}

inline std::vector<std::string> words_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace testing
