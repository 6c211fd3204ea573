#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small tokenization helpers shared by the chunker and the readability scorer.
namespace opinion::text {

std::vector<std::string_view> split_whitespace(std::string_view text);

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

bool has_letter(std::string_view token);

/// Trims leading and trailing characters that are neither letters nor digits.
std::string_view strip_enclosing_punctuation(std::string_view token);

/// True for tokens like "v.", "U.S.", "e.g." that end in a period without
/// ending a sentence. Leading opening quotes/brackets are ignored.
bool is_abbreviation(std::string_view token);

/// True for list markers such as "1." or "12)" or "2/10".
bool is_list_marker(std::string_view token);

/// Whitespace-delimited token closes a sentence: terminal punctuation,
/// optionally followed by closing quotes/brackets, and not an abbreviation
/// or list marker.
bool ends_sentence(std::string_view token);

}  // namespace opinion::text
