#include "opinion/text.hpp"

#include <algorithm>
#include <array>

namespace opinion::text {

namespace {

constexpr std::array<std::string_view, 18> kAbbreviations = {
    "v.", "vs.", "u.s.", "mr.", "mrs.", "ms.", "dr.", "no.", "e.g.",
    "i.e.", "etc.", "inc.", "corp.", "co.", "jr.", "st.", "pa.", "u.s.c."};

bool is_closing(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }
bool is_opening(char c) { return c == '"' || c == '\'' || c == '(' || c == '[' || c == '{'; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

bool has_letter(std::string_view token) {
  return std::any_of(token.begin(), token.end(), is_alpha);
}

std::string_view strip_enclosing_punctuation(std::string_view token) {
  auto keep = [](char c) {
    return is_alpha(c) || is_digit(c) || static_cast<unsigned char>(c) >= 0x80;
  };
  while (!token.empty() && !keep(token.front())) token.remove_prefix(1);
  while (!token.empty() && !keep(token.back())) token.remove_suffix(1);
  return token;
}

bool is_abbreviation(std::string_view token) {
  while (!token.empty() && is_opening(token.front())) token.remove_prefix(1);
  if (token.empty() || token.back() != '.') return false;
  std::string lowered(token);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), to_lower);
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), lowered) != kAbbreviations.end()) {
    return true;
  }
  // Single-letter initials ("J.") and dotted acronyms ("N.L.R.B.").
  if (lowered.size() == 2 && is_alpha(lowered[0])) return true;
  bool dotted = lowered.size() >= 4;
  for (std::size_t i = 0; dotted && i < lowered.size(); i += 2) {
    dotted = is_alpha(lowered[i]) && i + 1 < lowered.size() && lowered[i + 1] == '.';
  }
  return dotted;
}

bool is_list_marker(std::string_view token) {
  if (token.size() < 2) return false;
  const char last = token.back();
  std::string_view body = token;
  if (last == '.' || last == ')') body.remove_suffix(1);
  if (body.empty()) return false;
  bool seen_digit = false;
  bool seen_slash = false;
  for (char c : body) {
    if (is_digit(c)) {
      seen_digit = true;
    } else if (c == '/' && seen_digit && !seen_slash) {
      seen_slash = true;
    } else {
      return false;
    }
  }
  return seen_digit && (last == '.' || last == ')' || seen_slash);
}

bool ends_sentence(std::string_view token) {
  std::string_view core = token;
  while (!core.empty() && is_closing(core.back()) && core.size() > 1 &&
         !is_terminal(core.back())) {
    core.remove_suffix(1);
  }
  if (core.empty() || !is_terminal(core.back())) return false;
  if (core.back() == '.' && (is_abbreviation(core) || is_list_marker(core))) return false;
  return true;
}

}  // namespace opinion::text
