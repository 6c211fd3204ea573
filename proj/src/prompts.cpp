#include "opinion/prompts.hpp"

#include "opinion/error.hpp"

namespace opinion {

namespace {

constexpr std::string_view kFactsSummary =
    R"prompt(Take this summary of the facts of a case for a U.S. Supreme Court case and simplify it into 1-2 sentences.)prompt";

constexpr std::string_view kSyllabusSummary =
    R"prompt(Highlight the key arguments from the following text from a U.S. Supreme Court opinion syllabus in 2000 words or fewer from the perspective of the majority. Make sure the beginning gives a high-level summary of what the case is about (e.g. basic facts of the case, area of law, etc.).  Write in third person (for example, 'the law requires...'), while also making sure to anonymize the identity of the author of the opinion. Write this summary in a way to persuade a reader to agree with the logic and conclusion. Make sure to maintain a serious tone appropriate for the Supreme Court.  For any legal jargon (such as 'penumbras,' 'incorporation,' 'Miranda rights,' or 'strict scrutiny'), add a * next to the word or phrase, then at the bottom of the summary, define the term.)prompt";

constexpr std::string_view kStyleTransfer =
    R"prompt(Take this summary of a Supreme Court opinion and summarize it in {style}. Number each paragraph at the start like 1), 2), 3), etc. Make sure the first paragraph gives a high-level summary of what the case is about (e.g. basic facts of the case, area of law, etc.).  Write in third person (for example, 'the law requires...'). Write this summary in a way to persuade a reader to agree with the logic and conclusion. For any legal jargon (such as 'penumbras,' 'incorporation,' 'Miranda rights,' or 'strict scrutiny'), add a * next to the word or phrase, then at the bottom of the thread, define the term.)prompt";

}  // namespace

std::string_view to_string(TemplateId id) {
  switch (id) {
    case TemplateId::FactsSummary: return "FactsSummary";
    case TemplateId::SyllabusSummary: return "SyllabusSummary";
    case TemplateId::StyleTransfer: return "StyleTransfer";
  }
  return "Unknown";
}

std::string_view style_key(OutputStyle style) {
  switch (style) {
    case OutputStyle::SeventhGrade: return "7th-grade";
    case OutputStyle::MicroblogThread: return "twitter-thread";
    case OutputStyle::VideoComment: return "youtube-comment";
  }
  return "unknown";
}

std::optional<OutputStyle> parse_style(std::string_view key) {
  for (auto style : kAllStyles) {
    if (style_key(style) == key) return style;
  }
  return std::nullopt;
}

std::string_view style_phrase(OutputStyle style) {
  switch (style) {
    case OutputStyle::SeventhGrade: return "10 short paragraphs or fewer at a 7th-grade reading level";
    case OutputStyle::MicroblogThread: return "a Twitter thread of 10 tweets or fewer";
    case OutputStyle::VideoComment: return "a YouTube comment of 10 short paragraphs or fewer";
  }
  return {};
}

std::string_view catalog_instruction(TemplateId id) {
  switch (id) {
    case TemplateId::FactsSummary: return kFactsSummary;
    case TemplateId::SyllabusSummary: return kSyllabusSummary;
    case TemplateId::StyleTransfer: return kStyleTransfer;
  }
  return {};
}

std::string_view catalog_file_name(TemplateId id) {
  switch (id) {
    case TemplateId::FactsSummary: return "facts_summary.txt";
    case TemplateId::SyllabusSummary: return "syllabus_summary.txt";
    case TemplateId::StyleTransfer: return "style_transfer.txt";
  }
  return {};
}

PromptTemplate::PromptTemplate(TemplateId id, std::optional<OutputStyle> style)
    : id_(id), style_(style) {
  if ((id == TemplateId::StyleTransfer) != style.has_value()) {
    throw Error(ErrorCode::InvalidParameter,
                std::string("template ") + std::string(to_string(id)) +
                    (style ? " does not take a style" : " requires a style"));
  }
}

std::string PromptTemplate::render() const {
  std::string out(instruction_text());
  if (!style_) return out;
  const auto pos = out.find(kStyleSlot);
  out.replace(pos, kStyleSlot.size(), style_phrase(*style_));
  return out;
}

}  // namespace opinion
