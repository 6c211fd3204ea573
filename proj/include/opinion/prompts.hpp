#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace opinion {

enum class TemplateId { FactsSummary, SyllabusSummary, StyleTransfer };

enum class OutputStyle { SeventhGrade, MicroblogThread, VideoComment };

inline constexpr std::array<OutputStyle, 3> kAllStyles = {
    OutputStyle::SeventhGrade, OutputStyle::MicroblogThread, OutputStyle::VideoComment};

std::string_view to_string(TemplateId id);

/// Stable CLI/JSON key: "7th-grade", "twitter-thread", "youtube-comment".
std::string_view style_key(OutputStyle style);
std::optional<OutputStyle> parse_style(std::string_view key);

/// Text substituted for `{style}` in the style-transfer instruction.
std::string_view style_phrase(OutputStyle style);

inline constexpr std::string_view kStyleSlot = "{style}";

/// Catalog text, byte-identical to data/prompts/<id>.txt. The style-transfer
/// entry still contains the `{style}` slot.
std::string_view catalog_instruction(TemplateId id);

/// File name of the catalog entry under data/prompts/.
std::string_view catalog_file_name(TemplateId id);

class PromptTemplate {
public:
  /// Throws InvalidParameter unless a style is given iff id is StyleTransfer.
  PromptTemplate(TemplateId id, std::optional<OutputStyle> style = std::nullopt);

  TemplateId id() const noexcept { return id_; }
  std::optional<OutputStyle> style() const noexcept { return style_; }
  std::string_view instruction_text() const noexcept { return catalog_instruction(id_); }

  /// Instruction with the style slot filled in.
  std::string render() const;

private:
  TemplateId id_;
  std::optional<OutputStyle> style_;
};

}  // namespace opinion
