#include <doctest.h>

#include "opinion/error.hpp"
#include "opinion/prompts.hpp"
#include "support/paths.hpp"

using namespace opinion;

TEST_SUITE("prompts") {
  TEST_CASE("compiled instructions match the data files byte for byte") {
    for (auto id : {TemplateId::FactsSummary, TemplateId::SyllabusSummary, TemplateId::StyleTransfer}) {
      const auto file = testing::source_dir() / "data" / "prompts" / std::string(catalog_file_name(id));
      CAPTURE(file.string());
      CHECK(testing::slurp(file) == std::string(catalog_instruction(id)));
    }
  }

  TEST_CASE("style slot appears once and only in the style template") {
    const std::string style(catalog_instruction(TemplateId::StyleTransfer));
    CHECK(style.find(kStyleSlot) != std::string::npos);
    CHECK(style.find(kStyleSlot, style.find(kStyleSlot) + 1) == std::string::npos);
    CHECK(std::string(catalog_instruction(TemplateId::FactsSummary)).find(kStyleSlot) == std::string::npos);
  }

  TEST_CASE("render fills the style") {
    const auto text = PromptTemplate(TemplateId::StyleTransfer, OutputStyle::SeventhGrade).render();
    CHECK(text.find(kStyleSlot) == std::string::npos);
    CHECK(text.find("7th-grade reading level") != std::string::npos);
    const auto tweet = PromptTemplate(TemplateId::StyleTransfer, OutputStyle::MicroblogThread).render();
    CHECK(tweet.find("Twitter thread") != std::string::npos);
    CHECK(PromptTemplate(TemplateId::FactsSummary).render() ==
          std::string(catalog_instruction(TemplateId::FactsSummary)));
  }

  TEST_CASE("style presence must match the template") {
    CHECK_THROWS_AS(PromptTemplate(TemplateId::StyleTransfer), Error);
    CHECK_THROWS_AS(PromptTemplate(TemplateId::FactsSummary, OutputStyle::VideoComment), Error);
  }

  TEST_CASE("style keys round-trip") {
    for (auto style : kAllStyles) CHECK(parse_style(style_key(style)) == style);
    CHECK(parse_style("7th-grade") == OutputStyle::SeventhGrade);
    CHECK_FALSE(parse_style("haiku").has_value());
  }
}
