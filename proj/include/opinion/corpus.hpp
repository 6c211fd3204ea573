#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace opinion {

enum class TopicArea { AffirmativeAction, Abortion, SearchAndSeizure, Labor, LgbtRights };

inline constexpr std::array<TopicArea, 5> kAllTopics = {
    TopicArea::AffirmativeAction, TopicArea::Abortion, TopicArea::SearchAndSeizure,
    TopicArea::Labor, TopicArea::LgbtRights};

std::string_view to_string(TopicArea topic);
std::optional<TopicArea> parse_topic(std::string_view text);

enum class DecisionDirection { Favors, Opposes };

std::string_view to_string(DecisionDirection direction);
std::optional<DecisionDirection> parse_direction(std::string_view text);

struct OpinionCase {
  std::string case_id;
  std::string name;
  int year = 0;
  TopicArea topic = TopicArea::AffirmativeAction;
  std::string facts_text;
  std::string syllabus_text;
  DecisionDirection decision_direction = DecisionDirection::Favors;
  std::string direction_description;

  bool operator==(const OpinionCase&) const = default;
};

/// Immutable, sorted-by-id collection of cases with a per-topic index.
class CaseRegistry {
public:
  CaseRegistry() = default;
  /// Validates every case and throws DuplicateCaseId / SchemaViolation.
  explicit CaseRegistry(std::vector<OpinionCase> cases);

  const std::vector<OpinionCase>& cases() const noexcept { return cases_; }
  const std::map<TopicArea, std::vector<std::string>>& by_topic() const noexcept {
    return by_topic_;
  }
  std::size_t size() const noexcept { return cases_.size(); }
  bool empty() const noexcept { return cases_.empty(); }

  const OpinionCase* find(std::string_view case_id) const;

private:
  std::vector<OpinionCase> cases_;
  std::map<TopicArea, std::vector<std::string>> by_topic_;
};

CaseRegistry load_registry(const std::filesystem::path& path);
CaseRegistry parse_registry(const nlohmann::json& document);
nlohmann::json to_json(const CaseRegistry& registry);
std::string serialize_registry(const CaseRegistry& registry);

std::vector<OpinionCase> cases_for_topic(const CaseRegistry& registry, TopicArea topic);

}  // namespace opinion
