#include "opinion/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "opinion/error.hpp"

namespace opinion {

namespace {

constexpr std::array<std::string_view, 5> kTopicNames = {
    "AffirmativeAction", "Abortion", "SearchAndSeizure", "Labor", "LgbtRights"};

void require(bool ok, const std::string& where, const std::string& what) {
  if (!ok) throw Error(ErrorCode::SchemaViolation, where + ": " + what);
}

std::string string_field(const nlohmann::json& object, const char* key,
                         const std::string& where) {
  require(object.contains(key), where, std::string("missing field '") + key + "'");
  const auto& value = object.at(key);
  require(value.is_string(), where, std::string("field '") + key + "' must be a string");
  return value.get<std::string>();
}

void validate_case(const OpinionCase& c, const std::string& where) {
  require(!c.case_id.empty(), where, "field 'case_id' must be nonempty");
  require(!c.facts_text.empty(), where, "field 'facts_text' must be nonempty");
  require(!c.syllabus_text.empty(), where, "field 'syllabus_text' must be nonempty");
  require(c.year >= 1900 && c.year <= 2100, where, "field 'year' must be in [1900, 2100]");
}

OpinionCase parse_case(const nlohmann::json& object, std::size_t index) {
  std::string where = "cases[" + std::to_string(index) + "]";
  require(object.is_object(), where, "must be an object");
  if (object.contains("case_id") && object.at("case_id").is_string()) {
    where += " (" + object.at("case_id").get<std::string>() + ")";
  }

  OpinionCase c;
  c.case_id = string_field(object, "case_id", where);
  c.name = string_field(object, "name", where);

  require(object.contains("year"), where, "missing field 'year'");
  require(object.at("year").is_number_integer(), where, "field 'year' must be an integer");
  c.year = object.at("year").get<int>();

  const auto topic = parse_topic(string_field(object, "topic", where));
  require(topic.has_value(), where, "field 'topic' is not one of the five topic areas");
  c.topic = *topic;

  c.facts_text = string_field(object, "facts_text", where);
  c.syllabus_text = string_field(object, "syllabus_text", where);

  const auto direction = parse_direction(string_field(object, "decision_direction", where));
  require(direction.has_value(), where,
          "field 'decision_direction' must be \"favors\" or \"opposes\"");
  c.decision_direction = *direction;
  c.direction_description = string_field(object, "direction_description", where);

  validate_case(c, where);
  return c;
}

}  // namespace

std::string_view to_string(TopicArea topic) {
  return kTopicNames[static_cast<std::size_t>(topic)];
}

std::optional<TopicArea> parse_topic(std::string_view text) {
  for (std::size_t i = 0; i < kTopicNames.size(); ++i) {
    if (kTopicNames[i] == text) return kAllTopics[i];
  }
  return std::nullopt;
}

std::string_view to_string(DecisionDirection direction) {
  return direction == DecisionDirection::Favors ? "favors" : "opposes";
}

std::optional<DecisionDirection> parse_direction(std::string_view text) {
  if (text == "favors") return DecisionDirection::Favors;
  if (text == "opposes") return DecisionDirection::Opposes;
  return std::nullopt;
}

CaseRegistry::CaseRegistry(std::vector<OpinionCase> cases) : cases_(std::move(cases)) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    validate_case(cases_[i], "cases[" + std::to_string(i) + "]");
    if (!seen.insert(cases_[i].case_id).second) {
      throw Error(ErrorCode::DuplicateCaseId, "case_id '" + cases_[i].case_id +
                                                  "' appears more than once");
    }
  }
  std::sort(cases_.begin(), cases_.end(),
            [](const OpinionCase& a, const OpinionCase& b) { return a.case_id < b.case_id; });
  for (const auto& c : cases_) by_topic_[c.topic].push_back(c.case_id);
}

const OpinionCase* CaseRegistry::find(std::string_view case_id) const {
  auto it = std::lower_bound(
      cases_.begin(), cases_.end(), case_id,
      [](const OpinionCase& c, std::string_view id) { return c.case_id < id; });
  if (it == cases_.end() || it->case_id != case_id) return nullptr;
  return &*it;
}

CaseRegistry parse_registry(const nlohmann::json& document) {
  require(document.is_object(), "registry", "top level must be an object");
  require(document.contains("cases"), "registry", "missing field 'cases'");
  const auto& list = document.at("cases");
  require(list.is_array(), "registry", "field 'cases' must be an array");

  std::vector<OpinionCase> cases;
  cases.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) cases.push_back(parse_case(list[i], i));
  return CaseRegistry(std::move(cases));
}

CaseRegistry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open registry '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();

  nlohmann::json document;
  try {
    document = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation,
                "registry '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_registry(document);
}

nlohmann::json to_json(const CaseRegistry& registry) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : registry.cases()) {
    list.push_back({
        {"case_id", c.case_id},
        {"name", c.name},
        {"year", c.year},
        {"topic", std::string(to_string(c.topic))},
        {"facts_text", c.facts_text},
        {"syllabus_text", c.syllabus_text},
        {"decision_direction", std::string(to_string(c.decision_direction))},
        {"direction_description", c.direction_description},
    });
  }
  return {{"cases", list}};
}

std::string serialize_registry(const CaseRegistry& registry) {
  return to_json(registry).dump(2) + "\n";
}

std::vector<OpinionCase> cases_for_topic(const CaseRegistry& registry, TopicArea topic) {
  std::vector<OpinionCase> out;
  for (const auto& c : registry.cases()) {
    if (c.topic == topic) out.push_back(c);
  }
  return out;
}

}  // namespace opinion
