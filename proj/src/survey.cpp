#include "opinion/survey.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "opinion/error.hpp"
#include "opinion/rng.hpp"

namespace opinion {

namespace {

constexpr std::array<std::string_view, 6> kColumns = {
    "heard_of_case", "area_correct", "decision_correct",
    "detail_just_right", "clarity", "share_with_friend"};

constexpr std::array<std::string_view, 6> kLabels = {
    "Heard of Case", "Case Area Correct", "Case Decision Correct",
    "Level of Detail", "Clarity", "Share with Friend"};

std::string format_number(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, std::size_t line, std::string_view column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line) + ": column '" +
                                                std::string(column) + "' is not a number: '" +
                                                field + "'");
  }
  return value;
}

bool parse_flag(const std::string& field, std::size_t line, std::string_view column) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line) + ": column '" +
                                              std::string(column) + "' must be 0 or 1, got '" +
                                              field + "'");
}

}  // namespace

std::string_view column_name(Outcome outcome) { return kColumns[static_cast<std::size_t>(outcome)]; }
std::string_view display_label(Outcome outcome) { return kLabels[static_cast<std::size_t>(outcome)]; }

std::optional<Outcome> parse_outcome(std::string_view column) {
  for (auto outcome : kAllOutcomes) {
    if (column_name(outcome) == column) return outcome;
  }
  return std::nullopt;
}

bool is_binary(Outcome outcome) {
  return outcome != Outcome::Clarity && outcome != Outcome::ShareWithFriend;
}

double SurveyResponse::outcome(Outcome which) const {
  return const_cast<SurveyResponse*>(this)->outcome(which);
}

double& SurveyResponse::outcome(Outcome which) {
  switch (which) {
    case Outcome::HeardOfCase: return heard_of_case;
    case Outcome::AreaCorrect: return area_correct;
    case Outcome::DecisionCorrect: return decision_correct;
    case Outcome::DetailJustRight: return detail_just_right;
    case Outcome::Clarity: return clarity;
    case Outcome::ShareWithFriend: return share_with_friend;
  }
  return heard_of_case;
}

void validate_dataset(const std::vector<SurveyResponse>& data, bool binary_outcomes) {
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& row = data[i];
    if (!seen.emplace(row.respondent_id, row.case_id).second) {
      throw Error(ErrorCode::SchemaViolation, "row " + std::to_string(i) + ": respondent '" +
                                                  row.respondent_id + "' saw case '" +
                                                  row.case_id + "' twice");
    }
    if (!binary_outcomes) continue;
    for (auto outcome : kAllOutcomes) {
      const double value = row.outcome(outcome);
      if (is_binary(outcome) && value != 0.0 && value != 1.0) {
        throw Error(ErrorCode::SchemaViolation, "row " + std::to_string(i) + ": " +
                                                    std::string(column_name(outcome)) +
                                                    " must be 0 or 1");
      }
    }
  }
}

void write_survey_csv(std::ostream& out, const std::vector<SurveyResponse>& data) {
  out << kSurveyCsvHeader << '\n';
  for (const auto& row : data) {
    out << row.respondent_id << ',' << row.case_id << ',' << (row.treated ? 1 : 0);
    for (auto outcome : kAllOutcomes) out << ',' << format_number(row.outcome(outcome));
    out << ',' << (row.non_college ? 1 : 0) << '\n';
  }
}

std::vector<SurveyResponse> read_survey_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 1;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaViolation, "dataset is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSurveyCsvHeader) {
    throw Error(ErrorCode::SchemaViolation,
                "line 1: header must be '" + std::string(kSurveyCsvHeader) + "'");
  }

  std::vector<SurveyResponse> data;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 10) {
      throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_number) +
                                                  ": expected 10 fields, found " +
                                                  std::to_string(fields.size()));
    }
    SurveyResponse row;
    row.respondent_id = fields[0];
    row.case_id = fields[1];
    if (row.respondent_id.empty() || row.case_id.empty()) {
      throw Error(ErrorCode::SchemaViolation,
                  "line " + std::to_string(line_number) + ": empty respondent_id or case_id");
    }
    row.treated = parse_flag(fields[2], line_number, "treated");
    for (std::size_t k = 0; k < kAllOutcomes.size(); ++k) {
      const auto outcome = kAllOutcomes[k];
      row.outcome(outcome) = is_binary(outcome)
                                 ? (parse_flag(fields[3 + k], line_number, column_name(outcome)) ? 1.0 : 0.0)
                                 : parse_number(fields[3 + k], line_number, column_name(outcome));
    }
    row.non_college = parse_flag(fields[9], line_number, "non_college");
    data.push_back(std::move(row));
  }
  validate_dataset(data);
  return data;
}

std::vector<std::string> make_respondent_ids(std::size_t count) {
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "r%03zu", i);
    ids.emplace_back(buffer);
  }
  return ids;
}

AssignmentPlan assign_treatment(const CaseRegistry& registry,
                                const std::vector<std::string>& respondent_ids,
                                std::uint64_t seed) {
  std::array<std::vector<std::string>, 5> pools;
  for (std::size_t t = 0; t < kAllTopics.size(); ++t) {
    if (auto it = registry.by_topic().find(kAllTopics[t]); it != registry.by_topic().end()) {
      pools[t] = it->second;
    }
    if (pools[t].empty()) {
      throw Error(ErrorCode::EmptyTopic,
                  "topic " + std::string(to_string(kAllTopics[t])) + " has no cases");
    }
  }

  Rng rng(seed);
  AssignmentPlan plan;
  plan.respondents.reserve(respondent_ids.size());
  for (const auto& id : respondent_ids) {
    RespondentPlan respondent{id, {}};
    for (std::size_t t = 0; t < pools.size(); ++t) {
      respondent.by_topic[t].case_id = pools[t][rng.below(pools[t].size())];
      respondent.by_topic[t].treated = rng.bernoulli(0.5);
    }
    plan.respondents.push_back(std::move(respondent));
  }
  return plan;
}

std::array<OutcomeDgp, 6> SurveyDgp::default_outcomes() {
  std::array<OutcomeDgp, 6> out{};
  out[0] = {0.15, 0.10, 0.0385, 0.0, 0.0, 0.0, 1.0};
  out[1] = {0.93, 0.04, 0.00192, 0.0, 0.0, 0.0, 1.0};
  out[2] = {0.69, 0.10, 0.107, 0.0, 0.0, 0.0, 1.0};
  out[3] = {0.50, 0.10, 0.202, 0.0, 0.0, 0.0, 1.0};
  // Quality ratings on a 1-5 scale; non-college respondents react more strongly.
  out[4] = {3.2, 0.30, 0.30, 0.26, 0.0, 1.0, 5.0};
  out[5] = {2.9, 0.30, 0.30, 0.26, 0.0, 1.0, 5.0};
  return out;
}

void SurveyDgp::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  for (const auto& o : outcomes) {
    if (!finite(o.base) || !finite(o.case_spread) || !finite(o.treatment_effect) ||
        !finite(o.interaction_effect) || !finite(o.non_college_effect) || !finite(o.scale_min) ||
        !finite(o.scale_max) || o.scale_min > o.scale_max || o.case_spread < 0.0) {
      throw Error(ErrorCode::InvalidParameter, "outcome parameters must be finite and ordered");
    }
  }
  if (!finite(noise_scale) || noise_scale < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "noise scale must be finite and >= 0");
  }
  if (!(respondent_correlation >= 0.0 && respondent_correlation <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "respondent correlation must be in [0, 1]");
  }
  if (!finite(binary_respondent_sd) || binary_respondent_sd < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "binary respondent sd must be finite and >= 0");
  }
  if (!(non_college_share >= 0.0 && non_college_share <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "education share must be in [0, 1]");
  }
}

std::vector<SurveyResponse> simulate_survey(const CaseRegistry& registry,
                                            std::size_t n_respondents, const SurveyDgp& dgp,
                                            std::uint64_t seed) {
  dgp.validate();
  const auto ids = make_respondent_ids(n_respondents);
  const auto plan = assign_treatment(registry, ids, seed);

  // Outcome draws use their own stream so the assignment is unchanged by DGP edits.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);

  std::map<std::string, std::array<double, 6>> case_offsets;
  for (const auto& c : registry.cases()) {
    auto& offsets = case_offsets[c.case_id];
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      offsets[k] = dgp.outcomes[k].case_spread * (rng.uniform() - 0.5);
    }
  }

  // Stratified education: exactly round(share * n) non-college respondents.
  std::vector<std::size_t> order(n_respondents);
  for (std::size_t i = 0; i < n_respondents; ++i) order[i] = i;
  for (std::size_t i = n_respondents; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const auto n_non_college = static_cast<std::size_t>(
      std::llround(dgp.non_college_share * static_cast<double>(n_respondents)));
  std::vector<bool> non_college(n_respondents, false);
  for (std::size_t i = 0; i < n_non_college; ++i) non_college[order[i]] = true;

  const double shared = std::sqrt(dgp.respondent_correlation);
  const double own = std::sqrt(1.0 - dgp.respondent_correlation);
  const bool noisy = dgp.noise_scale > 0.0;

  std::vector<SurveyResponse> data;
  data.reserve(plan.assignment_count());
  for (std::size_t j = 0; j < plan.respondents.size(); ++j) {
    const auto& respondent = plan.respondents[j];
    std::array<double, 6> respondent_shock{};
    for (auto& shock : respondent_shock) shock = rng.normal();

    for (const auto& assignment : respondent.by_topic) {
      SurveyResponse row;
      row.respondent_id = respondent.respondent_id;
      row.case_id = assignment.case_id;
      row.treated = assignment.treated;
      row.non_college = non_college[j];

      const auto& offsets = case_offsets.at(assignment.case_id);
      for (std::size_t k = 0; k < kAllOutcomes.size(); ++k) {
        const auto outcome = kAllOutcomes[k];
        const auto& p = dgp.outcomes[k];
        const double nc = row.non_college ? 1.0 : 0.0;
        const double tr = row.treated ? 1.0 : 0.0;
        const double mean = p.base + offsets[k] + tr * (p.treatment_effect + p.interaction_effect * nc) +
                            nc * p.non_college_effect;
        double value = mean;
        if (is_binary(outcome)) {
          if (noisy) {
            const double prob =
                std::clamp(mean + dgp.binary_respondent_sd * respondent_shock[k], 0.0, 1.0);
            value = rng.uniform() < prob ? 1.0 : 0.0;
          } else if (dgp.discretize) {
            value = std::clamp(mean, 0.0, 1.0) >= 0.5 ? 1.0 : 0.0;
          }
        } else {
          if (noisy) {
            value += dgp.noise_scale * (shared * respondent_shock[k] + own * rng.normal());
          }
          if (dgp.discretize) value = std::clamp(std::round(value), p.scale_min, p.scale_max);
        }
        row.outcome(outcome) = value;
      }
      data.push_back(std::move(row));
    }
  }
  return data;
}

}  // namespace opinion
