#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "opinion/corpus.hpp"

namespace opinion {

enum class Outcome {
  HeardOfCase,
  AreaCorrect,
  DecisionCorrect,
  DetailJustRight,
  Clarity,
  ShareWithFriend,
};

inline constexpr std::array<Outcome, 6> kAllOutcomes = {
    Outcome::HeardOfCase,     Outcome::AreaCorrect, Outcome::DecisionCorrect,
    Outcome::DetailJustRight, Outcome::Clarity,     Outcome::ShareWithFriend};

/// CSV column name, e.g. "decision_correct".
std::string_view column_name(Outcome outcome);
/// Table header, e.g. "Case Decision Correct".
std::string_view display_label(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view column);
bool is_binary(Outcome outcome);

/// One respondent x case observation. Binary outcomes are stored as 0.0/1.0;
/// clarity and share_with_friend hold their numeric scale codes.
struct SurveyResponse {
  std::string respondent_id;
  std::string case_id;
  bool treated = false;
  double heard_of_case = 0.0;
  double area_correct = 0.0;
  double decision_correct = 0.0;
  double detail_just_right = 0.0;
  double clarity = 0.0;
  double share_with_friend = 0.0;
  bool non_college = false;

  double outcome(Outcome which) const;
  double& outcome(Outcome which);

  bool operator==(const SurveyResponse&) const = default;
};

/// Throws SchemaViolation on duplicate (respondent, case) pairs or, when
/// `binary_outcomes` is set, on binary outcomes outside {0, 1}.
void validate_dataset(const std::vector<SurveyResponse>& data, bool binary_outcomes = true);

inline constexpr std::string_view kSurveyCsvHeader =
    "respondent_id,case_id,treated,heard_of_case,area_correct,decision_correct,"
    "detail_just_right,clarity,share_with_friend,non_college";

void write_survey_csv(std::ostream& out, const std::vector<SurveyResponse>& data);
/// Throws SchemaViolation naming the 1-based line of the first bad row.
std::vector<SurveyResponse> read_survey_csv(std::istream& in);

struct Assignment {
  std::string case_id;
  bool treated = false;

  bool operator==(const Assignment&) const = default;
};

struct RespondentPlan {
  std::string respondent_id;
  /// Indexed like kAllTopics.
  std::array<Assignment, 5> by_topic;

  bool operator==(const RespondentPlan&) const = default;
};

struct AssignmentPlan {
  std::vector<RespondentPlan> respondents;

  std::size_t assignment_count() const { return respondents.size() * 5; }
  bool operator==(const AssignmentPlan&) const = default;
};

/// One uniformly drawn case per topic per respondent, each treated with
/// probability 1/2 independently. Throws EmptyTopic if a topic has no cases.
AssignmentPlan assign_treatment(const CaseRegistry& registry,
                                const std::vector<std::string>& respondent_ids,
                                std::uint64_t seed);

/// "r001", "r002", ... (at least three digits).
std::vector<std::string> make_respondent_ids(std::size_t count);

struct OutcomeDgp {
  double base = 0.5;
  double case_spread = 0.1;        // case intercepts spread uniformly over +-spread/2
  double treatment_effect = 0.0;   // effect for college-educated respondents
  double interaction_effect = 0.0; // extra effect for non-college respondents
  double non_college_effect = 0.0; // level shift for non-college respondents
  double scale_min = 0.0;          // ordinal outcomes only
  double scale_max = 1.0;
};

/// Defaults describe a 50/50 education split with college effects of
/// 0.0385, 0.00192, 0.107 and 0.202 on the binary outcomes and 0.3 (plus 0.26
/// for non-college respondents) on the two 1-5 ratings.
struct SurveyDgp {
  std::array<OutcomeDgp, 6> outcomes = default_outcomes();
  double noise_scale = 1.0;              // sd of the latent error on ordinal outcomes
  double respondent_correlation = 0.3;   // share of ordinal error variance shared by a respondent
  double binary_respondent_sd = 0.05;    // respondent shift on the probability scale
  double non_college_share = 0.5;
  bool discretize = true;

  const OutcomeDgp& at(Outcome outcome) const { return outcomes[static_cast<std::size_t>(outcome)]; }
  OutcomeDgp& at(Outcome outcome) { return outcomes[static_cast<std::size_t>(outcome)]; }

  /// Average treatment effect across the sample's education mix.
  double pooled_effect(Outcome outcome, double realized_non_college_share) const {
    return at(outcome).treatment_effect + at(outcome).interaction_effect * realized_non_college_share;
  }

  /// Throws InvalidParameter on non-finite values or out-of-range shares.
  void validate() const;

  static std::array<OutcomeDgp, 6> default_outcomes();
};

/// Full panel: every respondent sees one case per topic. With noise_scale 0
/// outcomes equal the mean structure (rounded when discretize is set);
/// otherwise binaries are Bernoulli draws from the clamped linear
/// probability and ordinal scores are mean plus noise.
std::vector<SurveyResponse> simulate_survey(const CaseRegistry& registry,
                                            std::size_t n_respondents, const SurveyDgp& dgp,
                                            std::uint64_t seed);

}  // namespace opinion
