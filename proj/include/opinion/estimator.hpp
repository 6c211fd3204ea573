#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "opinion/survey.hpp"

namespace opinion {

inline constexpr std::string_view kTreatedTerm = "treated";
inline constexpr std::string_view kNonCollegeTerm = "non_college";
inline constexpr std::string_view kInteractionTerm = "treated:non_college";
inline constexpr std::string_view kInterceptTerm = "(intercept)";
inline constexpr std::string_view kCaseTermPrefix = "case:";

enum class Covariate { NonCollege };
enum class ClusterVariable { Respondent, Case };

std::string_view to_string(Covariate covariate);
std::optional<Covariate> parse_covariate(std::string_view name);

struct RegressionSpec {
  Outcome outcome = Outcome::DecisionCorrect;
  bool include_case_fixed_effects = true;
  std::optional<Covariate> interaction_with;
  ClusterVariable cluster_by = ClusterVariable::Respondent;
};

struct RegressionResult {
  Outcome outcome = Outcome::DecisionCorrect;
  std::vector<std::string> terms;
  Eigen::VectorXd coefficients;
  /// CR1 cluster-robust covariance, ordered like `terms`.
  Eigen::MatrixXd covariance;
  Eigen::VectorXd residuals;
  std::size_t n_obs = 0;
  std::size_t n_clusters = 0;
  /// K in the small-sample factor; includes parameters absorbed by demeaning.
  std::size_t n_params = 0;

  std::size_t degrees_of_freedom() const { return n_clusters > 0 ? n_clusters - 1 : 0; }
  bool has_term(std::string_view term) const;
  double coefficient(std::string_view term) const;
  double standard_error(std::string_view term) const;
  double t_statistic(std::string_view term) const;
  /// Two-sided, t distribution with G-1 degrees of freedom.
  double p_value(std::string_view term) const;

  std::map<std::string, double> coefficient_map() const;
  std::map<std::string, double> standard_error_map() const;

private:
  std::size_t index_of(std::string_view term) const;
};

/// Two-sided p-value for a t statistic.
double two_sided_p_value(double t, std::size_t degrees_of_freedom);

/// The regressors and grouping used by the dummy-variable estimator.
struct DesignMatrix {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> terms;
  /// Dense cluster index per row, 0..n_clusters-1.
  std::vector<std::size_t> cluster_of_row;
  std::size_t n_clusters = 0;
};

DesignMatrix build_design(const std::vector<SurveyResponse>& data, const RegressionSpec& spec);

/// OLS with a CR1 sandwich. `absorbed_params` adds to K for parameters
/// eliminated before the fit (within-transformed fixed effects).
RegressionResult fit_cluster_robust(const DesignMatrix& design, Outcome outcome,
                                    std::size_t absorbed_params = 0);

/// Outcome on treated plus case dummies (reference: first case_id in
/// lexicographic order) and an intercept. Throws TooFewClusters,
/// RankDeficient or SchemaViolation.
RegressionResult estimate_treatment_effect(const std::vector<SurveyResponse>& data,
                                           const RegressionSpec& spec);

/// As above with non_college and treated:non_college added.
RegressionResult estimate_interaction(const std::vector<SurveyResponse>& data,
                                      RegressionSpec spec);

/// Demeans every variable within case and fits without dummies. Only the
/// non-fixed-effect terms are reported; K counts the absorbed case means so
/// the standard errors equal the dummy-variable ones.
RegressionResult within_transform_estimate(const std::vector<SurveyResponse>& data,
                                           const RegressionSpec& spec);

}  // namespace opinion
