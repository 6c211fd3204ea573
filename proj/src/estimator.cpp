#include "opinion/estimator.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <boost/math/distributions/students_t.hpp>

#include "opinion/error.hpp"

namespace opinion {

std::string_view to_string(Covariate covariate) {
  switch (covariate) {
    case Covariate::NonCollege: return kNonCollegeTerm;
  }
  return "unknown";
}

std::optional<Covariate> parse_covariate(std::string_view name) {
  if (name == kNonCollegeTerm) return Covariate::NonCollege;
  return std::nullopt;
}

std::size_t RegressionResult::index_of(std::string_view term) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] == term) return i;
  }
  throw Error(ErrorCode::InvalidParameter, "no term '" + std::string(term) + "' in result");
}

bool RegressionResult::has_term(std::string_view term) const {
  for (const auto& t : terms) {
    if (t == term) return true;
  }
  return false;
}

double RegressionResult::coefficient(std::string_view term) const {
  return coefficients(static_cast<Eigen::Index>(index_of(term)));
}

double RegressionResult::standard_error(std::string_view term) const {
  const auto i = static_cast<Eigen::Index>(index_of(term));
  return std::sqrt(std::max(covariance(i, i), 0.0));
}

double RegressionResult::t_statistic(std::string_view term) const {
  const double se = standard_error(term);
  const double b = coefficient(term);
  if (se == 0.0) {
    return b == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b);
  }
  return b / se;
}

double RegressionResult::p_value(std::string_view term) const {
  return two_sided_p_value(t_statistic(term), degrees_of_freedom());
}

std::map<std::string, double> RegressionResult::coefficient_map() const {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < terms.size(); ++i) out[terms[i]] = coefficients(static_cast<Eigen::Index>(i));
  return out;
}

std::map<std::string, double> RegressionResult::standard_error_map() const {
  std::map<std::string, double> out;
  for (const auto& term : terms) out[term] = standard_error(term);
  return out;
}

double two_sided_p_value(double t, std::size_t degrees_of_freedom) {
  if (degrees_of_freedom == 0) {
    throw Error(ErrorCode::TooFewClusters, "t test needs at least one degree of freedom");
  }
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

namespace {

std::map<std::string, std::size_t> dense_index(const std::vector<SurveyResponse>& data,
                                               ClusterVariable by) {
  std::map<std::string, std::size_t> index;
  for (const auto& row : data) index.emplace(by == ClusterVariable::Respondent ? row.respondent_id : row.case_id, 0);
  std::size_t next = 0;
  for (auto& [key, value] : index) value = next++;
  return index;
}

void check_inputs(const std::vector<SurveyResponse>& data, const RegressionSpec& spec) {
  validate_dataset(data, false);
  const auto clusters = dense_index(data, spec.cluster_by);
  if (clusters.size() < 2) {
    throw Error(ErrorCode::TooFewClusters, "cluster-robust inference needs at least 2 clusters, found " +
                                               std::to_string(clusters.size()));
  }
}

/// Non-fixed-effect regressors for one row, in term order.
std::vector<double> slope_values(const SurveyResponse& row, const RegressionSpec& spec) {
  const double treated = row.treated ? 1.0 : 0.0;
  if (!spec.interaction_with) return {treated};
  const double nc = row.non_college ? 1.0 : 0.0;
  return {treated, nc, treated * nc};
}

std::vector<std::string> slope_terms(const RegressionSpec& spec) {
  if (!spec.interaction_with) return {std::string(kTreatedTerm)};
  return {std::string(kTreatedTerm), std::string(kNonCollegeTerm), std::string(kInteractionTerm)};
}

}  // namespace

DesignMatrix build_design(const std::vector<SurveyResponse>& data, const RegressionSpec& spec) {
  check_inputs(data, spec);
  const auto clusters = dense_index(data, spec.cluster_by);
  const auto cases = dense_index(data, ClusterVariable::Case);

  DesignMatrix design;
  design.terms = slope_terms(spec);
  const std::size_t n_slopes = design.terms.size();
  design.terms.emplace_back(kInterceptTerm);
  if (spec.include_case_fixed_effects) {
    for (auto it = std::next(cases.begin()); it != cases.end(); ++it) {
      design.terms.push_back(std::string(kCaseTermPrefix) + it->first);
    }
  }

  const auto n = static_cast<Eigen::Index>(data.size());
  const auto p = static_cast<Eigen::Index>(design.terms.size());
  design.x = Eigen::MatrixXd::Zero(n, p);
  design.y.resize(n);
  design.cluster_of_row.resize(data.size());
  design.n_clusters = clusters.size();

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = data[static_cast<std::size_t>(i)];
    const auto slopes = slope_values(row, spec);
    for (std::size_t k = 0; k < n_slopes; ++k) design.x(i, static_cast<Eigen::Index>(k)) = slopes[k];
    design.x(i, static_cast<Eigen::Index>(n_slopes)) = 1.0;
    if (spec.include_case_fixed_effects) {
      const auto c = cases.at(row.case_id);
      if (c > 0) design.x(i, static_cast<Eigen::Index>(n_slopes + c)) = 1.0;
    }
    design.y(i) = row.outcome(spec.outcome);
    design.cluster_of_row[static_cast<std::size_t>(i)] =
        clusters.at(spec.cluster_by == ClusterVariable::Respondent ? row.respondent_id : row.case_id);
  }
  return design;
}

RegressionResult fit_cluster_robust(const DesignMatrix& design, Outcome outcome,
                                    std::size_t absorbed_params) {
  const auto n = design.x.rows();
  const auto p = design.x.cols();
  if (design.n_clusters < 2) {
    throw Error(ErrorCode::TooFewClusters, "cluster-robust inference needs at least 2 clusters");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x);
  if (qr.rank() < p) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < p; ++j) {
      if (!names.empty()) names += ", ";
      names += design.terms[static_cast<std::size_t>(perm(j))];
    }
    throw Error(ErrorCode::RankDeficient, "design matrix has rank " + std::to_string(qr.rank()) +
                                              " of " + std::to_string(p) +
                                              "; collinear columns: " + names);
  }
  const auto k = static_cast<std::size_t>(p) + absorbed_params;
  if (static_cast<std::size_t>(n) <= k) {
    throw Error(ErrorCode::RankDeficient, std::to_string(n) + " observations cannot identify " +
                                              std::to_string(k) + " parameters");
  }

  RegressionResult result;
  result.outcome = outcome;
  result.terms = design.terms;
  result.coefficients = qr.solve(design.y);
  result.residuals = design.y - design.x * result.coefficients;
  result.n_obs = static_cast<std::size_t>(n);
  result.n_clusters = design.n_clusters;
  result.n_params = k;

  // (X'X)^-1 = P R^-1 R^-T P' from X P = Q R.
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd permuted = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * permuted * perm.transpose();

  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(design.n_clusters), p);
  for (Eigen::Index i = 0; i < n; ++i) {
    scores.row(static_cast<Eigen::Index>(design.cluster_of_row[static_cast<std::size_t>(i)])) +=
        design.x.row(i) * result.residuals(i);
  }
  const Eigen::MatrixXd meat = scores.transpose() * scores;

  const double g = static_cast<double>(design.n_clusters);
  const double factor = g / (g - 1.0) * (static_cast<double>(n) - 1.0) /
                        (static_cast<double>(n) - static_cast<double>(k));
  result.covariance = factor * (bread * meat * bread);
  return result;
}

RegressionResult estimate_treatment_effect(const std::vector<SurveyResponse>& data,
                                           const RegressionSpec& spec) {
  return fit_cluster_robust(build_design(data, spec), spec.outcome);
}

RegressionResult estimate_interaction(const std::vector<SurveyResponse>& data,
                                      RegressionSpec spec) {
  if (!spec.interaction_with) spec.interaction_with = Covariate::NonCollege;
  return estimate_treatment_effect(data, spec);
}

RegressionResult within_transform_estimate(const std::vector<SurveyResponse>& data,
                                           const RegressionSpec& spec) {
  check_inputs(data, spec);
  const auto clusters = dense_index(data, spec.cluster_by);
  const auto cases = dense_index(data, ClusterVariable::Case);

  DesignMatrix design;
  design.terms = slope_terms(spec);
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto p = static_cast<Eigen::Index>(design.terms.size());
  design.x.resize(n, p);
  design.y.resize(n);
  design.cluster_of_row.resize(data.size());
  design.n_clusters = clusters.size();

  const auto n_cases = static_cast<Eigen::Index>(cases.size());
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n_cases, p + 1);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_cases);
  std::vector<Eigen::Index> case_of_row(data.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = data[static_cast<std::size_t>(i)];
    const auto slopes = slope_values(row, spec);
    for (Eigen::Index k = 0; k < p; ++k) design.x(i, k) = slopes[static_cast<std::size_t>(k)];
    design.y(i) = row.outcome(spec.outcome);
    const auto c = static_cast<Eigen::Index>(cases.at(row.case_id));
    case_of_row[static_cast<std::size_t>(i)] = c;
    sums.row(c).head(p) += design.x.row(i);
    sums(c, p) += design.y(i);
    counts(c) += 1.0;
    design.cluster_of_row[static_cast<std::size_t>(i)] =
        clusters.at(spec.cluster_by == ClusterVariable::Respondent ? row.respondent_id : row.case_id);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = case_of_row[static_cast<std::size_t>(i)];
    design.x.row(i) -= sums.row(c).head(p) / counts(c);
    design.y(i) -= sums(c, p) / counts(c);
  }
  return fit_cluster_robust(design, spec.outcome, static_cast<std::size_t>(n_cases));
}

}  // namespace opinion
