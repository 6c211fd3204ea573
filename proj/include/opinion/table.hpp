#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "opinion/estimator.hpp"

namespace opinion {

enum class TableFormat { Markdown, PlainText };

/// "***" below 0.001, "**" below 0.01, "*" below 0.05, otherwise empty.
std::string significance_stars(double p_value);

/// Three significant digits, "%.3g" style.
std::string format_estimate(double value);

/// One column per result; each cell shows the coefficient with stars and the
/// standard error in parentheses on the next line. Terms other than the
/// treatment appear only when some result carries them; case dummies are
/// summarized by a single fixed-effects row.
std::string render_table(const std::vector<RegressionResult>& results,
                         const std::vector<std::string>& column_labels,
                         TableFormat format = TableFormat::Markdown);

/// Builds a result holding only a reported treatment coefficient and its
/// standard error, for rendering estimates produced elsewhere.
RegressionResult reported_result(Outcome outcome, double coefficient, double standard_error,
                                 std::size_t n_obs, std::size_t n_clusters);

/// Full-precision JSON with per-term estimates and the sample counts.
nlohmann::json results_to_json(const std::vector<RegressionResult>& results);

}  // namespace opinion
