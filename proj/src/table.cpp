#include "opinion/table.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace opinion {

namespace {

struct RowSpec {
  std::string_view term;
  std::string_view label;
};

constexpr RowSpec kRows[] = {
    {kTreatedTerm, "Treated"},
    {kNonCollegeTerm, "Non-college"},
    {kInteractionTerm, "Treated x Non-college"},
};

using Grid = std::vector<std::vector<std::string>>;

std::string render_markdown(const Grid& grid) {
  std::ostringstream out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    out << '|';
    for (const auto& cell : grid[r]) out << ' ' << cell << " |";
    out << '\n';
    if (r == 0) {
      out << '|';
      for (std::size_t c = 0; c < grid[r].size(); ++c) out << (c == 0 ? "---|" : "---:|");
      out << '\n';
    }
  }
  return out.str();
}

std::string render_plain(const Grid& grid) {
  std::vector<std::size_t> widths(grid.front().size(), 0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::size_t total = 0;
  for (auto w : widths) total += w + 2;

  std::ostringstream out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      const auto& cell = grid[r][c];
      const std::string pad(widths[c] - cell.size(), ' ');
      out << (c == 0 ? cell + pad : pad + cell);
      if (c + 1 < grid[r].size()) out << "  ";
    }
    out << '\n';
    if (r == 0) out << std::string(total - 2, '-') << '\n';
  }
  return out.str();
}

}  // namespace

std::string significance_stars(double p_value) {
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

std::string format_estimate(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", value);
  return buffer;
}

std::string render_table(const std::vector<RegressionResult>& results,
                         const std::vector<std::string>& column_labels, TableFormat format) {
  Grid grid;
  std::vector<std::string> header{""};
  for (std::size_t i = 0; i < results.size(); ++i) {
    header.push_back(i < column_labels.size() ? column_labels[i]
                                              : std::string(display_label(results[i].outcome)));
  }
  grid.push_back(std::move(header));

  for (const auto& row : kRows) {
    const bool present = std::any_of(results.begin(), results.end(),
                                     [&](const RegressionResult& r) { return r.has_term(row.term); });
    if (!present) continue;
    std::vector<std::string> estimate{std::string(row.label)};
    std::vector<std::string> error{""};
    for (const auto& result : results) {
      if (!result.has_term(row.term)) {
        estimate.emplace_back();
        error.emplace_back();
        continue;
      }
      estimate.push_back(format_estimate(result.coefficient(row.term)) +
                         significance_stars(result.p_value(row.term)));
      error.push_back("(" + format_estimate(result.standard_error(row.term)) + ")");
    }
    grid.push_back(std::move(estimate));
    grid.push_back(std::move(error));
  }

  const bool any_fixed_effects = std::any_of(results.begin(), results.end(), [](const RegressionResult& r) {
    return std::any_of(r.terms.begin(), r.terms.end(),
                       [](const std::string& t) { return t.rfind(kCaseTermPrefix, 0) == 0; });
  });
  if (any_fixed_effects) {
    std::vector<std::string> fe{"Case fixed effects"};
    for (const auto& result : results) {
      const bool has = std::any_of(result.terms.begin(), result.terms.end(),
                                   [](const std::string& t) { return t.rfind(kCaseTermPrefix, 0) == 0; });
      fe.emplace_back(has ? "Yes" : "No");
    }
    grid.push_back(std::move(fe));
  }

  std::vector<std::string> observations{"Observations"};
  for (const auto& result : results) observations.push_back(std::to_string(result.n_obs));
  grid.push_back(std::move(observations));

  std::string body = format == TableFormat::Markdown ? render_markdown(grid) : render_plain(grid);
  body += "\nStandard errors clustered by respondent in parentheses.\n"
          "* p < 0.05, ** p < 0.01, *** p < 0.001\n";
  return body;
}

RegressionResult reported_result(Outcome outcome, double coefficient, double standard_error,
                                 std::size_t n_obs, std::size_t n_clusters) {
  RegressionResult result;
  result.outcome = outcome;
  result.terms = {std::string(kTreatedTerm)};
  result.coefficients = Eigen::VectorXd::Constant(1, coefficient);
  result.covariance = Eigen::MatrixXd::Constant(1, 1, standard_error * standard_error);
  result.n_obs = n_obs;
  result.n_clusters = n_clusters;
  result.n_params = 1;
  return result;
}

nlohmann::json results_to_json(const std::vector<RegressionResult>& results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& result : results) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& term : result.terms) {
      terms[term] = {{"coefficient", result.coefficient(term)},
                     {"se", result.standard_error(term)},
                     {"t", result.t_statistic(term)},
                     {"p", result.p_value(term)}};
    }
    out.push_back({{"outcome", std::string(column_name(result.outcome))},
                   {"terms", std::move(terms)},
                   {"n_obs", result.n_obs},
                   {"n_clusters", result.n_clusters},
                   {"n_params", result.n_params},
                   {"df", result.degrees_of_freedom()}});
  }
  return out;
}

}  // namespace opinion
