#include <doctest.h>

#include "opinion/table.hpp"

using namespace opinion;

TEST_SUITE("table") {
  TEST_CASE("star thresholds") {
    CHECK(significance_stars(0.2) == "");
    CHECK(significance_stars(0.05) == "");
    CHECK(significance_stars(0.049) == "*");
    CHECK(significance_stars(0.01) == "*");
    CHECK(significance_stars(0.0099) == "**");
    CHECK(significance_stars(0.001) == "**");
    CHECK(significance_stars(0.000999) == "***");
  }

  TEST_CASE("three significant digits") {
    CHECK(format_estimate(0.0385) == "0.0385");
    CHECK(format_estimate(0.00192) == "0.00192");
    CHECK(format_estimate(0.10712) == "0.107");
    CHECK(format_estimate(-0.4318) == "-0.432");
  }

  TEST_CASE("cells for reported estimates") {
    const auto r = reported_result(Outcome::DecisionCorrect, 0.107, 0.0354, 560, 120);
    CHECK(r.t_statistic("treated") == doctest::Approx(3.0226).epsilon(1e-4));
    CHECK(r.p_value("treated") == doctest::Approx(0.003).epsilon(0.1));
    const auto table = render_table({r}, {"Case Decision Correct"});
    CHECK(table.find("0.107**") != std::string::npos);
    CHECK(table.find("0.107***") == std::string::npos);
    CHECK(table.find("(0.0354)") != std::string::npos);
    CHECK(table.find("| Observations | 560 |") != std::string::npos);
  }

  TEST_CASE("one column per result, interaction rows only when present") {
    std::vector<RegressionResult> results = {
        reported_result(Outcome::HeardOfCase, 0.0385, 0.0308, 560, 120),
        reported_result(Outcome::Clarity, 0.431, 0.0752, 560, 120)};
    const auto plain = render_table(results, {}, TableFormat::PlainText);
    CHECK(plain.find("Heard of Case") != std::string::npos);
    CHECK(plain.find("0.0385 ") != std::string::npos);
    CHECK(plain.find("0.431***") != std::string::npos);
    CHECK(plain.find("Non-college") == std::string::npos);

    RegressionResult with_interaction;
    with_interaction.outcome = Outcome::Clarity;
    with_interaction.terms = {"treated", "non_college", "treated:non_college"};
    with_interaction.coefficients = Eigen::Vector3d(0.3, 0.1, 0.26);
    with_interaction.covariance = Eigen::Matrix3d::Identity() * 0.01;
    with_interaction.n_obs = 600;
    with_interaction.n_clusters = 120;
    results.push_back(with_interaction);
    const auto md = render_table(results, {"A", "B", "C"});
    CHECK(md.find("| Treated x Non-college |  |  | 0.26* |") != std::string::npos);
    CHECK(md.find("| Non-college |  |  | 0.1 |") != std::string::npos);
  }

  TEST_CASE("results JSON carries full precision") {
    const auto r = reported_result(Outcome::Clarity, 0.123456789012345, 0.05, 600, 120);
    const auto json = results_to_json({r});
    CHECK(json[0]["outcome"] == "clarity");
    CHECK(json[0]["terms"]["treated"]["coefficient"].get<double>() == 0.123456789012345);
    CHECK(json[0]["df"] == 119);
  }
}
