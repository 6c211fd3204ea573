// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "opinion/chunker.hpp"
#include "opinion/error.hpp"
#include "opinion/estimator.hpp"
#include "opinion/readability.hpp"
#include "opinion/summarizer.hpp"
#include "opinion/survey.hpp"
#include "opinion/table.hpp"
#include "support/paths.hpp"
#include "support/sandwich_oracle.hpp"
#include "support/text_gen.hpp"

using namespace opinion;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 = no limit
  std::function<Verdict()> check;
};

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c);
  return buffer;
}

Verdict readability_reproduction() {
  const auto report = score_corpus(testing::seventh_grade_summaries());
  double min_score = 1e9;
  for (const auto& t : report.per_text) min_score = std::min(min_score, t.score);
  const bool ok = report.per_text.size() == 14 && report.mean_score >= 55 &&
                  report.mean_score <= 75 && min_score > 45;
  return {ok, fmt("n=%.0f mean=%.2f min=%.2f", static_cast<double>(report.per_text.size()),
                  report.mean_score, min_score)};
}

Verdict band_interpretation() {
  const std::vector<std::pair<double, std::string>> expected = {
      {65, "plain English"}, {40, "hard to read"}, {15, "very difficult to read"},
      {30, "very difficult to read"}};
  int hits = 0;
  std::string detail;
  for (const auto& [score, label] : expected) {
    const auto got = std::string(to_string(interpret_score(score)));
    if (got == label) ++hits;
    detail += fmt("%.0f", score) + "->" + got + "; ";
  }
  return {hits == 4, std::to_string(hits) + "/4 " + detail};
}

Verdict estimator_oracle() {
  double worst_beta = 0.0;
  double worst_se = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto data = testing::random_panel(seed * 7919, 600);
    RegressionSpec spec;
    spec.outcome = Outcome::Clarity;
    const auto dummies = estimate_treatment_effect(data, spec);
    const auto within = within_transform_estimate(data, spec);
    worst_beta = std::max(worst_beta, std::abs(dummies.coefficient("treated") - within.coefficient("treated")));

    const auto oracle = testing::oracle_fit(data, spec.outcome, false);
    for (std::size_t a = 0; a < oracle.k; ++a) {
      const double ours = dummies.standard_error(oracle.terms[a]);
      const double theirs = std::sqrt(oracle.vcov[a][a]);
      worst_se = std::max(worst_se, std::abs(ours - theirs) / theirs);
    }
  }
  return {worst_beta <= 1e-8 && worst_se <= 1e-10,
          fmt("max|b_dummy-b_within|=%.2e max rel SE diff=%.2e over 50 datasets", worst_beta, worst_se)};
}

Verdict dgp_recovery() {
  const auto registry = load_registry(testing::registry_path());
  std::ostringstream detail;
  bool ok = true;

  // Noiseless: latent outcomes equal the mean structure exactly.
  SurveyDgp exact;
  exact.noise_scale = 0.0;
  exact.discretize = false;
  const auto clean = simulate_survey(registry, 120, exact, 7);
  double worst_exact = 0.0;
  for (auto outcome : kAllOutcomes) {
    RegressionSpec spec;
    spec.outcome = outcome;
    const auto pooled = estimate_treatment_effect(clean, spec);
    // Balanced 50/50 education: the pooled slope is not exact under a
    // heterogeneous effect, so check the interaction model's parameters.
    const auto inter = estimate_interaction(clean, spec);
    const auto& p = exact.at(outcome);
    worst_exact = std::max({worst_exact, std::abs(inter.coefficient("treated") - p.treatment_effect),
                            std::abs(inter.coefficient("treated:non_college") - p.interaction_effect),
                            std::abs(inter.coefficient("non_college") - p.non_college_effect)});
    if (p.interaction_effect == 0.0) {
      worst_exact = std::max(worst_exact, std::abs(pooled.coefficient("treated") - p.treatment_effect));
    }
  }
  ok = ok && worst_exact <= 1e-10;
  detail << fmt("noiseless max err=%.2e; ", worst_exact);

  // Noisy, 120 respondents: pooled and interaction models.
  SurveyDgp noisy;
  const auto data = simulate_survey(registry, 120, noisy, 2023);
  int within = 0;
  int total = 0;
  for (auto outcome : kAllOutcomes) {
    RegressionSpec spec;
    spec.outcome = outcome;
    const auto pooled = estimate_treatment_effect(data, spec);
    const double truth = noisy.pooled_effect(outcome, 0.5);
    ++total;
    if (std::abs(pooled.coefficient("treated") - truth) <= 3 * pooled.standard_error("treated")) ++within;

    const auto inter = estimate_interaction(data, spec);
    const auto& p = noisy.at(outcome);
    for (const auto& [term, value] : {std::pair<std::string, double>{"treated", p.treatment_effect},
                                      {"treated:non_college", p.interaction_effect}}) {
      ++total;
      if (std::abs(inter.coefficient(term) - value) <= 3 * inter.standard_error(term)) ++within;
    }
  }
  ok = ok && within == total;
  detail << "noisy within 3 SE: " << within << "/" << total;
  return {ok, detail.str()};
}

Verdict table_fidelity() {
  struct Reported {
    Outcome outcome;
    double coefficient, se;
    const char* stars;
  };
  const std::vector<Reported> reported = {
      {Outcome::HeardOfCase, 0.0385, 0.0308, ""},     {Outcome::AreaCorrect, 0.00192, 0.0157, ""},
      {Outcome::DecisionCorrect, 0.107, 0.0354, "**"}, {Outcome::DetailJustRight, 0.202, 0.0384, "***"},
      {Outcome::Clarity, 0.431, 0.0752, "***"},        {Outcome::ShareWithFriend, 0.432, 0.0911, "***"}};
  std::vector<RegressionResult> results;
  for (const auto& p : reported) results.push_back(reported_result(p.outcome, p.coefficient, p.se, 560, 120));
  const auto table = render_table(results, {});

  int hits = 0;
  for (const auto& p : reported) {
    const std::string cell = " " + format_estimate(p.coefficient) + p.stars + " |";
    const std::string se = "(" + format_estimate(p.se) + ")";
    if (table.find(cell) != std::string::npos && table.find(se) != std::string::npos) ++hits;
  }
  return {hits == 6, std::to_string(hits) + "/6 columns match"};
}

/// Mock backend that checks each request against the context window.
class AuditingBackend : public CompletionBackend {
public:
  explicit AuditingBackend(std::size_t limit) : limit_(limit) {}
  std::string complete(const CompletionRequest& request) override {
    std::lock_guard lock(mutex_);
    ++calls_;
    if (!request.within_budget(limit_)) ++violations_;
    return mock_.complete(request);
  }
  std::size_t calls() const { return calls_; }
  std::size_t violations() const { return violations_; }

private:
  std::size_t limit_;
  MockBackend mock_;
  std::mutex mutex_;
  std::size_t calls_ = 0;
  std::size_t violations_ = 0;
};

Verdict pipeline_determinism() {
  const auto registry = load_registry(testing::registry_path());
  const std::set<OutputStyle> styles(kAllStyles.begin(), kAllStyles.end());
  const auto cache_dir = testing::scratch_dir("acceptance-cache");

  struct RunOutput {
    std::vector<std::string> bundles;
    std::size_t calls = 0, violations = 0, failures = 0;
  };
  auto run = [&](const std::optional<std::filesystem::path>& dir) {
    AuditingBackend backend(TokenBudget{}.context_limit);
    CompletionCache cache(dir);
    SummarizerOptions options;
    options.clock = fixed_timestamp;
    Summarizer summarizer(backend, cache, options);
    RunOutput out;
    for (const auto& o : run_pipelines(summarizer, registry.cases(), styles, 4)) {
      if (o.bundle) {
        out.bundles.push_back(serialize_bundle(*o.bundle));
      } else {
        ++out.failures;
      }
    }
    out.calls = backend.calls();
    out.violations = backend.violations();
    return out;
  };

  const auto first = run(std::nullopt);
  const auto cold = run(cache_dir);
  const auto warm = run(cache_dir);
  const bool ok = first.failures == 0 && first.bundles.size() == 15 && first.bundles == cold.bundles &&
                  cold.bundles == warm.bundles && first.violations == 0 && cold.violations == 0 &&
                  warm.calls == 0;
  std::ostringstream detail;
  detail << "bundles=" << first.bundles.size() << " identical=" << (first.bundles == cold.bundles)
         << " calls=" << first.calls << " budget violations=" << first.violations + cold.violations
         << " warm-cache calls=" << warm.calls;
  return {ok, detail.str()};
}

Verdict chunker_properties() {
  std::mt19937_64 gen(1000);
  std::uniform_int_distribution<std::size_t> allowance_dist(2, 500);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto text = testing::random_text(gen);
    const auto allowance = allowance_dist(gen);
    const auto set = chunk_text(text, TokenBudget{allowance + 64, 64, 0});
    std::vector<std::string> rejoined;
    bool fits = true;
    for (const auto& chunk : set.chunks) {
      fits = fits && estimate_tokens(chunk) <= allowance;
      for (auto& w : testing::words_of(chunk)) rejoined.push_back(std::move(w));
    }
    const std::size_t needed = (estimate_tokens(text) + allowance - 1) / allowance;
    if (!fits || rejoined != testing::words_of(text) || set.chunks.size() < needed) ++failures;
  }
  return {failures == 0, std::to_string(1000 - failures) + "/1000 texts satisfy all properties"};
}

Verdict syllable_oracle() {
  const auto oracle = testing::syllable_oracle();
  int exact = 0;
  int off_by_one = 0;
  int worse = 0;
  for (const auto& [word, expected] : oracle) {
    const int diff = std::abs(count_syllables(word) - expected);
    if (diff == 0) {
      ++exact;
    } else if (diff == 1) {
      ++off_by_one;
    } else {
      ++worse;
    }
  }
  const double rate = oracle.empty() ? 0.0 : static_cast<double>(exact) / static_cast<double>(oracle.size());
  return {oracle.size() == 100 && rate >= 0.85 && worse == 0,
          fmt("exact=%.0f/100 off-by-one=%.0f worse=%.0f", exact, off_by_one, worse)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Readability reproduction", 1.0, readability_reproduction},
      {2, "Band interpretation", 0.0, band_interpretation},
      {3, "Estimator oracle equivalence", 10.0, estimator_oracle},
      {4, "DGP recovery", 0.0, dgp_recovery},
      {5, "Table fidelity", 0.0, table_fidelity},
      {6, "Pipeline determinism and budget safety", 5.0, pipeline_determinism},
      {7, "Chunker properties", 5.0, chunker_properties},
      {8, "Syllable oracle", 0.0, syllable_oracle},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Verdict verdict;
    const auto start = std::chrono::steady_clock::now();
    try {
      verdict = c.check();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = verdict.pass;
    if (c.time_limit_s > 0 && seconds >= c.time_limit_s) {
      pass = false;
      verdict.detail += fmt(" (over the %.0f s limit)", c.time_limit_s);
    }
    if (!pass) ++failed;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << verdict.detail
              << fmt(" [%.3f s]", seconds) << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
