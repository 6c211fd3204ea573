#include <doctest.h>

#include <cstdlib>
#include <algorithm>
#include <fstream>
#include <sstream>

#include "opinion/backend.hpp"
#include "opinion/cli.hpp"
#include "opinion/config.hpp"
#include "opinion/error.hpp"
#include "opinion/hash.hpp"
#include "opinion/survey.hpp"
#include "support/paths.hpp"

using namespace opinion;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "opinion-simplify");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const std::string kRegistry = testing::registry_path().string();

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config text parsing and precedence") {
    const auto values = parse_config_text(
        "# comment\n[pipeline]\nmodel = \"gpt-4o\"\nparallelism = 3  # trailing\nstyles = 7th-grade, twitter-thread\n");
    RunConfig config;
    apply_config(config, values);
    CHECK(config.model_id == "gpt-4o");
    CHECK(config.parallelism == 3);
    CHECK(config.styles.size() == 2);
    CHECK_THROWS_AS(parse_config_text("no equals sign"), Error);
    CHECK_THROWS_AS(apply_config(config, {{"colour", "red"}}), Error);
    CHECK_THROWS_AS(apply_config(config, {{"parallelism", "many"}}), Error);
    config.parallelism = 0;
    CHECK_THROWS_AS(config.validate(), Error);
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitSuccess);
    CHECK(run({"summarize", "--mock", "--styles", "haiku", "--registry", kRegistry}).code == kExitUsage);
  }

  TEST_CASE("ingest lists topics") {
    const auto r = run({"ingest", "--registry", kRegistry});
    CHECK(r.code == 0);
    CHECK(r.out.find("cases: 15") != std::string::npos);
    CHECK(run({"ingest", "--registry", "/nonexistent.json"}).code == kExitUsage);
  }

  TEST_CASE("mock summarize of one case is snapshot stable") {
    const auto dir = testing::scratch_dir("cli-summarize");
    auto once = [&](const std::string& sub) {
      const auto out = (dir / sub).string();
      const auto r = run({"summarize", "--mock", "--styles", "7th-grade", "--case", "dobbs-2022",
                          "--registry", kRegistry, "--out", out});
      CHECK(r.code == 0);
      return testing::slurp(dir / sub / "dobbs-2022.json") + testing::slurp(dir / sub / "manifest.json");
    };
    const auto first = once("a");
    CHECK(once("b") == first);
    const auto manifest = nlohmann::json::parse(testing::slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["cases"].size() == 1);
    CHECK(manifest["cases"][0]["status"] == "ok");
    CHECK(manifest["prompt_hashes"].contains("style:7th-grade"));
    CHECK(manifest["token_usage"]["input_tokens"].get<std::size_t>() > 0);
  }

  TEST_CASE("unknown case id is a usage error") {
    const auto dir = testing::scratch_dir("cli-unknown");
    CHECK(run({"summarize", "--mock", "--case", "nope", "--registry", kRegistry, "--out", dir.string()}).code ==
          kExitUsage);
  }

  TEST_CASE("empty registry warns and succeeds") {
    const auto dir = testing::scratch_dir("cli-empty");
    {
      std::ofstream(dir / "empty.json") << R"({"cases": []})";
    }
    const auto r = run({"summarize", "--mock", "--registry", (dir / "empty.json").string(), "--out",
                        (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
  }

  TEST_CASE("live backend without an API key fails before any network call") {
    ::unsetenv(kApiKeyEnv);
    const auto dir = testing::scratch_dir("cli-live");
    // Port 9 (discard) would hang or refuse; the guard must fire first.
    const auto r = run({"summarize", "--endpoint", "http://127.0.0.1:9/v1/chat/completions",
                        "--registry", kRegistry, "--out", dir.string()});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find(kApiKeyEnv) != std::string::npos);
    CHECK(run({"summarize", "--mock", "--endpoint", "http://x/y", "--registry", kRegistry}).code == kExitUsage);
  }

  TEST_CASE("score one file and a bundle") {
    const auto one = run({"score", (testing::fixtures_dir() / "seventh_grade" / "harris-2014.txt").string()});
    CHECK(one.code == 0);
    CHECK(count_lines(one.out) == 2);
    CHECK(one.out.rfind("text_id,words,sentences,syllables,flesch,band\n", 0) == 0);
    CHECK(one.err.find("mean flesch") != std::string::npos);

    const auto dir = testing::scratch_dir("cli-score");
    REQUIRE(run({"summarize", "--mock", "--styles", "7th-grade,twitter-thread,youtube-comment", "--case",
                 "windsor-2013", "--registry", kRegistry, "--out", dir.string()})
                .code == 0);
    const auto bundle = run({"score", (dir / "windsor-2013.json").string()});
    CHECK(bundle.code == 0);
    CHECK(count_lines(bundle.out) == 6);  // header + 5 stages

    const auto report = run({"report", dir.string()});
    CHECK(report.code == 0);
    CHECK(report.out.find("| intermediate | 1 |") != std::string::npos);
  }

  TEST_CASE("score reports empty texts per file") {
    const auto dir = testing::scratch_dir("cli-score-empty");
    std::ofstream(dir / "blank.txt") << "   ";
    const auto r = run({"score", (dir / "blank.txt").string(),
                        (testing::fixtures_dir() / "seventh_grade" / "jones-2012.txt").string()});
    CHECK(r.code == kExitPartialFailure);
    CHECK(r.err.find("EmptyText") != std::string::npos);
    CHECK(count_lines(r.out) == 2);
  }

  TEST_CASE("simulate then analyze") {
    const auto dir = testing::scratch_dir("cli-analyze");
    const auto csv = (dir / "survey.csv").string();
    REQUIRE(run({"simulate", "--registry", kRegistry, "--seed", "42", "--out", csv}).code == 0);
    const auto data = testing::slurp(csv);
    CHECK(count_lines(data) == 601);
    REQUIRE(run({"simulate", "--registry", kRegistry, "--seed", "42", "--out", (dir / "again.csv").string()}).code == 0);
    CHECK(sha256_hex(testing::slurp(dir / "again.csv")) == sha256_hex(data));

    const auto table = run({"analyze", csv, "--json", (dir / "results.json").string()});
    CHECK(table.code == 0);
    CHECK(table.out.find("| Observations | 600 | 600 | 600 | 600 | 600 | 600 |") != std::string::npos);
    CHECK(table.out.find("*") != std::string::npos);
    CHECK(table.out.find("Treated x Non-college") == std::string::npos);
    CHECK(nlohmann::json::parse(testing::slurp(dir / "results.json")).size() == 6);

    const auto inter = run({"analyze", csv, "--interaction", "non_college"});
    CHECK(inter.code == 0);
    CHECK(inter.out.find("Treated x Non-college") != std::string::npos);
    CHECK(run({"analyze", csv, "--interaction", "income"}).code == kExitUsage);
  }

  TEST_CASE("simulate edge parameters") {
    const auto dir = testing::scratch_dir("cli-sim-edge");
    const auto empty = run({"simulate", "--registry", kRegistry, "--respondents", "0"});
    CHECK(empty.out == std::string(kSurveyCsvHeader) + "\n");
    const auto all = run({"simulate", "--registry", kRegistry, "--respondents", "4", "--non-college-share", "1.0"});
    std::istringstream in(all.out);
    for (const auto& r : read_survey_csv(in)) CHECK(r.non_college);
    CHECK(run({"simulate", "--registry", kRegistry, "--non-college-share", "2"}).code == kExitUsage);
  }

  TEST_CASE("analyze errors") {
    const auto dir = testing::scratch_dir("cli-analyze-errors");
    std::ofstream(dir / "one.csv") << kSurveyCsvHeader << "\nr1,a,1,0,1,0,1,3,2,0\nr1,b,0,0,1,1,0,4,2,0\n";
    const auto one = run({"analyze", (dir / "one.csv").string()});
    CHECK(one.code == kExitPartialFailure);
    CHECK(one.err.find("TooFewClusters") != std::string::npos);

    std::ofstream(dir / "bad.csv") << kSurveyCsvHeader << "\nr1,a,1,0,1,0,1,3,2,0\nr2,a,7,0,1,0,1,3,2,0\n";
    const auto bad = run({"analyze", (dir / "bad.csv").string()});
    CHECK(bad.code == kExitUsage);
    CHECK(bad.err.find("line 3") != std::string::npos);
  }
}
