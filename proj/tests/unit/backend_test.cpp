#include <doctest.h>

#include <atomic>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "opinion/backend.hpp"
#include "opinion/error.hpp"
#include "opinion/hash.hpp"

using namespace opinion;
using namespace std::chrono_literals;

namespace {

CompletionRequest sample_request() {
  return CompletionRequest{"gpt-4", "Summarize this.", "First. Second. Third.", 0.0, 64};
}

/// Serves the chat endpoint on an ephemeral port; answers with the queued
/// statuses in order, then 200 forever.
class FakeServer {
public:
  explicit FakeServer(std::vector<int> statuses) : statuses_(std::move(statuses)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const std::size_t n = hits_++;
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      const int status = n < statuses_.size() ? statuses_[n] : 200;
      res.status = status;
      if (status == 200) {
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"served"}}]})",
                        "application/json");
      } else {
        res.set_content("nope", "text/plain");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
  std::size_t hits() const { return hits_.load(); }
  std::string last_body_;
  std::string last_auth_;

private:
  std::vector<int> statuses_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<std::size_t> hits_{0};
};

struct FlakyBackend : CompletionBackend {
  int failures_left;
  int calls = 0;
  explicit FlakyBackend(int failures) : failures_left(failures) {}
  std::string complete(const CompletionRequest&) override {
    ++calls;
    if (failures_left-- > 0) throw TransientBackendError(503, "busy");
    return "ok";
  }
};

}  // namespace

TEST_SUITE("backend") {
  TEST_CASE("mock output is a tagged prefix of the input") {
    MockBackend mock;
    const auto request = sample_request();
    const auto out = mock.complete(request);
    CHECK(out == "[mock gpt-4 " + sha256_hex(request.instruction).substr(0, 8) + "] First. Second.");
    CHECK(mock.complete(request) == out);
    CHECK(mock.calls() == 2);
  }

  TEST_CASE("budget check counts instruction, input and reserved output") {
    auto request = sample_request();
    const auto total = estimate_tokens(request.instruction) + estimate_tokens(request.input_text) + 64;
    CHECK(request.total_tokens() == total);
    CHECK(request.within_budget(total));
    CHECK_FALSE(request.within_budget(total - 1));
    request.temperature = 0.7;
    CHECK_FALSE(request.within_budget(total));
  }

  TEST_CASE("request body wire format") {
    const auto body = nlohmann::json::parse(chat_request_body(sample_request()));
    CHECK(body["model"] == "gpt-4");
    CHECK(body["temperature"] == 0.0);
    CHECK(body["max_tokens"] == 64);
    REQUIRE(body["messages"].size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][0]["content"] == "Summarize this.");
    CHECK(body["messages"][1]["role"] == "user");
    CHECK(body["messages"][1]["content"] == "First. Second. Third.");
  }

  TEST_CASE("response parsing") {
    CHECK(parse_chat_response(R"({"choices":[{"message":{"content":"hi"}}]})") == "hi");
    CHECK_THROWS_AS(parse_chat_response(R"({"choices":[]})"), Error);
    CHECK_THROWS_AS(parse_chat_response("not json"), Error);
  }

  TEST_CASE("empty API key is a configuration error") {
    try {
      HttpChatBackend backend({"http://127.0.0.1:1/v1/chat/completions", ""});
      FAIL("should throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Configuration);
    }
  }

  TEST_CASE("retries after 429 then succeeds") {
    FakeServer server({429, 503});
    HttpChatBackend http({server.url(), "secret"});
    std::vector<std::chrono::milliseconds> sleeps;
    RetryingBackend retrying(http, {}, [&](std::chrono::milliseconds d) { sleeps.push_back(d); });
    CHECK(retrying.complete(sample_request()) == "served");
    CHECK(server.hits() == 3);
    CHECK(sleeps == std::vector<std::chrono::milliseconds>{1000ms, 2000ms});
    CHECK(server.last_auth_ == "Bearer secret");
    CHECK(nlohmann::json::parse(server.last_body_)["model"] == "gpt-4");
  }

  TEST_CASE("gives up after three attempts") {
    FakeServer server({429, 429, 429, 429});
    HttpChatBackend http({server.url(), "secret"});
    RetryingBackend retrying(http, {}, [](std::chrono::milliseconds) {});
    try {
      retrying.complete(sample_request());
      FAIL("should throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BackendFailure);
      CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
    }
    CHECK(server.hits() == 3);
  }

  TEST_CASE("client errors are not retried") {
    FakeServer server({400});
    HttpChatBackend http({server.url(), "secret"});
    RetryingBackend retrying(http, {}, [](std::chrono::milliseconds) {});
    CHECK_THROWS_AS(retrying.complete(sample_request()), Error);
    CHECK(server.hits() == 1);
  }

  TEST_CASE("connection failures are transient") {
    // Bind and release a port so nothing is listening there.
    int port = 0;
    {
      httplib::Server probe;
      port = probe.bind_to_any_port("127.0.0.1");
    }
    HttpChatBackend http({"http://127.0.0.1:" + std::to_string(port) + "/x", "k", 2s});
    CHECK_THROWS_AS(http.complete(sample_request()), TransientBackendError);
  }

  TEST_CASE("retry wrapper with an in-process backend") {
    FlakyBackend flaky(1);
    std::vector<std::chrono::milliseconds> sleeps;
    RetryingBackend retrying(flaky, {}, [&](std::chrono::milliseconds d) { sleeps.push_back(d); });
    CHECK(retrying.complete(sample_request()) == "ok");
    CHECK(flaky.calls == 2);
    CHECK(sleeps.size() == 1);
  }

  TEST_CASE("rate limiter spaces requests on a fake clock") {
    auto now = std::chrono::steady_clock::time_point{};
    std::vector<std::chrono::milliseconds> sleeps;
    RateLimiter limiter(
        1.0, [&] { return now; },
        [&](std::chrono::milliseconds d) {
          sleeps.push_back(d);
          now += d;
        });
    limiter.acquire();
    limiter.acquire();
    limiter.acquire();
    CHECK(sleeps == std::vector<std::chrono::milliseconds>{1000ms, 1000ms});
    now += 5s;
    limiter.acquire();
    CHECK(sleeps.size() == 2);
    CHECK_THROWS_AS(RateLimiter(0.0), Error);
  }
}
