#include <httplib.h>

#include <nlohmann/json.hpp>

#include "opinion/backend.hpp"
#include "opinion/error.hpp"

namespace opinion {

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::Configuration, "endpoint URL '" + url + "' has no scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string chat_request_body(const CompletionRequest& request) {
  nlohmann::json body = {
      {"model", request.model_id},
      {"messages",
       nlohmann::json::array({
           {{"role", "system"}, {"content", request.instruction}},
           {{"role", "user"}, {"content", request.input_text}},
       })},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
  };
  return body.dump();
}

std::string parse_chat_response(const std::string& body) {
  try {
    const auto json = nlohmann::json::parse(body);
    return json.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BackendFailure, std::string("malformed completion response: ") + e.what());
  }
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    throw Error(ErrorCode::Configuration,
                std::string("live backend needs an API key in ") + kApiKeyEnv);
  }
  std::tie(origin_, path_) = split_url(config_.endpoint_url);
}

std::string HttpChatBackend::complete(const CompletionRequest& request) {
  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  const httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
  auto response = client.Post(path_, headers, chat_request_body(request), "application/json");
  if (!response) {
    throw TransientBackendError(0, "transport error: " + httplib::to_string(response.error()));
  }
  const int status = response->status;
  if (status == 429 || status >= 500) {
    throw TransientBackendError(status, "HTTP " + std::to_string(status) + ": " + response->body);
  }
  if (status != 200) {
    throw Error(ErrorCode::BackendFailure,
                "HTTP " + std::to_string(status) + ": " + response->body);
  }
  return parse_chat_response(response->body);
}

}  // namespace opinion
