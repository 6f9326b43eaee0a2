#include "ipricing/provider.hpp"

#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "ipricing/diagnostics.hpp"

namespace ipricing::extract {

using nlohmann::json;

RateLimiter::RateLimiter(double requests_per_second) {
  if (requests_per_second > 0) {
    interval_ = std::chrono::microseconds(static_cast<std::int64_t>(1e6 / requests_per_second));
  }
  next_allowed_ = std::chrono::steady_clock::now();
}

void RateLimiter::acquire() {
  if (interval_.count() == 0) return;
  std::unique_lock lock(mutex_);
  auto now = std::chrono::steady_clock::now();
  if (now < next_allowed_) {
    auto wait_until = next_allowed_;
    next_allowed_ += interval_;
    lock.unlock();
    std::this_thread::sleep_until(wait_until);
    return;
  }
  next_allowed_ = now + interval_;
}

HttpChatProvider::HttpChatProvider(HttpProviderConfig config)
    : config_(std::move(config)),
      limiter_(std::make_shared<RateLimiter>(config_.requests_per_second)) {}

ProviderResponse HttpChatProvider::complete(const ProviderRequest& request) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw PipelineError(ErrorCode::ProviderError,
                        "environment variable " + config_.api_key_env + " is not set");
  }
  limiter_->acquire();

  json body = {
      {"model", request.model},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
  };
  if (request.structured_output) body["response_format"] = {{"type", "json_object"}};

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_default_headers({{"Authorization", std::string("Bearer ") + key}});

  auto result = client.Post(config_.path, body.dump(), "application/json");
  if (!result) {
    throw PipelineError(ErrorCode::ProviderError,
                        "transport error: " + httplib::to_string(result.error()),
                        /*transient=*/true);
  }
  if (result->status == 429 || result->status >= 500) {
    throw PipelineError(ErrorCode::ProviderError,
                        "provider answered HTTP " + std::to_string(result->status),
                        /*transient=*/true);
  }
  if (result->status >= 400) {
    throw PipelineError(ErrorCode::ProviderError,
                        "provider rejected the request with HTTP " +
                            std::to_string(result->status) + ": " + result->body);
  }
  json parsed = json::parse(result->body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
    throw PipelineError(ErrorCode::ProviderError, "malformed provider response body");
  }
  const json& choice = parsed["choices"][0];
  ProviderResponse response;
  if (choice.contains("message") && choice["message"].contains("content") &&
      choice["message"]["content"].is_string()) {
    response.text = choice["message"]["content"].get<std::string>();
  } else {
    throw PipelineError(ErrorCode::ProviderError, "provider response has no message content");
  }
  if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
    response.finish_reason = choice["finish_reason"].get<std::string>();
  }
  if (parsed.contains("usage")) {
    response.prompt_tokens = parsed["usage"].value("prompt_tokens", -1);
    response.completion_tokens = parsed["usage"].value("completion_tokens", -1);
  }
  return response;
}

ReplayProvider::ReplayProvider(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

std::string ReplayProvider::fixture_name(const std::string& template_id,
                                         const std::string& payload_hash) {
  return template_id + "-" + payload_hash + ".txt";
}

ProviderResponse ReplayProvider::complete(const ProviderRequest& request) {
  const std::filesystem::path path =
      std::filesystem::path(dir_) / fixture_name(request.template_id, request.payload_hash);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PipelineError(ErrorCode::ProviderError,
                        "no recorded response at " + path.string() +
                            " (record one with the record-fixtures command)");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ProviderResponse response;
  response.text = buffer.str();
  response.finish_reason = "replay";
  return response;
}

ProviderResponse NullProvider::complete(const ProviderRequest&) {
  throw PipelineError(ErrorCode::ProviderError,
                      "no provider configured (use --provider replay or --provider http)");
}

RecordingProvider::RecordingProvider(std::shared_ptr<Provider> inner, std::string fixture_dir)
    : inner_(std::move(inner)), dir_(std::move(fixture_dir)) {}

ProviderResponse RecordingProvider::complete(const ProviderRequest& request) {
  ProviderResponse response = inner_->complete(request);
  std::filesystem::create_directories(dir_);
  const std::filesystem::path path =
      std::filesystem::path(dir_) /
      ReplayProvider::fixture_name(request.template_id, request.payload_hash);
  std::ofstream out(path, std::ios::binary);
  out << response.text;
  return response;
}

}  // namespace ipricing::extract
