#include "ipricing/webdriver.hpp"

#include <httplib.h>

#include "json.hpp"

#include "ipricing/diagnostics.hpp"

namespace ipricing::ingest {

using nlohmann::json;

struct WebDriverSession::Impl {
  httplib::Client client;
  explicit Impl(const std::string& endpoint, int timeout_seconds) : client(endpoint) {
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
  }
};

namespace {

json parse_value(const httplib::Result& result, const std::string& what) {
  if (!result) {
    throw PipelineError(ErrorCode::FetchFailed, "webdriver endpoint unreachable during " + what);
  }
  if (result->status >= 400) {
    throw PipelineError(ErrorCode::FetchFailed,
                        "webdriver " + what + " failed with HTTP " +
                            std::to_string(result->status) + ": " + result->body);
  }
  json body = json::parse(result->body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded() || !body.contains("value")) {
    throw PipelineError(ErrorCode::FetchFailed, "webdriver " + what + " returned a bad body");
  }
  return body["value"];
}

}  // namespace

WebDriverSession::WebDriverSession(const std::string& endpoint, int timeout_seconds)
    : impl_(std::make_unique<Impl>(endpoint, timeout_seconds)) {
  json capabilities = {{"capabilities", {{"alwaysMatch", json::object()}}}};
  auto result = impl_->client.Post("/session", capabilities.dump(), "application/json");
  json value = parse_value(result, "session create");
  if (!value.contains("sessionId") || !value["sessionId"].is_string()) {
    throw PipelineError(ErrorCode::FetchFailed, "webdriver session response has no sessionId");
  }
  session_id_ = value["sessionId"].get<std::string>();
}

WebDriverSession::~WebDriverSession() {
  if (!session_id_.empty()) {
    impl_->client.Delete("/session/" + session_id_);  // best effort
  }
}

void WebDriverSession::navigate(const std::string& url) {
  json body = {{"url", url}};
  auto result = impl_->client.Post("/session/" + session_id_ + "/url", body.dump(),
                                   "application/json");
  parse_value(result, "navigate");
}

std::string WebDriverSession::page_source() {
  auto result = impl_->client.Get("/session/" + session_id_ + "/source");
  json value = parse_value(result, "page source");
  if (!value.is_string()) {
    throw PipelineError(ErrorCode::FetchFailed, "webdriver page source is not a string");
  }
  return value.get<std::string>();
}

std::string WebDriverSession::current_url() {
  auto result = impl_->client.Get("/session/" + session_id_ + "/url");
  json value = parse_value(result, "current url");
  return value.is_string() ? value.get<std::string>() : std::string();
}

}  // namespace ipricing::ingest
