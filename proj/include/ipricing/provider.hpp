#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

namespace ipricing::extract {

struct ProviderRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.0;  // determinism over creativity
  int max_output_tokens = 8192;
  bool structured_output = true;
  // Replay/recording key parts.
  std::string template_id;
  std::string payload_hash;
};

struct ProviderResponse {
  std::string text;  // verbatim, kept for audit
  std::string finish_reason = "stop";
  std::int64_t prompt_tokens = -1;
  std::int64_t completion_tokens = -1;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  virtual ProviderResponse complete(const ProviderRequest& request) = 0;
};

// Shared request pacing across threads (batch mode).
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second = 0.0);
  void acquire();

 private:
  std::chrono::microseconds interval_{0};
  std::chrono::steady_clock::time_point next_allowed_;
  std::mutex mutex_;
};

struct HttpProviderConfig {
  std::string base_url;                           // e.g. https://api.example.com
  std::string path = "/v1/chat/completions";      // chat-completion style endpoint
  std::string api_key_env = "PRICING_PROVIDER_KEY";
  double requests_per_second = 1.0;               // free tiers rate-limit hard
  int timeout_seconds = 120;
};

// Generic chat-completion client. Transport failures and HTTP 429/5xx are
// transient (retried by the caller); other failures are not.
class HttpChatProvider : public Provider {
 public:
  explicit HttpChatProvider(HttpProviderConfig config);
  std::string id() const override { return "http:" + config_.base_url; }
  ProviderResponse complete(const ProviderRequest& request) override;

 private:
  HttpProviderConfig config_;
  std::shared_ptr<RateLimiter> limiter_;
};

// Answers from recorded fixtures keyed by template id + payload hash:
// `<template_id>-<payload_hash>.txt`, one file per request key.
class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(std::string fixture_dir);
  std::string id() const override { return "replay"; }
  ProviderResponse complete(const ProviderRequest& request) override;

  static std::string fixture_name(const std::string& template_id,
                                  const std::string& payload_hash);

 private:
  std::string dir_;
};

// Fails fast; the default when no provider is configured.
class NullProvider : public Provider {
 public:
  std::string id() const override { return "null"; }
  ProviderResponse complete(const ProviderRequest& request) override;
};

// Wraps another provider and records responses into the replay layout.
class RecordingProvider : public Provider {
 public:
  RecordingProvider(std::shared_ptr<Provider> inner, std::string fixture_dir);
  std::string id() const override { return inner_->id(); }
  ProviderResponse complete(const ProviderRequest& request) override;

 private:
  std::shared_ptr<Provider> inner_;
  std::string dir_;
};

}  // namespace ipricing::extract
