#pragma once

#include <memory>
#include <string>

namespace ipricing::ingest {

// Minimal W3C WebDriver client: one session per object, deleted on
// destruction. All failures throw PipelineError{FetchFailed}.
class WebDriverSession {
 public:
  explicit WebDriverSession(const std::string& endpoint, int timeout_seconds = 30);
  ~WebDriverSession();
  WebDriverSession(const WebDriverSession&) = delete;
  WebDriverSession& operator=(const WebDriverSession&) = delete;

  void navigate(const std::string& url);
  std::string page_source();
  std::string current_url();
  const std::string& id() const { return session_id_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string session_id_;
};

}  // namespace ipricing::ingest
