#pragma once

// In-process W3C WebDriver stand-in for fetch tests. Serves one fixed
// "rendered" document, optionally after a number of unstable samples.

#include <httplib.h>

#include <atomic>
#include <functional>
#include <string>
#include <thread>

namespace ipricing::testing {

class FakeWebDriver {
 public:
  // `unstable_samples` initial /source responses differ before stabilizing.
  FakeWebDriver(std::string rendered, int unstable_samples = 0, bool source_errors = false)
      : rendered_(std::move(rendered)), unstable_(unstable_samples), errors_(source_errors) {
    server_.Post("/session", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"value\":{\"sessionId\":\"s-1\",\"capabilities\":{}}}",
                      "application/json");
    });
    server_.Post("/session/s-1/url", [this](const httplib::Request& req, httplib::Response& res) {
      last_navigation_ = req.body;
      res.set_content("{\"value\":null}", "application/json");
    });
    server_.Get("/session/s-1/source", [this](const httplib::Request&, httplib::Response& res) {
      int call = ++source_calls_;
      if (errors_) {
        res.status = 500;
        res.set_content("{\"value\":{\"error\":\"no such window\"}}", "application/json");
        return;
      }
      std::string body = rendered_;
      if (call <= unstable_) body = "<html><body>loading " + std::to_string(call) + "</body></html>";
      nlohmann_escape(body);
      res.set_content("{\"value\":\"" + body + "\"}", "application/json");
    });
    server_.Get("/session/s-1/url", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"value\":\"" + current_url_ + "\"}", "application/json");
    });
    server_.Delete("/session/s-1", [this](const httplib::Request&, httplib::Response& res) {
      deleted_ = true;
      res.set_content("{\"value\":null}", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeWebDriver() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int source_calls() const { return source_calls_; }
  bool session_deleted() const { return deleted_; }
  void set_current_url(std::string url) { current_url_ = std::move(url); }

 private:
  static void nlohmann_escape(std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
      }
    }
    s = std::move(out);
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::string rendered_;
  int unstable_ = 0;
  bool errors_ = false;
  std::string current_url_ = "about:blank";
  std::string last_navigation_;
  std::atomic<int> source_calls_{0};
  std::atomic<bool> deleted_{false};
};

}  // namespace ipricing::testing
