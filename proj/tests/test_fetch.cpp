#include <httplib.h>

#include <thread>

#include "doctest.h"
#include "ipricing/ingest.hpp"
#include "support/fake_webdriver.hpp"
#include "support/paths.hpp"

using namespace ipricing;
using namespace std::chrono_literals;

namespace {

struct TestHttpServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  TestHttpServer() {
    port = server.bind_to_any_port("127.0.0.1");
    // handlers registered by tests before first request; httplib allows this
  }
  void start() {
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~TestHttpServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port) + path;
  }
};

ingest::FetchOptions fast_options(const std::string& webdriver = {}) {
  ingest::FetchOptions o;
  if (!webdriver.empty()) o.webdriver_endpoint = webdriver;
  o.poll_interval = 5ms;
  o.http_timeout = 2000ms;
  return o;
}

}  // namespace

TEST_CASE("local file fetch is an identity read") {
  auto path = testing::fixture("zoom.html").string();
  auto doc = ingest::fetch(path, ingest::Origin::LocalFile, 0ms);
  CHECK(doc.raw_html == testing::read_file(path));
  CHECK(doc.origin == ingest::Origin::LocalFile);
  CHECK(doc.final_url == path);

  auto again = ingest::fetch(path, ingest::Origin::LocalFile, 0ms);
  CHECK(again.raw_html == doc.raw_html);
}

TEST_CASE("missing file raises FILE_NOT_FOUND") {
  try {
    ingest::fetch("/definitely/not/here.html", ingest::Origin::LocalFile, 0ms);
    FAIL("expected FILE_NOT_FOUND");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::FileNotFound);
  }
}

TEST_CASE("http fetch returns the body and follows redirects") {
  TestHttpServer http;
  http.server.Get("/pricing", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("<html><body><p>Pro plan</p></body></html>", "text/html");
  });
  http.server.Get("/old", [&](const httplib::Request&, httplib::Response& res) {
    res.status = 301;
    res.set_header("Location", "/pricing");
  });
  http.start();

  auto doc = ingest::fetch(http.url("/pricing"), ingest::Origin::HttpUrl, 0ms, fast_options());
  CHECK(doc.raw_html.find("Pro plan") != std::string::npos);
  CHECK(doc.final_url == http.url("/pricing"));

  auto redirected = ingest::fetch(http.url("/old"), ingest::Origin::HttpUrl, 0ms, fast_options());
  CHECK(redirected.raw_html.find("Pro plan") != std::string::npos);
  CHECK(redirected.final_url == http.url("/pricing"));
  CHECK(redirected.locator == http.url("/old"));
}

TEST_CASE("http errors and unreachable hosts raise FETCH_FAILED") {
  TestHttpServer http;
  http.server.Get("/gone", [](const httplib::Request&, httplib::Response& res) {
    res.status = 404;
    res.set_content("not here", "text/plain");
  });
  http.start();
  try {
    ingest::fetch(http.url("/gone"), ingest::Origin::HttpUrl, 0ms, fast_options());
    FAIL("expected FETCH_FAILED");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::FetchFailed);
  }

  try {
    ingest::fetch("http://127.0.0.1:1/nothing", ingest::Origin::HttpUrl, 0ms, fast_options());
    FAIL("expected FETCH_FAILED");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::FetchFailed);
  }
}

TEST_CASE("script-injected rows appear only through the webdriver path") {
  std::string static_html = testing::read_file(testing::fixture("scripted_table.html"));
  std::string rendered_html = testing::read_file(testing::fixture("scripted_table.rendered.html"));

  TestHttpServer http;
  http.server.Get("/acme", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(static_html, "text/html");
  });
  http.start();
  testing::FakeWebDriver webdriver(rendered_html);

  auto plain = ingest::fetch(http.url("/acme"), ingest::Origin::HttpUrl, 0ms, fast_options());
  auto plain_payload = ingest::clean(plain, 1 << 20);
  CHECK(plain_payload.text.find("Starter") == std::string::npos);

  auto rendered = ingest::fetch(http.url("/acme"), ingest::Origin::WebdriverUrl, 500ms,
                                fast_options(webdriver.endpoint()));
  auto rendered_payload = ingest::clean(rendered, 1 << 20);
  // The fixture's known row count: all three plan rows present.
  CHECK(rendered_payload.text.find("Starter") != std::string::npos);
  CHECK(rendered_payload.text.find("Growth") != std::string::npos);
  CHECK(rendered_payload.text.find("Scale") != std::string::npos);
}

TEST_CASE("webdriver waits for two identical samples") {
  testing::FakeWebDriver webdriver("<html><body><p>ready</p></body></html>",
                                   /*unstable_samples=*/2);
  webdriver.set_current_url("https://final.test/pricing");
  auto doc = ingest::fetch("https://site.test/pricing", ingest::Origin::WebdriverUrl, 2000ms,
                           fast_options(webdriver.endpoint()));
  CHECK(doc.raw_html.find("ready") != std::string::npos);
  CHECK(webdriver.source_calls() >= 4);  // 2 unstable + 2 stable samples
  CHECK(doc.final_url == "https://final.test/pricing");
  CHECK(webdriver.session_deleted());
}

TEST_CASE("webdriver raises RENDER_TIMEOUT when no document arrives in budget") {
  testing::FakeWebDriver webdriver("<html></html>", 0, /*source_errors=*/true);
  try {
    ingest::fetch("https://site.test/pricing", ingest::Origin::WebdriverUrl, 50ms,
                  fast_options(webdriver.endpoint()));
    FAIL("expected RENDER_TIMEOUT");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::RenderTimeout);
  }
}
