#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ipricing/ingest.hpp"
#include "ipricing/text.hpp"
#include "ipricing/webdriver.hpp"

namespace ipricing::ingest {

namespace {

struct UrlParts {
  std::string base;  // scheme://host[:port]
  std::string path;  // /path?query
};

UrlParts split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw PipelineError(ErrorCode::FetchFailed, "locator is not an absolute URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string resolve_redirect(const UrlParts& current, const std::string& location) {
  if (location.rfind("http://", 0) == 0 || location.rfind("https://", 0) == 0) return location;
  if (!location.empty() && location[0] == '/') return current.base + location;
  return current.base + "/" + location;
}

SourceDocument fetch_local(const std::string& locator) {
  namespace fs = std::filesystem;
  if (!fs::exists(locator) || fs::is_directory(locator)) {
    throw PipelineError(ErrorCode::FileNotFound, "no such file: " + locator);
  }
  std::ifstream in(locator, std::ios::binary);
  if (!in) throw PipelineError(ErrorCode::FileNotFound, "cannot open: " + locator);
  std::ostringstream buffer;
  buffer << in.rdbuf();

  SourceDocument doc;
  doc.origin = Origin::LocalFile;
  doc.locator = locator;
  doc.raw_html = text::sanitize_utf8(buffer.str());
  doc.fetched_at = std::chrono::system_clock::now();
  doc.final_url = locator;
  return doc;
}

SourceDocument fetch_http(const std::string& locator, const FetchOptions& options) {
  std::string url = locator;
  for (int hop = 0; hop <= options.max_redirects; ++hop) {
    UrlParts parts = split_url(url);
    httplib::Client client(parts.base);
    client.set_connection_timeout(options.http_timeout.count() / 1000,
                                  (options.http_timeout.count() % 1000) * 1000);
    client.set_read_timeout(options.http_timeout.count() / 1000,
                            (options.http_timeout.count() % 1000) * 1000);
    auto result = client.Get(parts.path);
    if (!result) {
      throw PipelineError(ErrorCode::FetchFailed,
                          "request to " + url + " failed: " + httplib::to_string(result.error()));
    }
    if (result->status >= 300 && result->status < 400 && result->has_header("Location")) {
      url = resolve_redirect(parts, result->get_header_value("Location"));
      continue;
    }
    if (result->status >= 400) {
      throw PipelineError(ErrorCode::FetchFailed,
                          url + " answered HTTP " + std::to_string(result->status));
    }
    SourceDocument doc;
    doc.origin = Origin::HttpUrl;
    doc.locator = locator;
    doc.raw_html = text::sanitize_utf8(result->body);
    doc.fetched_at = std::chrono::system_clock::now();
    doc.final_url = url;
    return doc;
  }
  throw PipelineError(ErrorCode::FetchFailed, "too many redirects from " + locator);
}

// Waits until the DOM is stable for two consecutive polls or the budget runs
// out; the last sample wins. RENDER_TIMEOUT only when no sample was obtained.
SourceDocument fetch_webdriver(const std::string& locator,
                               std::chrono::milliseconds wait_budget,
                               const FetchOptions& options) {
  WebDriverSession session(options.webdriver_endpoint);
  session.navigate(locator);

  const auto deadline = std::chrono::steady_clock::now() + wait_budget;
  std::string last;
  bool have_sample = false;
  while (true) {
    std::string sample;
    bool got = false;
    try {
      sample = session.page_source();
      got = true;
    } catch (const PipelineError&) {
      got = false;  // document not ready yet
    }
    if (got) {
      if (have_sample && sample == last) break;  // stable across two polls
      last = std::move(sample);
      have_sample = true;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      if (!have_sample) {
        throw PipelineError(ErrorCode::RenderTimeout,
                            "no document rendered within the wait budget for " + locator);
      }
      break;
    }
    std::this_thread::sleep_for(options.poll_interval);
  }

  SourceDocument doc;
  doc.origin = Origin::WebdriverUrl;
  doc.locator = locator;
  doc.raw_html = text::sanitize_utf8(last);
  doc.fetched_at = std::chrono::system_clock::now();
  std::string current = session.current_url();
  doc.final_url = current.empty() ? locator : current;
  return doc;
}

}  // namespace

SourceDocument fetch(const std::string& locator, Origin mode,
                     std::chrono::milliseconds wait_budget, const FetchOptions& options) {
  switch (mode) {
    case Origin::LocalFile: return fetch_local(locator);
    case Origin::HttpUrl: return fetch_http(locator, options);
    case Origin::WebdriverUrl: return fetch_webdriver(locator, wait_budget, options);
  }
  throw PipelineError(ErrorCode::FetchFailed, "unknown fetch mode");
}

}  // namespace ipricing::ingest
