#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "ipricing/diagnostics.hpp"

namespace ipricing::ingest {

// Cleaner rules are versioned; evaluation reports cite this tag.
inline constexpr std::string_view kCleanerVersion = "cleaner/1";

enum class Origin { HttpUrl, WebdriverUrl, LocalFile };

struct SourceDocument {
  Origin origin = Origin::LocalFile;
  std::string locator;
  std::string raw_html;
  std::chrono::system_clock::time_point fetched_at;
  std::string final_url;
};

struct CleanedPayload {
  std::string text;
  int retained_tables = 0;
  std::int64_t estimated_tokens = 0;
  double dropped_byte_share = 0.0;  // relative to the unbudgeted cleaning result
  std::string cleaner_version = std::string(kCleanerVersion);
};

// Deterministic token estimate: ceil(bytes / 4). A provider-specific counter
// can replace it where recorded counts exist.
std::int64_t estimate_tokens(std::string_view text);

class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual std::int64_t count(std::string_view text) const = 0;
};

class ByteQuarterCounter : public TokenCounter {
 public:
  std::int64_t count(std::string_view text) const override { return estimate_tokens(text); }
};

// Replays recorded provider token counts from a `fnv1a64-hex<TAB>count` file;
// falls back to the byte estimate for unknown texts.
class ReplayTokenCounter : public TokenCounter {
 public:
  explicit ReplayTokenCounter(const std::string& table_path);
  std::int64_t count(std::string_view text) const override;

 private:
  std::map<std::string, std::int64_t> counts_;
};

// Reduces raw HTML to an extraction payload: drops script/style/svg/head/
// nav/footer noise, keeps tables, headings, lists, text, and aria-labels.
// When the estimate exceeds `max_tokens`, pruning passes apply in documented
// order (attribute text first, then non-table prose, then headings, then tail
// truncation). Throws PipelineError{EmptyAfterClean} when nothing visible
// remains. See docs/cleaning.md.
CleanedPayload clean(const SourceDocument& doc, std::int64_t max_tokens,
                     const TokenCounter& counter = ByteQuarterCounter());

struct FetchOptions {
  std::string webdriver_endpoint = "http://127.0.0.1:4444";
  std::chrono::milliseconds poll_interval{500};
  std::chrono::milliseconds http_timeout{30000};
  int max_redirects = 5;
};

// Fetches a pricing page. WebdriverUrl drives a W3C WebDriver endpoint and
// waits until the DOM is stable for two consecutive polls or the budget runs
// out. Throws PipelineError with FETCH_FAILED / RENDER_TIMEOUT /
// FILE_NOT_FOUND.
SourceDocument fetch(const std::string& locator, Origin mode,
                     std::chrono::milliseconds wait_budget, const FetchOptions& options = {});

}  // namespace ipricing::ingest
