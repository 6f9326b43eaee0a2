#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ipricing/ingest.hpp"
#include "ipricing/text.hpp"
#include "support/paths.hpp"

using namespace ipricing;
namespace text = ipricing::text;

namespace {

ingest::SourceDocument doc_from(std::string html, std::string locator = "test.html") {
  ingest::SourceDocument d;
  d.origin = ingest::Origin::LocalFile;
  d.locator = std::move(locator);
  d.raw_html = std::move(html);
  d.final_url = d.locator;
  return d;
}

// Independent no-fabrication reference: raw HTML with comments/script/style
// content removed, tags replaced by spaces, minimal entities decoded,
// whitespace collapsed, case folded. Attribute values are appended separately.
std::string reference_text(const std::string& html) {
  std::string out;
  std::string attrs;
  std::size_t i = 0;
  auto ci_find = [&](const std::string& needle, std::size_t from) {
    for (std::size_t k = from; k + needle.size() <= html.size(); ++k) {
      bool hit = true;
      for (std::size_t j = 0; j < needle.size(); ++j) {
        if (std::tolower(static_cast<unsigned char>(html[k + j])) != needle[j]) {
          hit = false;
          break;
        }
      }
      if (hit) return k;
    }
    return html.size();
  };
  while (i < html.size()) {
    if (html[i] == '<') {
      if (html.compare(i, 4, "<!--") == 0) {
        std::size_t end = html.find("-->", i);
        i = end == std::string::npos ? html.size() : end + 3;
        out.push_back(' ');
        continue;
      }
      std::size_t close = html.find('>', i);
      if (close == std::string::npos) break;
      std::string tag = html.substr(i + 1, close - i - 1);
      // Capture quoted attribute values.
      for (std::size_t q = 0; q < tag.size(); ++q) {
        if (tag[q] == '"' || tag[q] == '\'') {
          char quote_char = tag[q];
          std::size_t end_quote = tag.find(quote_char, q + 1);
          if (end_quote == std::string::npos) break;
          attrs += "\n" + tag.substr(q + 1, end_quote - q - 1);
          q = end_quote;
        }
      }
      std::string name;
      for (std::size_t k = 0;
           k < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[k])) || tag[k] == '/');
           ++k) {
        if (tag[k] != '/') {
          name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(tag[k]))));
        }
      }
      i = close + 1;
      out.push_back(' ');
      if (name == "script" || name == "style" || name == "textarea" || name == "title") {
        i = ci_find("</" + name, i);
        std::size_t end = html.find('>', i);
        i = end == std::string::npos ? html.size() : end + 1;
      }
      continue;
    }
    out.push_back(html[i]);
    ++i;
  }
  out += attrs;
  // Decode the same minimal entity set the cleaner documents.
  std::string decoded;
  for (std::size_t k = 0; k < out.size();) {
    if (out[k] == '&') {
      std::size_t semi = out.find(';', k);
      if (semi != std::string::npos && semi - k <= 10) {
        std::string ent = out.substr(k + 1, semi - k - 1);
        std::string rep;
        if (ent == "amp") rep = "&";
        else if (ent == "lt") rep = "<";
        else if (ent == "gt") rep = ">";
        else if (ent == "quot") rep = "\"";
        else if (ent == "apos" || ent == "#39") rep = "'";
        else if (ent == "nbsp") rep = " ";
        else if (!ent.empty() && ent[0] == '#') {
          char32_t cp = 0;
          bool ok = true;
          if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
            for (std::size_t j = 2; j < ent.size() && ok; ++j) {
              char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ent[j])));
              if (c >= '0' && c <= '9') cp = cp * 16 + static_cast<char32_t>(c - '0');
              else if (c >= 'a' && c <= 'f') cp = cp * 16 + static_cast<char32_t>(c - 'a' + 10);
              else ok = false;
            }
          } else {
            for (std::size_t j = 1; j < ent.size() && ok; ++j) {
              if (!std::isdigit(static_cast<unsigned char>(ent[j]))) ok = false;
              else cp = cp * 10 + static_cast<char32_t>(ent[j] - '0');
            }
          }
          if (ok && cp > 0) text::append_utf8(rep, cp);
        }
        if (!rep.empty()) {
          decoded += rep;
          k = semi + 1;
          continue;
        }
      }
    }
    decoded.push_back(out[k]);
    ++k;
  }
  return text::normalize_name(decoded);
}

// Splits cleaned payload text into its visible text segments (tags removed).
std::vector<std::string> cleaned_segments(const std::string& cleaned) {
  std::vector<std::string> segments;
  std::string current;
  auto flush = [&]() {
    if (!text::collapse_whitespace(current).empty()) {
      segments.push_back(text::normalize_name(current));
    }
    current.clear();
  };
  for (std::size_t i = 0; i < cleaned.size(); ++i) {
    if (cleaned[i] == '<') {
      std::size_t close = cleaned.find('>', i);
      if (close != std::string::npos) {
        flush();
        i = close;
        continue;
      }
    }
    if (cleaned[i] == '\n') {
      flush();
      continue;
    }
    current.push_back(cleaned[i]);
  }
  flush();
  return segments;
}

void check_no_fabrication(const std::string& html) {
  ingest::SourceDocument d = doc_from(html);
  auto payload = ingest::clean(d, 1 << 20);
  std::string reference = reference_text(html);
  for (const std::string& segment : cleaned_segments(payload.text)) {
    CHECK_MESSAGE(reference.find(segment) != std::string::npos,
                  "fabricated segment: \"", segment, "\"");
  }
}

std::string random_html(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::ostringstream out;
  out << "<html><head><title>t</title><script>var x=1;</script></head><body>";
  int blocks = pick(2, 8);
  for (int b = 0; b < blocks; ++b) {
    switch (pick(0, 3)) {
      case 0:
        out << "<h2>Heading " << pick(1, 99) << "</h2><p>Prose block " << pick(1, 99)
            << " with <b>markup</b> &amp; entities.</p>";
        break;
      case 1: {
        out << "<table>";
        int rows = pick(1, 4);
        for (int r = 0; r < rows; ++r) {
          out << "<tr><td>Cell " << b << "." << r << "</td><td>" << pick(0, 500) << " GB</td></tr>";
        }
        out << "</table>";
        break;
      }
      case 2:
        out << "<ul><li>Item " << pick(1, 9) << "</li><li>Item with <a href='#'>link</a></li></ul>";
        break;
      default:
        out << "<div aria-label='Widget " << pick(1, 9) << "'><span>inline " << pick(1, 9)
            << "</span><img alt='Alt text " << pick(1, 9) << "' src='x.png'></div>";
    }
  }
  out << "<footer>footer junk</footer></body></html>";
  return out.str();
}

}  // namespace

TEST_CASE("script content is dropped, visible text kept") {
  auto payload = ingest::clean(doc_from("<script>secret()</script><p>Pro plan</p>"), 1000);
  CHECK(payload.text.find("Pro plan") != std::string::npos);
  CHECK(payload.text.find("secret") == std::string::npos);
}

TEST_CASE("reference page keeps at least one table and its cells") {
  auto html = testing::read_file(testing::fixture("zoom.html"));
  REQUIRE_FALSE(html.empty());
  auto payload = ingest::clean(doc_from(html, "zoom.html"), 1 << 20);
  CHECK(payload.retained_tables >= 1);
  CHECK(payload.text.find("<table>") != std::string::npos);
  CHECK(payload.text.find("Administrator portal") != std::string::npos);
  CHECK(payload.text.find("5 GB") != std::string::npos);
  CHECK(payload.text.find("Phone Dialing") != std::string::npos);
  // Entities decoded; nav/footer/script dropped.
  CHECK(payload.text.find("Plans & Pricing") != std::string::npos);
  CHECK(payload.text.find("dataLayer") == std::string::npos);
  CHECK(payload.text.find("All rights reserved") == std::string::npos);
  CHECK(payload.text.find("Main navigation") == std::string::npos);
  CHECK(payload.cleaner_version == ingest::kCleanerVersion);
}

TEST_CASE("cleaning is deterministic") {
  auto html = testing::read_file(testing::fixture("zoom.html"));
  auto a = ingest::clean(doc_from(html), 5000);
  auto b = ingest::clean(doc_from(html), 5000);
  CHECK(a.text == b.text);
  CHECK(a.estimated_tokens == b.estimated_tokens);
  CHECK(a.dropped_byte_share == b.dropped_byte_share);
}

TEST_CASE("document with no visible text fails to clean") {
  CHECK_THROWS_AS(ingest::clean(doc_from("<script>x()</script><style>p{}</style>"), 100),
                  PipelineError);
  try {
    ingest::clean(doc_from("<!-- only comments -->"), 100);
    FAIL("expected EMPTY_AFTER_CLEAN");
  } catch (const PipelineError& e) {
    CHECK(e.code() == ErrorCode::EmptyAfterClean);
  }
}

TEST_CASE("no fabricated text on the fixture corpus") {
  for (const char* name : {"zoom.html", "scripted_table.html", "scripted_table.rendered.html"}) {
    check_no_fabrication(testing::read_file(testing::fixture(name)));
  }
}

TEST_CASE("no fabricated text on random documents") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) check_no_fabrication(random_html(rng));
}

TEST_CASE("budget pruning is monotone in the budget") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    std::string html = random_html(rng);
    auto full = ingest::clean(doc_from(html), 1 << 20);
    std::int64_t budgets[] = {full.estimated_tokens * 2, full.estimated_tokens,
                              full.estimated_tokens / 2 + 1, full.estimated_tokens / 4 + 1, 16, 4};
    std::int64_t previous = -1;
    for (std::size_t b = 0; b < 6; ++b) {
      auto payload = ingest::clean(doc_from(html), budgets[b]);
      CHECK(payload.estimated_tokens <= budgets[b]);
      if (b > 0 && budgets[b] <= budgets[b - 1]) {
        CHECK(payload.estimated_tokens <= previous);
      }
      previous = payload.estimated_tokens;
      CHECK(payload.dropped_byte_share >= 0.0);
      CHECK(payload.dropped_byte_share <= 1.0);
    }
  }
}

TEST_CASE("pruning drops attribute text before prose, prose before tables") {
  std::string html =
      "<div aria-label='Aria hint text here'></div>"
      "<p>Long prose paragraph that costs tokens.</p>"
      "<table><tr><td>KeepMe</td><td>42 GB</td></tr></table>";
  auto full = ingest::clean(doc_from(html), 1 << 20);
  CHECK(full.text.find("Aria hint") != std::string::npos);
  CHECK(full.text.find("Long prose") != std::string::npos);

  auto no_attr = ingest::clean(doc_from(html), full.estimated_tokens - 1);
  CHECK(no_attr.text.find("Aria hint") == std::string::npos);
  CHECK(no_attr.text.find("Long prose") != std::string::npos);
  CHECK(no_attr.dropped_byte_share > 0.0);

  auto tables_only = ingest::clean(doc_from(html), no_attr.estimated_tokens - 1);
  CHECK(tables_only.text.find("Long prose") == std::string::npos);
  CHECK(tables_only.text.find("KeepMe") != std::string::npos);
}

TEST_CASE("token estimate is ceil of bytes over four") {
  CHECK(ingest::estimate_tokens("") == 0);
  CHECK(ingest::estimate_tokens(std::string(400, 'a')) == 100);
  CHECK(ingest::estimate_tokens("abc") == 1);
  CHECK(ingest::estimate_tokens("abcde") == 2);
}

TEST_CASE("replay token counter uses recorded provider counts") {
  ingest::ReplayTokenCounter counter(testing::fixture("recorded_token_counts.tsv").string());
  CHECK(counter.count("Hello tokens\n") == 3);  // recorded
  CHECK(counter.count("Hello world") == 2);     // recorded
  CHECK(counter.count("unrecorded text") == ingest::estimate_tokens("unrecorded text"));

  auto payload = ingest::clean(doc_from("<p>Hello tokens</p>"), 100, counter);
  CHECK(payload.text == "Hello tokens\n");
  CHECK(payload.estimated_tokens == 3);
}
