#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "ipricing/ingest.hpp"
#include "ipricing/text.hpp"

namespace ipricing::ingest {

std::int64_t estimate_tokens(std::string_view text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

ReplayTokenCounter::ReplayTokenCounter(const std::string& table_path) {
  std::ifstream in(table_path);
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    counts_[line.substr(0, tab)] = std::stoll(line.substr(tab + 1));
  }
}

std::int64_t ReplayTokenCounter::count(std::string_view text) const {
  auto it = counts_.find(text::to_hex(text::fnv1a64(text)));
  if (it != counts_.end()) return it->second;
  return estimate_tokens(text);
}

namespace {

// Elements whose entire subtree is noise for pricing extraction.
const std::set<std::string>& drop_elements() {
  static const std::set<std::string> s = {"script",  "style", "svg",    "noscript", "template",
                                          "iframe",  "canvas", "object", "embed",    "head",
                                          "nav",     "footer", "audio",  "video",    "select"};
  return s;
}

// Structural elements kept verbatim in the payload markup.
const std::set<std::string>& keep_elements() {
  static const std::set<std::string> s = {"table", "caption", "tr", "th", "td",
                                          "h1",    "h2",      "h3", "h4", "h5",
                                          "h6",    "ul",      "ol", "li"};
  return s;
}

// Raw-text elements: content runs to the matching close tag.
bool raw_text_element(const std::string& name) {
  return name == "script" || name == "style" || name == "textarea" || name == "title";
}

const std::set<std::string>& void_elements() {
  static const std::set<std::string> s = {"area", "base",  "br",    "col",  "embed",
                                          "hr",   "img",   "input", "link", "meta",
                                          "param", "source", "track", "wbr"};
  return s;
}

bool block_element(const std::string& name) {
  static const std::set<std::string> s = {
      "p",       "div",     "section", "article", "main",   "aside",   "header", "figure",
      "figcaption", "details", "summary", "fieldset", "legend", "blockquote", "dl", "dt",
      "dd",      "br",      "hr",      "form",    "label",  "thead",   "tbody",  "tfoot",
      "address", "pre"};
  return s.count(name) > 0;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string_view entity = s.substr(i + 1, semi - i - 1);
    if (entity == "amp") out.push_back('&');
    else if (entity == "lt") out.push_back('<');
    else if (entity == "gt") out.push_back('>');
    else if (entity == "quot") out.push_back('"');
    else if (entity == "apos" || entity == "#39") out.push_back('\'');
    else if (entity == "nbsp") out.push_back(' ');
    else if (!entity.empty() && entity[0] == '#') {
      char32_t cp = 0;
      bool ok = true;
      if (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X')) {
        for (std::size_t k = 2; k < entity.size(); ++k) {
          char c = entity[k];
          cp <<= 4;
          if (c >= '0' && c <= '9') cp |= static_cast<char32_t>(c - '0');
          else if (c >= 'a' && c <= 'f') cp |= static_cast<char32_t>(c - 'a' + 10);
          else if (c >= 'A' && c <= 'F') cp |= static_cast<char32_t>(c - 'A' + 10);
          else { ok = false; break; }
        }
        ok = ok && entity.size() > 2;
      } else {
        for (std::size_t k = 1; k < entity.size(); ++k) {
          if (!std::isdigit(static_cast<unsigned char>(entity[k]))) { ok = false; break; }
          cp = cp * 10 + static_cast<char32_t>(entity[k] - '0');
        }
        ok = ok && entity.size() > 1;
      }
      if (ok && cp > 0 && cp <= 0x10FFFF) text::append_utf8(out, cp);
      else out.append(s.substr(i, semi - i + 1));
    } else {
      out.append(s.substr(i, semi - i + 1));  // unknown entity stays literal
      i = semi + 1;
      continue;
    }
    i = semi + 1;
  }
  return out;
}

struct Piece {
  enum class Kind { Open, Close, Text, AttrText, Break };
  Kind kind;
  std::string value;  // tag name or text
};

struct Tag {
  std::string name;
  bool closing = false;
  bool self_closing = false;
  std::string aria_label;
  std::string alt;
};

// Parses the tag starting at s[pos] == '<'; advances pos past '>'.
std::optional<Tag> parse_tag(std::string_view s, std::size_t& pos) {
  std::size_t i = pos + 1;
  Tag tag;
  if (i < s.size() && s[i] == '/') {
    tag.closing = true;
    ++i;
  }
  std::size_t name_start = i;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '-')) ++i;
  if (i == name_start) return std::nullopt;
  tag.name = std::string(s.substr(name_start, i - name_start));
  std::transform(tag.name.begin(), tag.name.end(), tag.name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  while (i < s.size() && s[i] != '>') {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    std::size_t attr_start = i;
    while (i < s.size() && s[i] != '=' && s[i] != '>' && s[i] != '/' &&
           !std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    std::string attr(s.substr(attr_start, i - attr_start));
    std::transform(attr.begin(), attr.end(), attr.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        char q = s[i++];
        std::size_t value_start = i;
        while (i < s.size() && s[i] != q) ++i;
        value = std::string(s.substr(value_start, i - value_start));
        if (i < s.size()) ++i;
      } else {
        std::size_t value_start = i;
        while (i < s.size() && s[i] != '>' && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        value = std::string(s.substr(value_start, i - value_start));
      }
    }
    if (attr == "aria-label") tag.aria_label = decode_entities(value);
    if (attr == "alt") tag.alt = decode_entities(value);
  }
  if (i >= s.size()) return std::nullopt;  // unterminated tag: drop the rest
  pos = i + 1;
  return tag;
}

std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from) {
  if (needle.empty()) return from;
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (std::tolower(static_cast<unsigned char>(haystack[i + j])) !=
          std::tolower(static_cast<unsigned char>(needle[j]))) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

std::vector<Piece> tokenize(std::string_view html) {
  std::vector<Piece> pieces;
  std::vector<std::string> stack;
  int drop_depth = 0;

  auto is_dropped = [&]() { return drop_depth > 0; };

  std::size_t pos = 0;
  while (pos < html.size()) {
    if (html[pos] != '<') {
      std::size_t next = html.find('<', pos);
      if (next == std::string_view::npos) next = html.size();
      if (!is_dropped()) {
        pieces.push_back({Piece::Kind::Text, decode_entities(html.substr(pos, next - pos))});
      }
      pos = next;
      continue;
    }
    if (html.compare(pos, 4, "<!--") == 0) {
      std::size_t end = html.find("-->", pos + 4);
      pos = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (pos + 1 < html.size() && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
      std::size_t end = html.find('>', pos);
      pos = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    std::size_t tag_start = pos;
    auto tag = parse_tag(html, pos);
    if (!tag) {
      // Literal '<' in text.
      if (!is_dropped()) pieces.push_back({Piece::Kind::Text, "<"});
      pos = tag_start + 1;
      continue;
    }

    if (tag->closing) {
      // Pop up to the matching open element, tolerating misnesting.
      auto it = std::find(stack.rbegin(), stack.rend(), tag->name);
      if (it != stack.rend()) {
        std::size_t keep_count = stack.size() - 1 - static_cast<std::size_t>(it - stack.rbegin());
        while (stack.size() > keep_count) {
          const std::string& open = stack.back();
          if (drop_elements().count(open)) --drop_depth;
          if (!is_dropped()) {
            if (keep_elements().count(open)) pieces.push_back({Piece::Kind::Close, open});
            else if (block_element(open)) pieces.push_back({Piece::Kind::Break, {}});
          }
          stack.pop_back();
        }
      }
      continue;
    }

    bool voided = void_elements().count(tag->name) > 0 || tag->self_closing;
    if (!is_dropped() && !drop_elements().count(tag->name) && !raw_text_element(tag->name)) {
      if (!tag->aria_label.empty()) {
        pieces.push_back({Piece::Kind::Break, {}});
        pieces.push_back({Piece::Kind::AttrText, tag->aria_label});
        pieces.push_back({Piece::Kind::Break, {}});
      }
      if (tag->name == "img" && !tag->alt.empty()) {
        pieces.push_back({Piece::Kind::Break, {}});
        pieces.push_back({Piece::Kind::AttrText, tag->alt});
        pieces.push_back({Piece::Kind::Break, {}});
      }
    }

    if (raw_text_element(tag->name) && !voided) {
      // Raw-text content (script/style/textarea/title) is always noise here.
      std::size_t close = find_ci(html, "</" + tag->name, pos);
      if (close == std::string_view::npos) {
        pos = html.size();
      } else {
        std::size_t end = html.find('>', close);
        pos = end == std::string_view::npos ? html.size() : end + 1;
      }
      continue;
    }

    if (drop_elements().count(tag->name)) {
      if (!voided) {
        stack.push_back(tag->name);
        ++drop_depth;
      }
      continue;
    }

    if (!is_dropped()) {
      if (keep_elements().count(tag->name)) {
        pieces.push_back({Piece::Kind::Open, tag->name});
      } else if (block_element(tag->name)) {
        pieces.push_back({Piece::Kind::Break, {}});
      } else {
        // Inline boundary: guarantees token separation in the output.
        pieces.push_back({Piece::Kind::Text, " "});
      }
    }
    if (!voided) stack.push_back(tag->name);
  }
  return pieces;
}

struct RenderOptions {
  bool attr_text = true;
  bool prose = true;     // text outside tables and headings
  bool headings = true;  // heading tags and their text
};

struct Rendered {
  std::string text;
  int tables = 0;
  bool any_text = false;
};

bool heading(const std::string& name) {
  return name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6';
}

Rendered render(const std::vector<Piece>& pieces, const RenderOptions& opts) {
  Rendered out;
  std::string run;
  int table_depth = 0;
  int heading_depth = 0;
  int list_depth = 0;

  auto newline = [&]() {
    if (!out.text.empty() && out.text.back() != '\n') out.text.push_back('\n');
  };
  auto flush = [&]() {
    std::string collapsed = text::collapse_whitespace(run);
    run.clear();
    if (collapsed.empty()) return;
    if (table_depth == 0 && heading_depth == 0) {
      if (!opts.prose) return;
      if (list_depth == 0) newline();
    }
    if (!out.text.empty() && out.text.back() != '\n' && out.text.back() != '>') {
      out.text.push_back(' ');
    }
    out.text += collapsed;
    out.any_text = true;
    if (table_depth == 0 && heading_depth == 0 && list_depth == 0) newline();
  };

  for (const Piece& piece : pieces) {
    switch (piece.kind) {
      case Piece::Kind::Text:
        run += piece.value;
        break;
      case Piece::Kind::AttrText:
        if (opts.attr_text) run += piece.value;
        break;
      case Piece::Kind::Break:
        flush();
        break;
      case Piece::Kind::Open: {
        flush();
        const std::string& name = piece.value;
        if (heading(name)) {
          if (!opts.headings) { ++heading_depth; break; }
          ++heading_depth;
          newline();
          out.text += "<" + name + ">";
          break;
        }
        if ((name == "ul" || name == "ol" || name == "li") && table_depth == 0 && !opts.prose) {
          if (name != "li") ++list_depth;
          break;
        }
        if (name == "table") {
          ++table_depth;
          ++out.tables;
          newline();
          out.text += "<table>";
          newline();
          break;
        }
        if (name == "tr") {
          if (table_depth > 0) { newline(); out.text += "<tr>"; }
          break;
        }
        if (name == "th" || name == "td" || name == "caption") {
          if (table_depth > 0) out.text += "<" + name + ">";
          break;
        }
        if (name == "ul" || name == "ol") {
          ++list_depth;
          newline();
          out.text += "<" + name + ">";
          newline();
          break;
        }
        if (name == "li") {
          newline();
          out.text += "<li>";
          break;
        }
        break;
      }
      case Piece::Kind::Close: {
        flush();
        const std::string& name = piece.value;
        if (heading(name)) {
          if (heading_depth > 0) --heading_depth;
          if (!opts.headings) break;
          out.text += "</" + name + ">";
          newline();
          break;
        }
        if ((name == "ul" || name == "ol" || name == "li") && table_depth == 0 && !opts.prose) {
          if (name != "li" && list_depth > 0) --list_depth;
          break;
        }
        if (name == "table") {
          if (table_depth > 0) --table_depth;
          newline();
          out.text += "</table>";
          newline();
          break;
        }
        if (name == "tr") {
          if (table_depth > 0) { out.text += "</tr>"; newline(); }
          break;
        }
        if (name == "th" || name == "td" || name == "caption") {
          if (table_depth > 0) out.text += "</" + name + ">";
          break;
        }
        if (name == "ul" || name == "ol") {
          if (list_depth > 0) --list_depth;
          newline();
          out.text += "</" + name + ">";
          newline();
          break;
        }
        if (name == "li") {
          out.text += "</li>";
          newline();
          break;
        }
        break;
      }
    }
  }
  flush();
  if (!out.text.empty() && out.text.back() != '\n') out.text.push_back('\n');
  if (out.text == "\n") out.text.clear();
  return out;
}

// Longest prefix (on a UTF-8 boundary) whose token count fits the budget.
std::string truncate_to_budget(const std::string& body, std::int64_t budget,
                               const TokenCounter& counter) {
  auto aligned = [&](std::size_t n) {
    while (n > 0 && (static_cast<unsigned char>(body[n]) & 0xC0) == 0x80) --n;
    return n;
  };
  std::size_t lo = 0, hi = body.size();
  while (lo < hi) {
    std::size_t mid = aligned(lo + (hi - lo + 1) / 2);
    if (mid <= lo) break;
    if (counter.count(std::string_view(body).substr(0, mid)) <= budget) lo = mid;
    else hi = mid - 1;
  }
  return body.substr(0, aligned(lo));
}

}  // namespace

CleanedPayload clean(const SourceDocument& doc, std::int64_t max_tokens,
                     const TokenCounter& counter) {
  if (max_tokens <= 0) {
    throw PipelineError(ErrorCode::EmptyAfterClean, "token budget must be positive");
  }
  std::vector<Piece> pieces = tokenize(doc.raw_html);

  Rendered base = render(pieces, RenderOptions{});
  if (!base.any_text) {
    throw PipelineError(ErrorCode::EmptyAfterClean, "no visible text after cleaning " +
                                                        doc.locator);
  }

  CleanedPayload payload;
  payload.retained_tables = base.tables;

  // Pruning pass order: attribute text, then non-table prose, then headings,
  // then tail truncation. Documented in docs/cleaning.md.
  const std::array<RenderOptions, 4> passes = {
      RenderOptions{true, true, true},
      RenderOptions{false, true, true},
      RenderOptions{false, false, true},
      RenderOptions{false, false, false},
  };
  std::string chosen;
  std::int64_t tokens = 0;
  bool fits = false;
  for (const RenderOptions& opts : passes) {
    Rendered r = render(pieces, opts);
    chosen = std::move(r.text);
    payload.retained_tables = r.tables;
    tokens = counter.count(chosen);
    if (tokens <= max_tokens) {
      fits = true;
      break;
    }
  }
  if (!fits) {
    chosen = truncate_to_budget(chosen, max_tokens, counter);
    tokens = counter.count(chosen);
  }

  payload.text = chosen;
  payload.estimated_tokens = tokens;
  double base_bytes = static_cast<double>(base.text.size());
  payload.dropped_byte_share =
      base_bytes == 0.0
          ? 0.0
          : std::max(0.0, 1.0 - static_cast<double>(chosen.size()) / base_bytes);
  return payload;
}

}  // namespace ipricing::ingest
