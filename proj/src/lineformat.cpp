#include "lineformat.hpp"

#include "ipricing/text.hpp"

namespace ipricing::lineformat {

std::vector<Line> scan(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    std::size_t spaces = 0;
    while (spaces < raw.size() && raw[spaces] == ' ') ++spaces;
    if (spaces < raw.size() && raw[spaces] == '\t') {
      throw LineError{number, static_cast<int>(spaces) + 1, "tab characters are not allowed"};
    }
    std::string_view body = raw.substr(spaces);
    if (!body.empty() && body[0] != '#') {
      if (spaces % 2 != 0) {
        throw LineError{number, static_cast<int>(spaces) + 1,
                        "indentation must be a multiple of two spaces"};
      }
      lines.push_back(Line{number, static_cast<int>(spaces / 2), std::string(body)});
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::string read_quoted(std::string_view content, std::size_t& pos, int line, int col_base) {
  if (pos >= content.size() || content[pos] != '"') {
    throw LineError{line, col_base + static_cast<int>(pos), "expected a double-quoted string"};
  }
  ++pos;
  std::string out;
  while (pos < content.size()) {
    char c = content[pos];
    if (c == '"') {
      ++pos;
      return out;
    }
    if (c == '\\') {
      ++pos;
      if (pos >= content.size()) break;
      char esc = content[pos];
      switch (esc) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'u': {
          if (pos + 4 >= content.size()) {
            throw LineError{line, col_base + static_cast<int>(pos), "truncated \\u escape"};
          }
          unsigned value = 0;
          for (int i = 1; i <= 4; ++i) {
            char h = content[pos + static_cast<std::size_t>(i)];
            value <<= 4;
            if (h >= '0' && h <= '9') value |= static_cast<unsigned>(h - '0');
            else if (h >= 'a' && h <= 'f') value |= static_cast<unsigned>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') value |= static_cast<unsigned>(h - 'A' + 10);
            else throw LineError{line, col_base + static_cast<int>(pos), "bad \\u escape digit"};
          }
          text::append_utf8(out, value);
          pos += 4;
          break;
        }
        default:
          throw LineError{line, col_base + static_cast<int>(pos),
                          std::string("unknown escape \\") + esc};
      }
      ++pos;
    } else {
      out.push_back(c);
      ++pos;
    }
  }
  throw LineError{line, col_base + static_cast<int>(content.size()), "unterminated string"};
}

KeyValue split_key_value(const Line& line) {
  const std::string& content = line.content;
  const int col_base = line.indent * 2 + 1;
  KeyValue kv;
  std::size_t pos = 0;
  if (!content.empty() && content[0] == '"') {
    kv.key = read_quoted(content, pos, line.number, col_base);
    kv.quoted_key = true;
  } else {
    std::size_t colon = content.find(':');
    if (colon == std::string::npos) {
      throw LineError{line.number, col_base, "expected `key:` or `key: value`"};
    }
    kv.key = content.substr(0, colon);
    pos = colon;
  }
  if (pos >= content.size() || content[pos] != ':') {
    throw LineError{line.number, col_base + static_cast<int>(pos), "expected `:` after key"};
  }
  ++pos;
  if (pos == content.size()) {
    return kv;  // block intro
  }
  if (content[pos] != ' ') {
    throw LineError{line.number, col_base + static_cast<int>(pos), "expected a space after `:`"};
  }
  ++pos;
  if (pos == content.size()) {
    throw LineError{line.number, col_base + static_cast<int>(pos), "missing value after `:`"};
  }
  kv.value = content.substr(pos);
  kv.value_column = col_base + static_cast<int>(pos);
  return kv;
}

}  // namespace ipricing::lineformat
