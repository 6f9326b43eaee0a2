#pragma once

// Shared line scanner for the indentation-based text formats (pricing
// documents, gold annotations, constraint files). Two-space indents, full-line
// `#` comments, double-quoted strings with backslash escapes.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ipricing::lineformat {

struct LineError {
  int line;
  int column;
  std::string message;
};

struct Line {
  int number = 0;   // 1-based
  int indent = 0;   // in 2-space units
  std::string content;
};

// Splits into significant lines; rejects tabs and odd indentation.
std::vector<Line> scan(std::string_view text);

// Parses a double-quoted string starting at content[pos]; advances pos past
// the closing quote. `line`/`col_base` locate errors.
std::string read_quoted(std::string_view content, std::size_t& pos, int line, int col_base);

struct KeyValue {
  std::string key;
  bool quoted_key = false;
  std::optional<std::string> value;  // nullopt for block intro "key:"
  int value_column = 0;              // 1-based column where the value starts
};

KeyValue split_key_value(const Line& line);

}  // namespace ipricing::lineformat
