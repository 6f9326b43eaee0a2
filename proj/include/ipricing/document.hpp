#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipricing/diagnostics.hpp"
#include "ipricing/model.hpp"

// Reading and writing the pricing document format (see docs/format.md) and
// the diagnostics log. Serialization is total and deterministic for valid
// models; nothing here ever consults the clock.
namespace ipricing::doc {

std::string serialize(const Pricing& p);

struct ParseIssue {
  int line = 0;
  int column = 0;
  std::string message;

  friend bool operator==(const ParseIssue&, const ParseIssue&) = default;
};

struct ParseResult {
  std::optional<Pricing> pricing;   // set when the text is syntactically well-formed
  std::vector<ParseIssue> issues;   // SYNTAX_ERROR positions
  DiagnosticsLedger validation;     // SEMANTIC findings from validate_model

  bool syntax_ok() const { return pricing.has_value(); }
  bool ok() const { return syntax_ok() && !validation.has_errors(); }
};

ParseResult parse(std::string_view text);

// One line per entry: `SEVERITY CODE [category/item] message — evidence?`
std::string write_log(const DiagnosticsLedger& ledger);

std::string quote(std::string_view s);

}  // namespace ipricing::doc
