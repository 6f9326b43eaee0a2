#include <set>

#include "ipricing/document.hpp"
#include "ipricing/text.hpp"
#include "lineformat.hpp"

namespace ipricing::doc {

namespace lf = lineformat;

namespace {

class Parser {
 public:
  explicit Parser(std::string_view source) : lines_(lf::scan(source)) {}

  Pricing parse() {
    if (lines_.empty()) throw lf::LineError{1, 1, "empty document"};
    Pricing p;
    p.syntax_version.clear();
    p.currency.clear();
    std::set<std::string> seen;
    bool have_date = false;
    while (pos_ < lines_.size()) {
      const lf::Line& line = current();
      if (line.indent != 0) {
        throw lf::LineError{line.number, 1, "unexpected indentation at document level"};
      }
      lf::KeyValue kv = lf::split_key_value(line);
      if (!seen.insert(kv.key).second) {
        throw lf::LineError{line.number, 1, "duplicate key `" + kv.key + "`"};
      }
      if (kv.key == "saasName") {
        p.saas_name = scalar_string(kv, line);
      } else if (kv.key == "syntaxVersion") {
        p.syntax_version = scalar_string(kv, line);
      } else if (kv.key == "sourceUrl") {
        p.source_url = scalar_string(kv, line);
      } else if (kv.key == "extractionDate") {
        p.extraction_date = scalar_date(kv, line);
        have_date = true;
      } else if (kv.key == "currency") {
        p.currency = scalar_word(kv, line);
      } else if (kv.key == "features") {
        expect_block(kv, line);
        ++pos_;
        parse_features(p);
        continue;
      } else if (kv.key == "usageLimits") {
        expect_block(kv, line);
        ++pos_;
        parse_usage_limits(p);
        continue;
      } else if (kv.key == "plans") {
        expect_block(kv, line);
        ++pos_;
        parse_plans(p);
        continue;
      } else if (kv.key == "addOns") {
        expect_block(kv, line);
        ++pos_;
        parse_add_ons(p);
        continue;
      } else {
        throw lf::LineError{line.number, 1, "unknown key `" + kv.key + "`"};
      }
      ++pos_;
    }
    if (!seen.count("saasName")) throw lf::LineError{last_line(), 1, "missing key `saasName`"};
    if (!seen.count("syntaxVersion")) throw lf::LineError{last_line(), 1, "missing key `syntaxVersion`"};
    if (!seen.count("sourceUrl")) throw lf::LineError{last_line(), 1, "missing key `sourceUrl`"};
    if (!have_date) throw lf::LineError{last_line(), 1, "missing key `extractionDate`"};
    if (!seen.count("currency")) throw lf::LineError{last_line(), 1, "missing key `currency`"};
    // Plans without an explicit currency inherit the document currency.
    for (Plan& plan : p.plans) {
      if (plan.currency.empty()) plan.currency = p.currency;
    }
    return p;
  }

 private:
  const lf::Line& current() const { return lines_[pos_]; }
  bool done() const { return pos_ >= lines_.size(); }
  int last_line() const { return lines_.empty() ? 1 : lines_.back().number; }

  // Rewrites a `- key: value` line as a field line one level deeper, so item
  // fields can be read with a single loop.
  bool open_item(int list_indent) {
    if (done()) return false;
    const lf::Line& line = current();
    if (line.indent != list_indent || line.content.rfind("- ", 0) != 0) return false;
    lines_[pos_] = lf::Line{line.number, line.indent + 1, line.content.substr(2)};
    return true;
  }

  [[noreturn]] void fail(const lf::Line& line, const std::string& message) const {
    throw lf::LineError{line.number, line.indent * 2 + 1, message};
  }

  void expect_block(const lf::KeyValue& kv, const lf::Line& line) const {
    if (kv.value) fail(line, "`" + kv.key + "` expects an indented block");
  }

  std::string need_value(const lf::KeyValue& kv, const lf::Line& line) const {
    if (!kv.value) fail(line, "`" + kv.key + "` expects a value");
    return *kv.value;
  }

  std::string scalar_string(const lf::KeyValue& kv, const lf::Line& line) const {
    std::string value = need_value(kv, line);
    std::size_t pos = 0;
    std::string out = lf::read_quoted(value, pos, line.number, kv.value_column);
    if (pos != value.size()) {
      throw lf::LineError{line.number, kv.value_column + static_cast<int>(pos),
                          "trailing characters after string"};
    }
    return out;
  }

  std::string scalar_word(const lf::KeyValue& kv, const lf::Line& line) const {
    return need_value(kv, line);
  }

  Date scalar_date(const lf::KeyValue& kv, const lf::Line& line) const {
    std::string value = need_value(kv, line);
    auto date = Date::parse(value);
    if (!date) {
      throw lf::LineError{line.number, kv.value_column, "expected a date as YYYY-MM-DD"};
    }
    return *date;
  }

  bool scalar_bool(const lf::KeyValue& kv, const lf::Line& line) const {
    std::string value = need_value(kv, line);
    if (value == "true") return true;
    if (value == "false") return false;
    throw lf::LineError{line.number, kv.value_column, "expected true or false"};
  }

  Price parse_price(const std::string& value, const lf::Line& line, int col) const {
    if (value == "free") return Price::free();
    if (value == "contact_sales") return Price::contact_sales();
    if (auto d = Decimal::parse(value)) return Price::money(*d);
    throw lf::LineError{line.number, col, "expected a decimal price, `free`, or `contact_sales`"};
  }

  LimitValue parse_limit(const std::string& value, const lf::Line& line, int col) const {
    if (value == "unlimited") return Unlimited{};
    std::size_t space = value.find(' ');
    std::string number = space == std::string::npos ? value : value.substr(0, space);
    auto amount = Decimal::parse(number);
    if (!amount) {
      throw lf::LineError{line.number, col, "expected `<number> <unit>` or `unlimited`"};
    }
    if (space == std::string::npos || space + 1 >= value.size()) {
      throw lf::LineError{line.number, col, "finite limit requires a unit after the number"};
    }
    return FiniteLimit{*amount, value.substr(space + 1)};
  }

  FeatureValue parse_feature_value(const std::string& value, const lf::Line& line,
                                   int col) const {
    if (value == "true") return true;
    if (value == "false") return false;
    if (!value.empty() && value[0] == '"') {
      std::size_t pos = 0;
      std::string out = lf::read_quoted(value, pos, line.number, col);
      if (pos != value.size()) {
        throw lf::LineError{line.number, col + static_cast<int>(pos),
                            "trailing characters after string"};
      }
      return out;
    }
    if (auto d = Decimal::parse(value)) return *d;
    throw lf::LineError{line.number, col, "expected true/false, a quoted string, or a number"};
  }

  std::vector<std::string> parse_string_list(int list_indent) {
    std::vector<std::string> out;
    while (!done() && current().indent == list_indent &&
           current().content.rfind("- ", 0) == 0) {
      const lf::Line& line = current();
      std::string value = line.content.substr(2);
      std::size_t pos = 0;
      out.push_back(lf::read_quoted(value, pos, line.number, line.indent * 2 + 3));
      if (pos != value.size()) fail(line, "trailing characters after string");
      ++pos_;
    }
    if (out.empty() && !done()) fail(current(), "expected a `- \"name\"` list entry");
    return out;
  }

  template <typename Value, typename ParseValue>
  std::map<std::string, Value> parse_override_map(int entry_indent, ParseValue parse_value) {
    std::map<std::string, Value> out;
    while (!done() && current().indent == entry_indent && current().content[0] == '"') {
      const lf::Line& line = current();
      lf::KeyValue kv = lf::split_key_value(line);
      if (!kv.quoted_key) fail(line, "override keys must be quoted");
      std::string raw = need_value(kv, line);
      out[kv.key] = parse_value(raw, line, kv.value_column);
      ++pos_;
    }
    return out;
  }

  void parse_features(Pricing& p) {
    while (open_item(1)) {
      Feature f;
      std::set<std::string> seen;
      bool have_type = false, have_default = false;
      std::string default_raw;
      lf::Line default_line{};
      int default_col = 0;
      while (!done() && current().indent == 2) {
        const lf::Line& line = current();
        lf::KeyValue kv = lf::split_key_value(line);
        if (!seen.insert(kv.key).second) fail(line, "duplicate key `" + kv.key + "`");
        if (kv.key == "name") {
          f.name = scalar_string(kv, line);
        } else if (kv.key == "description") {
          f.description = scalar_string(kv, line);
        } else if (kv.key == "valueType") {
          std::string t = need_value(kv, line);
          if (t == "boolean") f.value_type = ValueType::Boolean;
          else if (t == "text") f.value_type = ValueType::Text;
          else if (t == "numeric") f.value_type = ValueType::Numeric;
          else throw lf::LineError{line.number, kv.value_column, "expected boolean, text, or numeric"};
          have_type = true;
        } else if (kv.key == "defaultValue") {
          default_raw = need_value(kv, line);
          default_line = line;
          default_col = kv.value_column;
          have_default = true;
        } else {
          fail(line, "unknown feature key `" + kv.key + "`");
        }
        ++pos_;
      }
      if (!seen.count("name")) fail(lines_[pos_ - 1], "feature is missing `name`");
      if (!have_type) fail(lines_[pos_ - 1], "feature is missing `valueType`");
      if (!have_default) fail(lines_[pos_ - 1], "feature is missing `defaultValue`");
      f.default_value = parse_feature_value(default_raw, default_line, default_col);
      p.features.push_back(std::move(f));
    }
  }

  void parse_usage_limits(Pricing& p) {
    while (open_item(1)) {
      UsageLimit u;
      std::set<std::string> seen;
      while (!done() && current().indent == 2) {
        const lf::Line& line = current();
        lf::KeyValue kv = lf::split_key_value(line);
        if (!seen.insert(kv.key).second) fail(line, "duplicate key `" + kv.key + "`");
        if (kv.key == "name") {
          u.name = scalar_string(kv, line);
          ++pos_;
        } else if (kv.key == "value") {
          u.value = parse_limit(need_value(kv, line), line, kv.value_column);
          ++pos_;
        } else if (kv.key == "linkedFeatures") {
          expect_block(kv, line);
          ++pos_;
          u.linked_features = parse_string_list(3);
        } else {
          fail(line, "unknown usage limit key `" + kv.key + "`");
        }
      }
      if (!seen.count("name")) fail(lines_[pos_ - 1], "usage limit is missing `name`");
      if (!seen.count("value")) fail(lines_[pos_ - 1], "usage limit is missing `value`");
      p.usage_limits.push_back(std::move(u));
    }
  }

  void parse_plans(Pricing& p) {
    while (open_item(1)) {
      Plan plan;
      std::set<std::string> seen;
      while (!done() && current().indent == 2) {
        const lf::Line& line = current();
        lf::KeyValue kv = lf::split_key_value(line);
        if (kv.quoted_key) fail(line, "unexpected quoted key in plan");
        if (!seen.insert(kv.key).second) fail(line, "duplicate key `" + kv.key + "`");
        if (kv.key == "name") {
          plan.name = scalar_string(kv, line);
          ++pos_;
        } else if (kv.key == "monthlyPrice") {
          plan.monthly_price = parse_price(need_value(kv, line), line, kv.value_column);
          ++pos_;
        } else if (kv.key == "annualPrice") {
          plan.annual_price = parse_price(need_value(kv, line), line, kv.value_column);
          ++pos_;
        } else if (kv.key == "currency") {
          plan.currency = scalar_word(kv, line);
          ++pos_;
        } else if (kv.key == "features") {
          expect_block(kv, line);
          ++pos_;
          plan.feature_values = parse_override_map<FeatureValue>(
              3, [this](const std::string& raw, const lf::Line& l, int col) {
                return parse_feature_value(raw, l, col);
              });
        } else if (kv.key == "usageLimits") {
          expect_block(kv, line);
          ++pos_;
          plan.usage_limit_values = parse_override_map<LimitValue>(
              3, [this](const std::string& raw, const lf::Line& l, int col) {
                return parse_limit(raw, l, col);
              });
        } else {
          fail(line, "unknown plan key `" + kv.key + "`");
        }
      }
      if (!seen.count("name")) fail(lines_[pos_ - 1], "plan is missing `name`");
      if (!seen.count("monthlyPrice")) fail(lines_[pos_ - 1], "plan is missing `monthlyPrice`");
      p.plans.push_back(std::move(plan));
    }
  }

  void parse_add_ons(Pricing& p) {
    while (open_item(1)) {
      AddOn a;
      std::set<std::string> seen;
      bool have_availability = false;
      while (!done() && current().indent == 2) {
        const lf::Line& line = current();
        lf::KeyValue kv = lf::split_key_value(line);
        if (kv.quoted_key) fail(line, "unexpected quoted key in add-on");
        if (!seen.insert(kv.key).second) fail(line, "duplicate key `" + kv.key + "`");
        if (kv.key == "name") {
          a.name = scalar_string(kv, line);
          ++pos_;
        } else if (kv.key == "price") {
          a.price = parse_price(need_value(kv, line), line, kv.value_column);
          ++pos_;
        } else if (kv.key == "unit") {
          a.unit = scalar_string(kv, line);
          ++pos_;
        } else if (kv.key == "availableFor") {
          have_availability = true;
          if (kv.value) {
            if (*kv.value == "all") {
              a.available_for.all_plans = true;
            } else if (*kv.value == "none") {
              a.available_for.all_plans = false;
            } else {
              throw lf::LineError{line.number, kv.value_column,
                                  "expected `all`, `none`, or an indented plan list"};
            }
            ++pos_;
          } else {
            ++pos_;
            a.available_for.plans = parse_string_list(3);
          }
        } else if (kv.key == "standalone") {
          a.standalone = scalar_bool(kv, line);
          ++pos_;
        } else if (kv.key == "features") {
          expect_block(kv, line);
          ++pos_;
          a.feature_values = parse_override_map<FeatureValue>(
              3, [this](const std::string& raw, const lf::Line& l, int col) {
                return parse_feature_value(raw, l, col);
              });
        } else if (kv.key == "usageLimits") {
          expect_block(kv, line);
          ++pos_;
          a.usage_limit_values = parse_override_map<LimitValue>(
              3, [this](const std::string& raw, const lf::Line& l, int col) {
                return parse_limit(raw, l, col);
              });
        } else if (kv.key == "usageLimitExtensions") {
          expect_block(kv, line);
          ++pos_;
          a.usage_limit_extensions = parse_override_map<LimitValue>(
              3, [this](const std::string& raw, const lf::Line& l, int col) {
                return parse_limit(raw, l, col);
              });
        } else {
          fail(line, "unknown add-on key `" + kv.key + "`");
        }
      }
      if (!seen.count("name")) fail(lines_[pos_ - 1], "add-on is missing `name`");
      if (!seen.count("price")) fail(lines_[pos_ - 1], "add-on is missing `price`");
      if (!have_availability) fail(lines_[pos_ - 1], "add-on is missing `availableFor`");
      p.add_ons.push_back(std::move(a));
    }
  }

  std::vector<lf::Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  try {
    Parser parser(source);
    result.pricing = parser.parse();
  } catch (const lf::LineError& e) {
    result.issues.push_back(ParseIssue{e.line, e.column, e.message});
    return result;
  }
  result.validation = validate_model(*result.pricing);
  return result;
}

}  // namespace ipricing::doc
