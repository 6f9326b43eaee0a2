#include "ipricing/document.hpp"

#include <regex>

#include "doctest.h"
#include "support/paths.hpp"
#include "support/random_model.hpp"
#include "support/zoom_model.hpp"

using namespace ipricing;

namespace {

Pricing minimal_model() {
  Pricing p;
  p.saas_name = "Tiny";
  p.source_url = "https://tiny.test/pricing";
  p.extraction_date = Date{2024, 1, 1};
  p.currency = "USD";
  Feature f;
  f.name = "Reports";
  f.value_type = ValueType::Boolean;
  f.default_value = false;
  p.features.push_back(f);
  Plan plan;
  plan.name = "Solo";
  plan.monthly_price = Price::free();
  plan.currency = "USD";
  plan.feature_values["Reports"] = true;
  p.plans.push_back(plan);
  return p;
}

}  // namespace

TEST_CASE("minimal model matches the committed golden file") {
  std::string expected = testing::read_file(testing::fixture("golden/minimal.pricing.yml"));
  CHECK(doc::serialize(minimal_model()) == expected);

  auto parsed = doc::parse(expected);
  REQUIRE(parsed.ok());
  CHECK(*parsed.pricing == minimal_model());
}

TEST_CASE("serialization is byte-deterministic") {
  Pricing p = testing::zoom_pricing();
  CHECK(doc::serialize(p) == doc::serialize(p));
}

TEST_CASE("reference model round-trips exactly") {
  Pricing p = testing::zoom_pricing();
  auto parsed = doc::parse(doc::serialize(p));
  REQUIRE(parsed.ok());
  CHECK(*parsed.pricing == p);
}

TEST_CASE("random valid models round-trip") {
  testing::ModelGen gen(4242);
  for (int i = 0; i < 50; ++i) {
    Pricing p = gen.pricing();
    std::string text = doc::serialize(p);
    auto parsed = doc::parse(text);
    REQUIRE_MESSAGE(parsed.syntax_ok(), "model #", i, " failed: ",
                    parsed.issues.empty() ? "" : parsed.issues[0].message);
    CHECK(*parsed.pricing == p);
    CHECK(summarize(*parsed.pricing) == summarize(p));
    CHECK(doc::serialize(*parsed.pricing) == text);
  }
}

TEST_CASE("empty text is a positioned syntax error") {
  auto result = doc::parse("");
  CHECK_FALSE(result.syntax_ok());
  REQUIRE(result.issues.size() == 1);
  CHECK(result.issues[0].line == 1);
  CHECK(result.issues[0].column == 1);
}

TEST_CASE("syntax errors carry line and column") {
  auto result = doc::parse("saasName: \"X\"\nsyntaxVersion \"broken\"\n");
  REQUIRE_FALSE(result.syntax_ok());
  CHECK(result.issues[0].line == 2);

  auto tabbed = doc::parse("saasName: \"X\"\n\tindent: 1\n");
  REQUIRE_FALSE(tabbed.syntax_ok());
  CHECK(tabbed.issues[0].line == 2);

  auto unknown = doc::parse(
      "saasName: \"X\"\nsyntaxVersion: \"ip/1\"\nsourceUrl: \"u\"\n"
      "extractionDate: 2024-01-01\ncurrency: USD\nmystery: 4\n");
  REQUIRE_FALSE(unknown.syntax_ok());
  CHECK(unknown.issues[0].line == 6);

  auto bad_date = doc::parse("saasName: \"X\"\nextractionDate: 2024-13-40\n");
  REQUIRE_FALSE(bad_date.syntax_ok());
  CHECK(bad_date.issues[0].line == 2);
  CHECK(bad_date.issues[0].column == 17);
}

TEST_CASE("semantic problems surface through validation, not syntax") {
  std::string text =
      "saasName: \"X\"\n"
      "syntaxVersion: \"ip/1\"\n"
      "sourceUrl: \"u\"\n"
      "extractionDate: 2024-01-01\n"
      "currency: USD\n"
      "plans:\n"
      "  - name: \"Pro\"\n"
      "    monthlyPrice: 10.00\n"
      "  - name: \"pro\"\n"
      "    monthlyPrice: 12.00\n";
  auto result = doc::parse(text);
  REQUIRE(result.syntax_ok());
  CHECK_FALSE(result.ok());
  CHECK(result.validation.count(codes::kDuplicatePlan) == 1);
}

TEST_CASE("log lines follow the documented grammar") {
  DiagnosticsLedger ledger;
  CHECK(doc::write_log(ledger).empty());

  ledger.add(std::string(codes::kDuplicateMerged), Severity::Warning,
             "merged duplicate \"pro\"", "plans", "pro");
  std::string one = doc::write_log(ledger);
  CHECK(one == "WARNING DUPLICATE_MERGED [plans/pro] merged duplicate \"pro\"\n");

  ledger.add(std::string(codes::kUngroundedItem), Severity::Warning, "no textual support",
             "features", "quantum tier", "nearest: quantum leap");
  std::string two = doc::write_log(ledger);
  std::regex grammar(R"((WARNING|ERROR) [A-Z_]+ \[[^\]/]+(/[^\]]+)?\] [^\n]+)");
  std::istringstream lines(two);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK_MESSAGE(std::regex_match(line, grammar), "line was: ", line);
    ++count;
  }
  CHECK(count == 2);
  CHECK(two.find(" \xe2\x80\x94 nearest: quantum leap") != std::string::npos);
}
