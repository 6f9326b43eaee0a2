#include "ipricing/text.hpp"

#include "doctest.h"

namespace text = ipricing::text;

TEST_CASE("whitespace collapse is unicode aware") {
  CHECK(text::collapse_whitespace("  a \t b\n") == "a b");
  CHECK(text::collapse_whitespace("a\xc2\xa0""b") == "a b");        // NBSP
  CHECK(text::collapse_whitespace("a\xe2\x80\x89 b") == "a b");      // thin space
  CHECK(text::collapse_whitespace("") == "");
  CHECK(text::collapse_whitespace(" \t ") == "");
}

TEST_CASE("name normalization folds case and whitespace") {
  CHECK(text::normalize_name("Pro ") == "pro");
  CHECK(text::normalize_name("  PRO\tplan ") == "pro plan");
  CHECK(text::normalize_name("Édition") == "édition");  // Latin-1 fold
  CHECK(text::normalize_name("Pro") == text::normalize_name("pro "));
}

TEST_CASE("loose normalization strips punctuation") {
  CHECK(text::normalize_loose("Add-ons, included!") == "add ons included");
  CHECK(text::normalize_loose("“Business” plan — 2024") == "business plan 2024");
  CHECK(text::normalize_loose("✓ included") == "✓ included");  // symbols survive
}

TEST_CASE("tokenize splits normalized text") {
  auto tokens = text::tokenize("business plan 2024");
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0] == "business");
  CHECK(tokens[2] == "2024");
  CHECK(text::tokenize("").empty());
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::to_hex(text::fnv1a64("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("invalid utf8 is replaced, valid passes through") {
  std::string bad = "ab\xffz";
  std::string fixed = text::sanitize_utf8(bad);
  CHECK(fixed.find('\xff') == std::string::npos);
  CHECK(fixed.find("ab") == 0);
  std::string good = "niño ✓";
  CHECK(text::sanitize_utf8(good) == good);
}
