#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Text normalization shared by the whole pipeline. Name equality is
// case-insensitive with Unicode-aware whitespace handling; grounding adds
// punctuation stripping on top.
namespace ipricing::text {

// Decodes the code point starting at `pos`; advances `pos`. Invalid bytes
// decode to U+FFFD and advance by one.
char32_t decode_utf8(std::string_view s, std::size_t& pos);
void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);        // ASCII ws + NBSP, ogham, en/em spaces, etc.
bool is_punctuation(char32_t cp);  // ASCII punct + common typographic marks

// ASCII + Latin-1 lowercasing; other code points pass through.
char32_t fold_case(char32_t cp);

// Collapses whitespace runs to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view s);
std::string fold_case(std::string_view s);

// Canonical key for name equality: fold_case + collapse_whitespace.
std::string normalize_name(std::string_view s);

// Grounding normalization: normalize_name + punctuation stripped.
std::string normalize_loose(std::string_view s);

std::vector<std::string> tokenize(std::string_view normalized);

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

// Replaces invalid UTF-8 sequences with U+FFFD; valid input is returned as-is.
std::string sanitize_utf8(std::string_view s);

}  // namespace ipricing::text
