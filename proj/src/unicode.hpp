#pragma once

#include <string>
#include <string_view>
#include <vector>

// ICU-backed helpers shared by the analyzers. Text crosses this boundary as
// UTF-8; ill-formed bytes decode to U+FFFD.
namespace lexica::unicode {

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

/// Simple per-code-point lowercase mapping (what token filters apply).
char32_t lower_simple(char32_t cp);

/// Full lowercase mapping, which may change the string length.
std::u32string lower_full(std::u32string_view text);

/// Canonical decomposition with combining marks (Mn) removed.
std::u32string strip_accents(std::u32string_view text);

bool is_whitespace(char32_t cp);
bool is_java_whitespace(char32_t cp);
bool is_control(char32_t cp);
bool is_punctuation(char32_t cp);
bool is_cjk(char32_t cp);

/// Word segments by Unicode word-boundary rules, keeping only segments that
/// contain letters, digits, kana or ideographs.
std::vector<std::string> word_segments(std::string_view utf8);

}  // namespace lexica::unicode
