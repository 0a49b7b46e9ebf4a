#pragma once

#include <string>
#include <string_view>

// Thin UTF-8 / code point helpers over ICU.
namespace trendscope::unicode {

/// Invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
std::string encode(char32_t cp);

bool is_letter(char32_t c);  // general category L*
bool is_mark(char32_t c);    // general category M*
bool is_digit(char32_t c);   // decimal digit (Nd)
bool is_space(char32_t c);
/// Emoji pictographs, presentation selectors, modifiers, ZWJ, keycaps and regional indicators.
bool is_emoji(char32_t c);
bool is_arabic(char32_t c);
bool is_ascii_lower_alpha(std::string_view s);

/// ASCII value of a decimal digit of any script, e.g. U+0663 -> '3'.
char ascii_digit(char32_t c);

std::u32string nfc(std::u32string_view s);
std::u32string case_fold(std::u32string_view s);

std::size_t length(std::string_view utf8);
bool contains_arabic(std::string_view utf8);

}  // namespace trendscope::unicode
