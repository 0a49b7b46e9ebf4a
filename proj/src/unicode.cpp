#include "trendscope/unicode.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "trendscope/common.h"

namespace trendscope::unicode {

std::u32string decode(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    int32_t i = 0;
    const auto n = static_cast<int32_t>(utf8.size());
    while (i < n) {
        UChar32 c;
        U8_NEXT(s, i, n, c);
        out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
    }
    return out;
}

std::string encode(char32_t cp) {
    std::string out;
    char buf[4];
    int32_t len = 0;
    UBool err = false;
    U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, 4, static_cast<UChar32>(cp), err);
    if (!err) out.append(buf, static_cast<std::size_t>(len));
    return out;
}

std::string encode(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t c : cps) out += encode(c);
    return out;
}

bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

bool is_mark(char32_t c) {
    return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

bool is_digit(char32_t c) { return u_charType(static_cast<UChar32>(c)) == U_DECIMAL_DIGIT_NUMBER; }

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_emoji(char32_t c) {
    auto cp = static_cast<UChar32>(c);
    if (c < 0x80) return false;  // '#', '*' and digits carry the Emoji property
    if (c == 0x200D || c == 0x20E3 || c == 0xFE0E || c == 0xFE0F) return true;
    if (c >= 0x1F1E6 && c <= 0x1F1FF) return true;  // regional indicators
    if (c >= 0xE0020 && c <= 0xE007F) return true;  // tag sequences
    return u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) ||
           u_hasBinaryProperty(cp, UCHAR_EMOJI_PRESENTATION) ||
           u_hasBinaryProperty(cp, UCHAR_EMOJI_MODIFIER) ||
           u_hasBinaryProperty(cp, UCHAR_EMOJI_COMPONENT);
}

bool is_arabic(char32_t c) {
    return (c >= 0x0600 && c <= 0x06FF) || (c >= 0x0750 && c <= 0x077F) ||
           (c >= 0x08A0 && c <= 0x08FF) || (c >= 0xFB50 && c <= 0xFDFF) ||
           (c >= 0xFE70 && c <= 0xFEFF);
}

bool is_ascii_lower_alpha(std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (ch < 'a' || ch > 'z') return false;
    return true;
}

char ascii_digit(char32_t c) {
    auto v = u_charDigitValue(static_cast<UChar32>(c));
    return v < 0 ? '?' : static_cast<char>('0' + v);
}

namespace {

icu::UnicodeString to_icu(std::u32string_view s) {
    return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()),
                                         static_cast<int32_t>(s.size()));
}

std::u32string from_icu(const icu::UnicodeString& u) {
    UErrorCode status = U_ZERO_ERROR;
    std::u32string out(static_cast<std::size_t>(u.countChar32()), U'\0');
    u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), status);
    if (U_FAILURE(status)) fail(ErrorKind::Internal, "UTF-32 conversion failed");
    return out;
}

}  // namespace

std::u32string nfc(std::u32string_view s) {
    UErrorCode status = U_ZERO_ERROR;
    const auto* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) fail(ErrorKind::Internal, "ICU NFC normalizer unavailable");
    auto out = norm->normalize(to_icu(s), status);
    if (U_FAILURE(status)) fail(ErrorKind::Internal, "NFC normalization failed");
    return from_icu(out);
}

std::u32string case_fold(std::u32string_view s) {
    auto u = to_icu(s);
    u.foldCase(U_FOLD_CASE_DEFAULT);
    return from_icu(u);
}

std::size_t length(std::string_view utf8) { return decode(utf8).size(); }

bool contains_arabic(std::string_view utf8) {
    for (char32_t c : decode(utf8))
        if (is_arabic(c)) return true;
    return false;
}

}  // namespace trendscope::unicode
