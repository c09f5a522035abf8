#include "unicode.hpp"

#include <unicode/brkiter.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <memory>

#include "lexica/error.hpp"

namespace lexica::unicode {

std::u32string decode(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto len = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < len) {
        UChar32 c;
        U8_NEXT(s, i, len, c);
        out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
    }
    return out;
}

void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        append(out, cp);
    }
    return out;
}

char32_t lower_simple(char32_t cp) {
    return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

namespace {

icu::UnicodeString to_icu(std::u32string_view text) {
    return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(text.data()),
                                         static_cast<int32_t>(text.size()));
}

std::u32string from_icu(const icu::UnicodeString& s) {
    std::u32string out;
    out.reserve(static_cast<std::size_t>(s.length()));
    for (int32_t i = 0; i < s.length();) {
        UChar32 c = s.char32At(i);
        out.push_back(static_cast<char32_t>(c));
        i += U16_LENGTH(c);
    }
    return out;
}

bool all_ascii(std::u32string_view text) {
    for (char32_t c : text) {
        if (c >= 0x80) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::u32string lower_full(std::u32string_view text) {
    if (all_ascii(text)) {
        std::u32string out(text);
        for (auto& c : out) {
            if (c >= U'A' && c <= U'Z') {
                c += 32;
            }
        }
        return out;
    }
    auto s = to_icu(text);
    s.toLower(icu::Locale::getRoot());
    return from_icu(s);
}

std::u32string strip_accents(std::u32string_view text) {
    if (all_ascii(text)) {
        return std::u32string(text);
    }
    UErrorCode status = U_ZERO_ERROR;
    const auto* nfd = icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status)) {
        throw ConfigError(std::string("ICU NFD normalizer unavailable: ") + u_errorName(status));
    }
    auto decomposed = nfd->normalize(to_icu(text), status);
    if (U_FAILURE(status)) {
        throw ConfigError(std::string("NFD normalization failed: ") + u_errorName(status));
    }
    std::u32string out;
    for (char32_t c : from_icu(decomposed)) {
        if (u_charType(static_cast<UChar32>(c)) != U_NON_SPACING_MARK) {
            out.push_back(c);
        }
    }
    return out;
}

bool is_whitespace(char32_t cp) {
    if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r') {
        return true;
    }
    return u_charType(static_cast<UChar32>(cp)) == U_SPACE_SEPARATOR;
}

bool is_java_whitespace(char32_t cp) { return u_isJavaSpaceChar(static_cast<UChar32>(cp)) ||
                                              (cp >= 0x09 && cp <= 0x0D) ||
                                              (cp >= 0x1C && cp <= 0x1F); }

bool is_control(char32_t cp) {
    if (cp == U'\t' || cp == U'\n' || cp == U'\r') {
        return false;
    }
    const auto t = u_charType(static_cast<UChar32>(cp));
    return t == U_CONTROL_CHAR || t == U_FORMAT_CHAR;
}

bool is_punctuation(char32_t cp) {
    if ((cp >= 33 && cp <= 47) || (cp >= 58 && cp <= 64) || (cp >= 91 && cp <= 96) ||
        (cp >= 123 && cp <= 126)) {
        return true;
    }
    return (U_GET_GC_MASK(static_cast<UChar32>(cp)) & U_GC_P_MASK) != 0;
}

bool is_cjk(char32_t cp) {
    return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
           (cp >= 0x20000 && cp <= 0x2A6DF) || (cp >= 0x2A700 && cp <= 0x2B73F) ||
           (cp >= 0x2B740 && cp <= 0x2B81F) || (cp >= 0x2B820 && cp <= 0x2CEAF) ||
           (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x2F800 && cp <= 0x2FA1F);
}

namespace {

struct BreakIteratorDeleter {
    void operator()(icu::BreakIterator* p) const { delete p; }
};

// Break iterators are not thread-safe; each thread keeps its own.
icu::BreakIterator& thread_word_iterator() {
    thread_local std::unique_ptr<icu::BreakIterator, BreakIteratorDeleter> it = [] {
        UErrorCode status = U_ZERO_ERROR;
        std::unique_ptr<icu::BreakIterator, BreakIteratorDeleter> p(
            icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
        if (U_FAILURE(status) || !p) {
            throw ConfigError(std::string("ICU word break iterator unavailable: ") +
                              u_errorName(status));
        }
        return p;
    }();
    return *it;
}

}  // namespace

std::vector<std::string> word_segments(std::string_view utf8) {
    std::vector<std::string> out;
    if (utf8.empty()) {
        return out;
    }
    const auto text = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    auto& it = thread_word_iterator();
    it.setText(text);
    int32_t start = it.first();
    for (int32_t end = it.next(); end != icu::BreakIterator::DONE; start = end, end = it.next()) {
        if (it.getRuleStatus() < UBRK_WORD_NONE_LIMIT) {
            continue;
        }
        std::string piece;
        text.tempSubStringBetween(start, end).toUTF8String(piece);
        out.push_back(std::move(piece));
    }
    return out;
}

}  // namespace lexica::unicode
