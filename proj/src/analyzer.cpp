#include <algorithm>

#include "lexica/error.hpp"
#include "lexica/textproc.hpp"
#include "unicode.hpp"

namespace lexica {

std::string_view to_string(AnalyzerKind kind) {
    switch (kind) {
    case AnalyzerKind::SA:
        return "sa";
    case AnalyzerKind::STM1:
        return "stm1";
    case AnalyzerKind::STM2:
        return "stm2";
    case AnalyzerKind::Subword:
        return "subword";
    }
    return "?";
}

AnalyzerKind parse_analyzer_kind(std::string_view name) {
    if (name == "sa") return AnalyzerKind::SA;
    if (name == "stm1") return AnalyzerKind::STM1;
    if (name == "stm2") return AnalyzerKind::STM2;
    if (name == "subword") return AnalyzerKind::Subword;
    throw ConfigError("unknown analyzer \"" + std::string(name) + "\"");
}

namespace {

// Longest token the standard tokenizer emits before splitting.
constexpr std::size_t kMaxStandardTokenChars = 255;

std::string lower_simple(std::string_view utf8) {
    std::string out;
    out.reserve(utf8.size());
    for (char32_t c : unicode::decode(utf8)) {
        unicode::append(out, unicode::lower_simple(c));
    }
    return out;
}

bool is_hiragana(char32_t c) { return c >= 0x3040 && c <= 0x309F; }

// ICU joins ideographs into dictionary words; the standard tokenizer emits
// each ideograph and hiragana character on its own.
void push_standard(std::vector<std::string>& out, std::u32string_view cps) {
    for (std::size_t i = 0; i < cps.size(); i += kMaxStandardTokenChars) {
        out.push_back(unicode::encode(cps.substr(i, kMaxStandardTokenChars)));
    }
}

std::vector<std::string> standard_segments(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& seg : unicode::word_segments(text)) {
        const auto cps = unicode::decode(seg);
        std::size_t start = 0;
        for (std::size_t i = 0; i < cps.size(); ++i) {
            if (unicode::is_cjk(cps[i]) || is_hiragana(cps[i])) {
                push_standard(out, std::u32string_view(cps).substr(start, i - start));
                push_standard(out, std::u32string_view(cps).substr(i, 1));
                start = i + 1;
            }
        }
        push_standard(out, std::u32string_view(cps).substr(start));
    }
    return out;
}

std::vector<std::string> whitespace_segments(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char32_t c : unicode::decode(text)) {
        if (unicode::is_java_whitespace(c)) {
            if (!cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            unicode::append(cur, c);
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

// BERT basic tokenization: drop control characters, isolate CJK ideographs and
// punctuation, split on whitespace, optionally lowercase and strip accents.
std::vector<std::u32string> basic_split(std::string_view text, bool lowercase,
                                        bool strip_accents) {
    std::vector<std::u32string> words;
    std::u32string cur;
    auto flush = [&] {
        if (cur.empty()) {
            return;
        }
        auto w = lowercase ? unicode::lower_full(cur) : cur;
        if (strip_accents) {
            w = unicode::strip_accents(w);
        }
        // punctuation is isolated after normalization
        std::u32string piece;
        for (char32_t c : w) {
            if (unicode::is_punctuation(c)) {
                if (!piece.empty()) {
                    words.push_back(std::move(piece));
                    piece.clear();
                }
                words.emplace_back(1, c);
            } else {
                piece.push_back(c);
            }
        }
        if (!piece.empty()) {
            words.push_back(std::move(piece));
        }
        cur.clear();
    };
    for (char32_t c : unicode::decode(text)) {
        if (c == 0 || c == 0xFFFD || unicode::is_control(c)) {
            continue;
        }
        if (unicode::is_whitespace(c)) {
            flush();
        } else if (unicode::is_cjk(c)) {
            flush();
            cur.push_back(c);
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return words;
}

}  // namespace

Analyzer::Analyzer(AnalyzerSpec spec) : spec_(std::move(spec)) {
    if (spec_.kind == AnalyzerKind::Subword) {
        if (!spec_.vocab_path) {
            throw ConfigError("subword analyzer requires a vocabulary file");
        }
        vocab_ = std::make_shared<const Vocabulary>(Vocabulary::load(*spec_.vocab_path));
    }
}

Analyzer::Analyzer(AnalyzerSpec spec, std::shared_ptr<const Vocabulary> vocab)
    : spec_(std::move(spec)), vocab_(std::move(vocab)) {
    if (spec_.kind == AnalyzerKind::Subword && !vocab_) {
        throw ConfigError("subword analyzer requires a vocabulary");
    }
}

std::vector<Token> Analyzer::analyze(std::string_view text) const {
    std::vector<Token> out;
    switch (spec_.kind) {
    case AnalyzerKind::SA:
    case AnalyzerKind::STM2:
    case AnalyzerKind::STM1: {
        auto segs = spec_.kind == AnalyzerKind::STM1 ? whitespace_segments(text)
                                                     : standard_segments(text);
        out.reserve(segs.size());
        for (auto& s : segs) {
            auto t = spec_.lowercase ? lower_simple(s) : std::move(s);
            if (spec_.kind != AnalyzerKind::SA) {
                t = porter_stem(t);
            }
            out.push_back(Token{std::move(t), std::nullopt});
        }
        break;
    }
    case AnalyzerKind::Subword: {
        for (const auto& w : basic_split(text, spec_.lowercase, spec_.strip_accents)) {
            auto pieces = wordpiece_tokenize(unicode::encode(w), *vocab_, spec_.max_word_chars);
            std::move(pieces.begin(), pieces.end(), std::back_inserter(out));
        }
        break;
    }
    }
    return out;
}

std::vector<Token> analyze(std::string_view text, const AnalyzerSpec& spec) {
    return Analyzer(spec).analyze(text);
}

std::map<std::string, std::size_t> unique_token_counts(std::span<const Token> tokens) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : tokens) {
        ++counts[t.surface];
    }
    return counts;
}

std::map<TokenId, std::size_t> unique_token_counts(std::span<const TokenId> ids) {
    std::map<TokenId, std::size_t> counts;
    for (auto id : ids) {
        ++counts[id];
    }
    return counts;
}

std::vector<TokenId> token_ids(std::span<const Token> tokens) {
    std::vector<TokenId> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!t.id) {
            throw ValidationError("token \"" + t.surface + "\" carries no vocabulary id");
        }
        ids.push_back(*t.id);
    }
    return ids;
}

}  // namespace lexica
