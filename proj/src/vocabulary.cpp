#include <string>

#include "lexica/error.hpp"
#include "lexica/io_util.hpp"
#include "lexica/textproc.hpp"
#include "unicode.hpp"

namespace lexica {

namespace {

bool looks_special(std::string_view t) {
    if (t.size() < 3 || t.front() != '[' || t.back() != ']') {
        return false;
    }
    for (char c : t.substr(1, t.size() - 2)) {
        if (c == '[' || c == ']' || c == ' ') {
            return false;
        }
    }
    return true;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::string unk_token,
                       std::string continuation_prefix)
    : tokens_(std::move(tokens)), continuation_prefix_(std::move(continuation_prefix)) {
    ids_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        const auto& t = tokens_[i];
        if (t.empty()) {
            throw ValidationError("vocabulary entry " + std::to_string(i) + " is empty");
        }
        if (!ids_.emplace(t, static_cast<TokenId>(i)).second) {
            throw ValidationError("vocabulary token \"" + t + "\" repeated at id " +
                                  std::to_string(i));
        }
        if (looks_special(t)) {
            special_.insert(static_cast<TokenId>(i));
        }
    }
    auto unk = ids_.find(unk_token);
    if (unk == ids_.end()) {
        throw ConfigError("vocabulary lacks the unknown token \"" + unk_token + "\"");
    }
    unk_id_ = unk->second;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
    auto lines = io::read_lines(path);
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    try {
        return Vocabulary(std::move(lines));
    } catch (const Error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
    auto it = ids_.find(token);
    if (it == ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool Vocabulary::is_special(TokenId id) const { return special_.contains(id); }

bool Vocabulary::is_continuation(TokenId id) const {
    return !continuation_prefix_.empty() && id < tokens_.size() &&
           tokens_[id].starts_with(continuation_prefix_);
}

std::vector<Token> wordpiece_tokenize(std::string_view word, const Vocabulary& vocab,
                                      int max_word_chars) {
    const auto chars = unicode::decode(word);
    if (chars.empty()) {
        return {};
    }
    if (static_cast<long>(chars.size()) > max_word_chars) {
        return {Token{vocab.unk_token(), vocab.unk_id()}};
    }
    std::vector<Token> pieces;
    std::string candidate;
    std::size_t start = 0;
    while (start < chars.size()) {
        std::size_t end = chars.size();
        std::optional<TokenId> match;
        std::string matched;
        while (start < end) {
            candidate.clear();
            if (start > 0) {
                candidate = vocab.continuation_prefix();
            }
            for (std::size_t i = start; i < end; ++i) {
                unicode::append(candidate, chars[i]);
            }
            if (auto id = vocab.find(candidate)) {
                match = id;
                matched = candidate;
                break;
            }
            --end;
        }
        if (!match) {
            return {Token{vocab.unk_token(), vocab.unk_id()}};
        }
        pieces.push_back(Token{std::move(matched), *match});
        start = end;
    }
    return pieces;
}

}  // namespace lexica
