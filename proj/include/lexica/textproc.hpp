#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexica {

/// SA: word-boundary segmentation + lowercase.
/// STM1: whitespace segmentation + lowercase + Porter.
/// STM2: word-boundary segmentation + lowercase + Porter.
/// Subword: BERT-style basic split then greedy WordPiece with ids.
enum class AnalyzerKind { SA, STM1, STM2, Subword };

std::string_view to_string(AnalyzerKind kind);
AnalyzerKind parse_analyzer_kind(std::string_view name);

struct AnalyzerSpec {
    AnalyzerKind kind = AnalyzerKind::SA;
    std::optional<std::filesystem::path> vocab_path;  // required iff kind == Subword
    bool lowercase = true;
    bool strip_accents = true;  // Subword only
    int max_word_chars = 100;

    friend bool operator==(const AnalyzerSpec&, const AnalyzerSpec&) = default;
};

using TokenId = std::uint32_t;

struct Token {
    std::string surface;
    std::optional<TokenId> id;

    friend bool operator==(const Token&, const Token&) = default;
};

/// BERT vocab.txt: one token per line, the 0-based line number is the id.
class Vocabulary {
  public:
    /// Throws ValidationError on duplicate or empty tokens and ConfigError when
    /// `unk_token` is missing.
    explicit Vocabulary(std::vector<std::string> tokens, std::string unk_token = "[UNK]",
                        std::string continuation_prefix = "##");

    static Vocabulary load(const std::filesystem::path& path);

    std::optional<TokenId> find(std::string_view token) const;
    const std::string& token(TokenId id) const { return tokens_.at(id); }
    std::size_t size() const noexcept { return tokens_.size(); }

    TokenId unk_id() const noexcept { return unk_id_; }
    const std::string& unk_token() const noexcept { return tokens_[unk_id_]; }
    const std::string& continuation_prefix() const noexcept { return continuation_prefix_; }

    /// Bracketed entries such as [CLS], [SEP] or [unused7].
    bool is_special(TokenId id) const;
    bool is_continuation(TokenId id) const;
    const std::set<TokenId>& special_tokens() const noexcept { return special_; }

  private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
    std::string continuation_prefix_;
    std::set<TokenId> special_;
    TokenId unk_id_ = 0;
};

/// Original Porter (1980) stemmer, steps 1a through 5b. Words of length <= 2
/// and words holding anything other than 'a'-'z' come back unchanged.
std::string porter_stem(std::string_view word);

/// Greedy longest-match-first segmentation of one basic token. Falls back to
/// the single unk token when some position has no match or when the word has
/// more than `max_word_chars` code points.
std::vector<Token> wordpiece_tokenize(std::string_view word, const Vocabulary& vocab,
                                      int max_word_chars = 100);

/// An analyzer pipeline bound to its (optional) vocabulary. Immutable and safe
/// to share across threads.
class Analyzer {
  public:
    /// Loads the vocabulary for Subword specs; throws ConfigError when the
    /// spec is invalid or the vocabulary cannot be read.
    explicit Analyzer(AnalyzerSpec spec);
    Analyzer(AnalyzerSpec spec, std::shared_ptr<const Vocabulary> vocab);

    std::vector<Token> analyze(std::string_view text) const;

    const AnalyzerSpec& spec() const noexcept { return spec_; }
    const Vocabulary* vocabulary() const noexcept { return vocab_.get(); }

  private:
    AnalyzerSpec spec_;
    std::shared_ptr<const Vocabulary> vocab_;
};

std::vector<Token> analyze(std::string_view text, const AnalyzerSpec& spec);

/// Histogram of a token stream keyed by surface form.
std::map<std::string, std::size_t> unique_token_counts(std::span<const Token> tokens);

/// Histogram of a token-id stream.
std::map<TokenId, std::size_t> unique_token_counts(std::span<const TokenId> ids);

std::vector<TokenId> token_ids(std::span<const Token> tokens);

}  // namespace lexica
