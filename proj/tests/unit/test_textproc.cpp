#include <gtest/gtest.h>

#include <json.hpp>

#include <fstream>
#include <memory>

#include "lexica/error.hpp"
#include "lexica/io_util.hpp"
#include "lexica/random.hpp"
#include "lexica/textproc.hpp"
#include "support.hpp"

using namespace lexica;
using lexica::testing::data_path;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
}

AnalyzerSpec spec_of(AnalyzerKind kind) {
    AnalyzerSpec s;
    s.kind = kind;
    if (kind == AnalyzerKind::Subword) s.vocab_path = data_path("toy_vocab.txt");
    return s;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST(Porter, PublishedExamples) {
    EXPECT_EQ(porter_stem("caresses"), "caress");
    EXPECT_EQ(porter_stem("ponies"), "poni");
    EXPECT_EQ(porter_stem("relational"), "relat");
    EXPECT_EQ(porter_stem("a"), "a");
    EXPECT_EQ(porter_stem("is"), "is");
    EXPECT_EQ(porter_stem("generalizations"), "gener");
    EXPECT_EQ(porter_stem("oscillators"), "oscil");
    EXPECT_EQ(porter_stem("hopping"), "hop");
    EXPECT_EQ(porter_stem("filing"), "file");
}

TEST(Porter, OriginalAlgorithmNotTheCVariant) {
    // The widely copied C version adds a "logi" rule and uses "bli".
    EXPECT_EQ(porter_stem("archaeology"), "archaeologi");
    EXPECT_EQ(porter_stem("sensibly"), "sensibli");
    EXPECT_EQ(porter_stem("conformably"), "conform");
}

TEST(Porter, NonAlphabeticPassesThrough) {
    EXPECT_EQ(porter_stem("bm25s"), "bm25s");
    EXPECT_EQ(porter_stem("naïves"), "naïves");
    EXPECT_EQ(porter_stem(""), "");
}

TEST(Porter, GoldenVocabulary) {
    const auto words = io::read_lines(data_path("porter_vocabulary.txt"));
    const auto stems = io::read_lines(data_path("porter_output.txt"));
    ASSERT_EQ(words.size(), stems.size());
    ASSERT_GE(words.size(), 10000u);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (porter_stem(words[i]) != stems[i]) {
            if (++mismatches <= 10) ADD_FAILURE() << words[i] << " -> " << porter_stem(words[i]);
        }
    }
    EXPECT_EQ(mismatches, 0u);
}

TEST(Porter, MostlyIdempotent) {
    const auto words = io::read_lines(data_path("porter_vocabulary.txt"));
    std::size_t fixed = 0;
    for (const auto& w : words) {
        const auto s = porter_stem(w);
        fixed += porter_stem(s) == s ? 1 : 0;
    }
    EXPECT_GE(static_cast<double>(fixed) / words.size(), 0.95);
}

TEST(Vocabulary, LoadAndLookup) {
    const auto v = Vocabulary::load(data_path("toy_vocab.txt"));
    EXPECT_EQ(v.unk_id(), 1u);
    EXPECT_EQ(v.find("un"), TokenId{5});
    EXPECT_EQ(v.find("nope"), std::nullopt);
    EXPECT_TRUE(v.is_special(2));
    EXPECT_FALSE(v.is_special(5));
    EXPECT_TRUE(v.is_continuation(6));
    EXPECT_FALSE(v.is_continuation(5));
}

TEST(Vocabulary, Invalid) {
    EXPECT_THROW(Vocabulary({"a", "a", "[UNK]"}), ValidationError);
    EXPECT_THROW(Vocabulary({"a", ""}), ValidationError);
    EXPECT_THROW(Vocabulary({"a", "b"}), ConfigError);
    EXPECT_THROW(Vocabulary::load("/nonexistent/vocab.txt"), ConfigError);
}

TEST(WordPiece, Examples) {
    const Vocabulary toy({"[UNK]", "un", "##aff", "##able"});
    EXPECT_EQ(surfaces(wordpiece_tokenize("unaffable", toy)), (Strings{"un", "##aff", "##able"}));
    EXPECT_EQ(surfaces(wordpiece_tokenize("un", toy)), (Strings{"un"}));
    EXPECT_EQ(surfaces(wordpiece_tokenize("xqz", toy)), (Strings{"[UNK]"}));
    EXPECT_EQ(wordpiece_tokenize("unaffable", toy)[2].id, TokenId{3});
    EXPECT_EQ(surfaces(wordpiece_tokenize("unaffable", toy, 8)), (Strings{"[UNK]"}));
    EXPECT_EQ(surfaces(wordpiece_tokenize("unaff", toy, 5)), (Strings{"un", "##aff"}));
}

TEST(WordPiece, GoldenCases) {
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::load(data_path("toy_vocab.txt")));
    const Analyzer analyzer(spec_of(AnalyzerKind::Subword), vocab);
    const auto lines = io::read_lines(data_path("wordpiece_golden.jsonl"));
    ASSERT_EQ(lines.size(), 50u);
    for (const auto& line : lines) {
        const auto rec = nlohmann::json::parse(line);
        const auto text = rec.at("text").get<std::string>();
        const auto tokens = analyzer.analyze(text);
        EXPECT_EQ(token_ids(tokens), rec.at("ids").get<std::vector<TokenId>>()) << text;
        EXPECT_EQ(surfaces(tokens), rec.at("pieces").get<Strings>()) << text;
    }
}

TEST(WordPiece, RoundTripWithoutUnk) {
    const auto vocab = Vocabulary::load(data_path("toy_vocab.txt"));
    Rng rng(17);
    const Strings parts{"un", "aff", "able", "run", "ning", "s", "ed", "want", "er", "doc", "ument"};
    for (int i = 0; i < 500; ++i) {
        std::string word;
        const auto n = 1 + rng.below(4);
        for (std::uint64_t k = 0; k < n; ++k) word += parts[rng.below(parts.size())];
        const auto pieces = wordpiece_tokenize(word, vocab);
        if (pieces.size() == 1 && pieces[0].id == vocab.unk_id()) continue;
        std::string joined;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            EXPECT_LT(*pieces[k].id, vocab.size());
            joined += k == 0 ? pieces[k].surface : pieces[k].surface.substr(2);
        }
        EXPECT_EQ(joined, word);
    }
}

TEST(Analyzer, StemmedWordBoundaries) {
    EXPECT_EQ(surfaces(analyze("Ponies run!", spec_of(AnalyzerKind::STM2))), (Strings{"poni", "run"}));
    for (auto kind : {AnalyzerKind::SA, AnalyzerKind::STM1, AnalyzerKind::STM2, AnalyzerKind::Subword}) {
        EXPECT_TRUE(analyze("", spec_of(kind)).empty());
    }
}

TEST(Analyzer, StandardSegmentation) {
    EXPECT_EQ(surfaces(analyze("The QUICK-brown fox's 3.14 e-mail!", spec_of(AnalyzerKind::SA))),
              (Strings{"the", "quick", "brown", "fox's", "3.14", "e", "mail"}));
    EXPECT_EQ(surfaces(analyze("Ünïcode ÉTÉ", spec_of(AnalyzerKind::SA))),
              (Strings{"ünïcode", "été"}));
    EXPECT_EQ(surfaces(analyze("日本語", spec_of(AnalyzerKind::SA))), (Strings{"日", "本", "語"}));
    const std::string longword(300, 'a');
    const auto split = analyze(longword, spec_of(AnalyzerKind::SA));
    ASSERT_EQ(split.size(), 2u);
    EXPECT_EQ(split[0].surface.size(), 255u);
}

TEST(Analyzer, WhitespaceStemming) {
    EXPECT_EQ(surfaces(analyze("Ponies run! Relational\tcaresses", spec_of(AnalyzerKind::STM1))),
              (Strings{"poni", "run!", "relat", "caress"}));
}

TEST(Analyzer, TokensCarryIdsOnlyForSubword) {
    for (const auto& t : analyze("Ponies run", spec_of(AnalyzerKind::SA))) EXPECT_FALSE(t.id);
    for (const auto& t : analyze("Ponies run", spec_of(AnalyzerKind::Subword))) EXPECT_TRUE(t.id);
}

TEST(Analyzer, SubwordNeedsVocabulary) {
    AnalyzerSpec s;
    s.kind = AnalyzerKind::Subword;
    EXPECT_THROW(Analyzer{s}, ConfigError);
    s.vocab_path = "/nonexistent/vocab.txt";
    EXPECT_THROW(Analyzer{s}, ConfigError);
}

TEST(Analyzer, CasedSubwordKeepsCase) {
    auto s = spec_of(AnalyzerKind::Subword);
    s.lowercase = false;
    s.strip_accents = false;
    EXPECT_EQ(surfaces(analyze("Café the", s)), (Strings{"[UNK]", "the"}));
}

TEST(Analyzer, Deterministic) {
    const std::string text = "Reranking long documents: BM25, TILDE & TILDEv2 (2022).";
    for (auto kind : {AnalyzerKind::SA, AnalyzerKind::STM1, AnalyzerKind::STM2, AnalyzerKind::Subword}) {
        EXPECT_EQ(analyze(text, spec_of(kind)), analyze(text, spec_of(kind)));
    }
}

TEST(Analyzer, KindNames) {
    for (auto kind : {AnalyzerKind::SA, AnalyzerKind::STM1, AnalyzerKind::STM2, AnalyzerKind::Subword}) {
        EXPECT_EQ(parse_analyzer_kind(to_string(kind)), kind);
    }
    EXPECT_THROW(parse_analyzer_kind("porter"), ConfigError);
}

TEST(TokenCounts, Histogram) {
    const std::vector<Token> stream{{"a", {}}, {"b", {}}, {"a", {}}};
    EXPECT_EQ(unique_token_counts(stream), (std::map<std::string, std::size_t>{{"a", 2}, {"b", 1}}));
    EXPECT_TRUE(unique_token_counts(std::span<const Token>{}).empty());
    const std::vector<TokenId> ids(7, 3);
    EXPECT_EQ(unique_token_counts(ids), (std::map<TokenId, std::size_t>{{3, 7}}));
}

TEST(TokenCounts, SumEqualsLength) {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        std::vector<TokenId> ids(rng.below(50));
        for (auto& x : ids) x = static_cast<TokenId>(rng.below(10));
        std::size_t total = 0;
        for (const auto& [_, c] : unique_token_counts(ids)) total += c;
        EXPECT_EQ(total, ids.size());
    }
}
