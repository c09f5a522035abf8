#include <gtest/gtest.h>

#include "lexica/error.hpp"
#include "lexica/index.hpp"
#include "lexica/random.hpp"
#include "support.hpp"

using namespace lexica;
using lexica::testing::TempDir;

namespace {

Corpus corpus_of(std::vector<std::string> texts) {
    Corpus c;
    for (std::size_t i = 0; i < texts.size(); ++i) c.add({"d" + std::to_string(i), texts[i], ""});
    return c;
}

AnalyzerSpec sa() { return AnalyzerSpec{}; }

Corpus random_corpus(Rng& rng, std::size_t n) {
    static const char* words[] = {"alpha", "beta", "gamma", "delta", "ponies", "running",
                                  "runs", "Relational", "x", "y", "z", "networks"};
    Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        const auto len = 1 + rng.below(40);
        for (std::uint64_t k = 0; k < len; ++k) {
            text += words[rng.below(std::size(words))];
            text += rng.below(5) ? " " : ", ";
        }
        c.add({"doc" + std::to_string(rng.next() % 100000) + "_" + std::to_string(i), text, ""});
    }
    return c;
}

}  // namespace

TEST(Index, HandCountedStats) {
    const auto index = build_index(corpus_of({"a b", "b b"}), sa(), TextOrder::TitleFirst);
    const auto& s = index.stats();
    EXPECT_EQ(s.df("a"), 1u);
    EXPECT_EQ(s.df("b"), 2u);
    EXPECT_EQ(s.cf("b"), 3u);
    EXPECT_EQ(s.df("zz"), 0u);
    EXPECT_DOUBLE_EQ(s.avg_doc_len, 2.0);
    EXPECT_EQ(s.num_docs, 2u);
    EXPECT_EQ(s.total_tokens, 4u);
    const auto* b = index.find("b");
    ASSERT_NE(b, nullptr);
    EXPECT_EQ(*b, (std::vector<Posting>{{0, 1}, {1, 2}}));
    EXPECT_EQ(index.find("c"), nullptr);
}

TEST(Index, Singleton) {
    const auto index = build_index(corpus_of({"x"}), sa(), TextOrder::TitleFirst);
    EXPECT_EQ(index.stats().num_docs, 1u);
    EXPECT_EQ(index.stats().total_tokens, 1u);
    EXPECT_DOUBLE_EQ(index.stats().avg_doc_len, 1.0);
}

TEST(Index, EmptyCorpusIsError) {
    EXPECT_THROW(build_index(Corpus{}, sa(), TextOrder::TitleFirst), ValidationError);
}

TEST(Index, DocumentWithNoTokens) {
    const auto index = build_index(corpus_of({"a", "!!!"}), sa(), TextOrder::TitleFirst);
    EXPECT_EQ(index.stats().doc_len.at("d1"), 0u);
    EXPECT_EQ(index.doc_len(*index.ordinal("d1")), 0u);
    EXPECT_DOUBLE_EQ(index.stats().avg_doc_len, 0.5);
}

TEST(Index, PersistRoundTrip) {
    TempDir dir;
    const auto index = build_index(corpus_of({"a b", "b b"}), sa(), TextOrder::TitleFirst);
    persist_index(index, dir / "i.bin");
    const auto back = load_index(dir / "i.bin");
    EXPECT_EQ(back, index);
    EXPECT_EQ(back.doc_ids(), index.doc_ids());
    EXPECT_EQ(serialize_index(back), serialize_index(index));
}

TEST(Index, EmptyPostingsRoundTrip) {
    const auto index = build_index(corpus_of({"...", "!!"}), sa(), TextOrder::TitleFirst);
    EXPECT_TRUE(index.postings().empty());
    const auto back = deserialize_index(serialize_index(index));
    EXPECT_EQ(back, index);
    EXPECT_TRUE(back.stats().terms.empty());
}

TEST(Index, SubwordSpecRoundTrips) {
    AnalyzerSpec s;
    s.kind = AnalyzerKind::Subword;
    s.vocab_path = lexica::testing::data_path("toy_vocab.txt");
    s.strip_accents = false;
    const auto index = build_index(corpus_of({"unaffable dog", "dogs"}), s, TextOrder::TitleFirst);
    const auto back = deserialize_index(serialize_index(index));
    EXPECT_EQ(back.analyzer(), s);
    EXPECT_EQ(back.stats().cf("dog"), 2u);
}

TEST(Index, TruncatedOrForeignBytesAreFormatErrors) {
    const auto bytes = serialize_index(build_index(corpus_of({"a b", "b b"}), sa(), TextOrder::TitleFirst));
    for (std::size_t cut : {std::size_t{0}, std::size_t{5}, bytes.size() / 2, bytes.size() - 1}) {
        EXPECT_THROW(deserialize_index(std::string_view(bytes).substr(0, cut)), FormatError) << cut;
    }
    auto bumped = bytes;
    bumped[8] = static_cast<char>(bumped[8] + 1);  // version field
    EXPECT_THROW(deserialize_index(bumped), FormatError);
    EXPECT_THROW(deserialize_index(bytes + "x"), FormatError);
}

TEST(Index, StatisticsInvariantsOnRandomCorpora) {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const auto corpus = random_corpus(rng, 1 + rng.below(25));
        for (auto kind : {AnalyzerKind::SA, AnalyzerKind::STM1, AnalyzerKind::STM2}) {
            AnalyzerSpec spec;
            spec.kind = kind;
            const auto index = build_index(corpus, spec, TextOrder::TitleFirst);
            const auto& s = index.stats();
            std::uint64_t cf_sum = 0;
            for (const auto& [term, ts] : s.terms) {
                cf_sum += ts.cf;
                EXPECT_GE(ts.df, 1u);
                EXPECT_LE(ts.df, s.num_docs);
                EXPECT_LE(ts.df, ts.cf);
                const auto& postings = *index.find(term);
                EXPECT_EQ(postings.size(), ts.df);
                std::uint64_t tf_sum = 0;
                for (std::size_t i = 0; i < postings.size(); ++i) {
                    tf_sum += postings[i].tf;
                    if (i > 0) {
                        EXPECT_LT(postings[i - 1].doc, postings[i].doc);
                    }
                }
                EXPECT_EQ(tf_sum, ts.cf);
            }
            EXPECT_EQ(cf_sum, s.total_tokens);
            std::uint64_t len_sum = 0;
            for (const auto& [_, l] : s.doc_len) len_sum += l;
            EXPECT_EQ(len_sum, s.total_tokens);
            EXPECT_DOUBLE_EQ(s.avg_doc_len, static_cast<double>(s.total_tokens) / s.num_docs);
        }
    }
}

TEST(Index, ThreadCountDoesNotChangeBytes) {
    Rng rng(37);
    const auto corpus = random_corpus(rng, 200);
    const Analyzer analyzer(sa());
    const auto one = serialize_index(build_index(corpus, analyzer, TextOrder::TitleFirst, 1));
    EXPECT_EQ(serialize_index(build_index(corpus, analyzer, TextOrder::TitleFirst, 4)), one);
    EXPECT_EQ(serialize_index(build_index(corpus, analyzer, TextOrder::TitleFirst, 1)), one);
}
