#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lexica/error.hpp"
#include "lexica/rankers.hpp"
#include "lexica/random.hpp"
#include "support.hpp"

using namespace lexica;

namespace {

Corpus corpus_of(std::vector<std::pair<std::string, std::string>> docs) {
    Corpus c;
    for (auto& [id, text] : docs) c.add({id, text, ""});
    return c;
}

std::vector<Token> id_tokens(std::vector<TokenId> ids) {
    std::vector<Token> out;
    for (auto id : ids) out.push_back({"t" + std::to_string(id), id});
    return out;
}

}  // namespace

TEST(Bm25, HandComputedExample) {
    // N=3, df(t)=1, tf=2, dl=avgdl=4
    const auto corpus = corpus_of({{"a", "t t u v"}, {"b", "w w w w"}, {"c", "x x x x"}});
    const auto index = build_index(corpus, AnalyzerSpec{}, TextOrder::TitleFirst);
    const std::vector<std::string> q{"t"};
    const double expected = std::log(8.0 / 3.0) * (2.0 / 4.75);
    EXPECT_NEAR(bm25_score(q, "a", index), expected, 1e-12);
    EXPECT_NEAR(bm25_score(q, "a", index), 0.41298, 1e-5);
    EXPECT_EQ(bm25_score(q, "b", index), 0.0);
    const std::vector<std::string> none{"zzz"};
    EXPECT_EQ(bm25_score(none, "a", index), 0.0);
}

TEST(Bm25, QueryMultiplicity) {
    const auto corpus = corpus_of({{"a", "t t u v"}, {"b", "w w w w"}, {"c", "x x x x"}});
    const auto index = build_index(corpus, AnalyzerSpec{}, TextOrder::TitleFirst);
    const std::vector<std::string> q{"t", "t", "u"};
    const std::vector<std::string> once{"t", "u"};
    EXPECT_DOUBLE_EQ(bm25_score(q, "a", index), bm25_score(once, "a", index));
    Bm25Params p;
    p.query_multiplicity = true;
    const std::vector<std::string> t{"t"};
    EXPECT_NEAR(bm25_score(q, "a", index, p),
                bm25_score(once, "a", index) + bm25_score(t, "a", index), 1e-12);
}

TEST(Bm25, ParamsValidate) {
    EXPECT_THROW((Bm25Params{-1.0, 1.0}).validate(), ValidationError);
    EXPECT_THROW((Bm25Params{1.0, 1.5}).validate(), ValidationError);
    EXPECT_NO_THROW(Bm25Params{}.validate());
}

TEST(Bm25, TfMonotoneOnIndexedCorpora) {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        // doc "a" holds tf copies of t padded to a fixed length, so dl is constant
        const auto len = 10 + rng.below(10);
        std::vector<double> scores;
        for (std::uint64_t tf = 0; tf <= len; ++tf) {
            std::string text;
            for (std::uint64_t i = 0; i < len; ++i) text += i < tf ? "t " : "pad ";
            const auto corpus = corpus_of({{"a", text}, {"b", "t other words here"}, {"c", "none"}});
            const auto index = build_index(corpus, AnalyzerSpec{}, TextOrder::TitleFirst);
            const std::vector<std::string> q{"t"};
            scores.push_back(bm25_score(q, "a", index));
        }
        EXPECT_EQ(scores[0], 0.0);
        for (std::size_t i = 1; i < scores.size(); ++i) EXPECT_GT(scores[i], 0.0);
    }
}

TEST(LmJm, HandComputedExample) {
    // lambda 0.1, tf=1, dl=2, cf=1, T=4
    const auto corpus = corpus_of({{"a", "t u"}, {"b", "v w"}});
    const auto index = build_index(corpus, AnalyzerSpec{}, TextOrder::TitleFirst);
    const std::vector<std::string> q{"t"};
    EXPECT_NEAR(lm_jm_score(q, "a", index), std::log(19.0), 1e-12);
    EXPECT_NEAR(lm_jm_score(q, "a", index), 2.94444, 1e-5);
    EXPECT_EQ(lm_jm_score(q, "b", index), 0.0);
    const std::vector<std::string> twice{"t", "t"};
    EXPECT_NEAR(lm_jm_score(twice, "a", index), 2 * std::log(19.0), 1e-12);
}

TEST(LmJm, ParamsValidate) {
    EXPECT_THROW(LmJmParams{0.0}.validate(), ValidationError);
    EXPECT_THROW(LmJmParams{1.0}.validate(), ValidationError);
    EXPECT_NO_THROW(LmJmParams{0.7}.validate());
}

TEST(TildeQl, Examples) {
    TildeDistributionStore store(20, std::log(1e-6));
    store.insert("d", {{5, -1.0}, {9, -2.0}});
    const std::vector<TokenId> q59{5, 9}, q55{5, 5}, q7{7};
    EXPECT_DOUBLE_EQ(tilde_ql(q59, "d", store), -3.0);
    EXPECT_DOUBLE_EQ(tilde_ql(q55, "d", store), -2.0);
    EXPECT_NEAR(tilde_ql(q7, "d", store), -13.8155, 1e-4);
    EXPECT_THROW(tilde_ql(q7, "x", store), NotFoundError);
}

TEST(TildeV2, Examples) {
    ImpactStore store(10);
    store.insert("d", {{1, 0.5}, {3, 0.3}});
    store.insert("z", {{1, 0.0}});
    const std::vector<TokenId> q{1, 1, 2};
    EXPECT_DOUBLE_EQ(tildev2_score(q, "d", store), 1.0);
    const std::vector<TokenId> disjoint{4, 5};
    EXPECT_EQ(tildev2_score(disjoint, "d", store), 0.0);
    const std::vector<TokenId> one{1};
    EXPECT_EQ(tildev2_score(one, "z", store), 0.0);
    EXPECT_THROW(tildev2_score(one, "nope", store), NotFoundError);
}

TEST(TildeV2, PermutationInvariantAndNonNegative) {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        ImpactStore store(30);
        std::vector<TokenWeight> w;
        for (int i = 0; i < 10; ++i) w.push_back({static_cast<TokenId>(rng.below(30)), rng.uniform()});
        store.insert("d", w);
        std::vector<TokenId> q(rng.below(20));
        for (auto& t : q) t = static_cast<TokenId>(rng.below(30));
        const double s = tildev2_score(q, "d", store);
        rng.shuffle(q);
        EXPECT_EQ(tildev2_score(q, "d", store), s);
        EXPECT_GE(s, 0.0);
    }
}

TEST(TildeV2, ExpansionNeverLowersScore) {
    Rng rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        ImpactStore store(40), source(40);
        std::vector<TokenWeight> w, extra;
        for (int i = 0; i < 8; ++i) w.push_back({static_cast<TokenId>(rng.below(40)), rng.uniform()});
        for (int i = 0; i < 12; ++i)
            extra.push_back({static_cast<TokenId>(rng.below(40)), rng.uniform()});
        store.insert("d", w);
        source.insert("d", extra);
        std::vector<TokenId> q(1 + rng.below(15));
        for (auto& t : q) t = static_cast<TokenId>(rng.below(40));
        std::vector<TokenId> additions;
        for (const auto& tw : extra) additions.push_back(tw.token);
        const double before = tildev2_score(q, "d", store);
        store.merge_expansion("d", additions, source);
        EXPECT_GE(tildev2_score(q, "d", store), before);
    }
}

TEST(Rerank, OrdersAndTieBreaks) {
    ImpactStore store(10);
    store.insert("d1", {{1, 1.0}});
    store.insert("d2", {{1, 2.0}});
    store.insert("d3", {{1, 1.0}});
    const TildeV2Scorer scorer(store);
    const auto q = id_tokens({1});
    const auto l = rerank({"q", "q"}, {"q", {"d3", "d1", "d2"}}, q, scorer);
    EXPECT_EQ(permutation(l), (std::vector<std::string>{"d2", "d1", "d3"}));
    EXPECT_EQ(l.query_id, "q");
}

TEST(Rerank, ErrorsCarryQueryId) {
    ImpactStore store(10);
    store.insert("d1", {{1, 1.0}});
    const TildeV2Scorer scorer(store);
    const auto q = id_tokens({1});
    try {
        rerank({"q42", "q42"}, {"q42", {"d1", "missing"}}, q, scorer);
        FAIL();
    } catch (const NotFoundError& e) {
        EXPECT_NE(std::string(e.what()).find("q42"), std::string::npos);
    }
}

TEST(Rerank, AllScorersProducePermutations) {
    Rng rng(47);
    Corpus corpus;
    std::vector<std::string> words{"alpha", "beta", "gamma", "delta", "eps"};
    for (int i = 0; i < 40; ++i) {
        std::string text;
        for (int k = 0; k < 8; ++k) text += words[rng.below(words.size())] + " ";
        corpus.add({"d" + std::to_string(i), text, ""});
    }
    const auto index = build_index(corpus, AnalyzerSpec{}, TextOrder::TitleFirst);
    PoolSet pools;
    for (int qi = 0; qi < 5; ++qi) {
        CandidatePool pool{"d" + std::to_string(qi), {}};
        for (int j = 10; j < 40; ++j) pool.candidates.push_back("d" + std::to_string(j));
        rng.shuffle(pool.candidates);
        pools.queries.push_back({pool.query_id, pool.query_id});
        pools.pools.push_back(pool);
    }
    const Analyzer analyzer(AnalyzerSpec{});
    const Bm25Scorer bm25(index, {});
    const LmJmScorer lm(index, {});
    for (const Scorer* s : std::initializer_list<const Scorer*>{&bm25, &lm}) {
        const auto lists = rerank_all(pools, corpus, analyzer, *s, TextOrder::TitleFirst, 1);
        EXPECT_EQ(rerank_all(pools, corpus, analyzer, *s, TextOrder::TitleFirst, 3), lists);
        ASSERT_EQ(lists.size(), 5u);
        for (std::size_t i = 0; i < lists.size(); ++i) {
            auto got = permutation(lists[i]);
            auto want = pools.pools[i].candidates;
            EXPECT_EQ(got.size(), 30u);
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            EXPECT_EQ(got, want);
            for (std::size_t k = 1; k < lists[i].entries.size(); ++k) {
                EXPECT_TRUE(ranks_before(lists[i].entries[k - 1], lists[i].entries[k]));
            }
        }
    }
}

TEST(Expansion, Examples) {
    const Vocabulary vocab({"[UNK]", "[CLS]", "a", "b", "c", "##d", "e"});
    const std::vector<TokenWeight> ranked{{2, -0.1}, {3, -0.2}, {4, -0.3}, {6, -0.4}};
    EXPECT_EQ(expand_document({3}, ranked, {3}, vocab), (std::vector<TokenId>{2, 4}));
    EXPECT_TRUE(expand_document({3}, ranked, {0}, vocab).empty());

    const std::vector<TokenWeight> noisy{{1, -0.1}, {5, -0.2}, {2, -0.3}, {2, -0.3}};
    EXPECT_EQ(expand_document({}, noisy, {4}, vocab), (std::vector<TokenId>{2}));
    EXPECT_EQ(expand_document({}, noisy, {4, false}, vocab), (std::vector<TokenId>{5, 2}));
}

TEST(Expansion, Stats) {
    EXPECT_DOUBLE_EQ(expansion_stats({{"a", {1, 2}}, {"b", {1, 2, 3, 4}}}).mean_added, 3.0);
    EXPECT_DOUBLE_EQ(expansion_stats({{"a", {}}, {"b", {}}}).mean_added, 0.0);
    EXPECT_DOUBLE_EQ(expansion_stats({{"a", {1, 2, 3, 4, 5}}}).mean_added, 5.0);
    EXPECT_THROW(expansion_stats({}), ValidationError);
}

TEST(Expansion, FileRoundTrip) {
    lexica::testing::TempDir dir;
    const std::map<std::string, std::vector<TokenId>> additions{{"a", {5, 1}}, {"b", {}}};
    write_expansions(additions, dir / "e.jsonl");
    EXPECT_EQ(load_expansions(dir / "e.jsonl"), additions);
}
