#include "support.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "lexica/random.hpp"
#include "lexica/textproc.hpp"

#ifndef LEXICA_TEST_DATA_DIR
#error "LEXICA_TEST_DATA_DIR must be defined"
#endif

namespace lexica::testing {

namespace fs = std::filesystem;
using nlohmann::json;

TempDir::TempDir() {
    static std::uint64_t counter = 0;
    Rng rng(static_cast<std::uint64_t>(::time(nullptr)) ^ reinterpret_cast<std::uintptr_t>(this));
    for (;;) {
        path_ = fs::temp_directory_path() /
                ("lexica-test-" + std::to_string(rng.next() % 1000000000ULL) + "-" +
                 std::to_string(counter++));
        if (fs::create_directories(path_)) {
            return;
        }
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

fs::path data_path(const std::string& name) { return fs::path(LEXICA_TEST_DATA_DIR) / name; }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double brute_force_ap(const std::vector<bool>& relevant, std::size_t total_relevant) {
    double sum = 0.0;
    for (std::size_t k = 0; k < relevant.size(); ++k) {
        if (!relevant[k]) continue;
        std::size_t hits = 0;
        for (std::size_t j = 0; j <= k; ++j) hits += relevant[j] ? 1 : 0;
        sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
    return sum / static_cast<double>(total_relevant);
}

double brute_force_ndcg(const std::vector<bool>& relevant, std::size_t total_relevant) {
    double dcg = 0.0;
    for (std::size_t k = 0; k < relevant.size(); ++k) {
        if (relevant[k]) dcg += 1.0 / std::log2(static_cast<double>(k + 2));
    }
    double ideal = 0.0;
    for (std::size_t k = 0; k < total_relevant; ++k) {
        ideal += 1.0 / std::log2(static_cast<double>(k + 2));
    }
    return dcg / ideal;
}

namespace {

std::string padded(std::size_t n, int width) {
    std::string s = std::to_string(n);
    return std::string(width > static_cast<int>(s.size()) ? width - s.size() : 0, '0') + s;
}

void add_query(FusionFixture& f, const std::string& qid, const std::vector<double>& bm25,
               const std::vector<double>& ctx, const std::set<std::size_t>& positives) {
    std::vector<ScoredDoc> a, b;
    for (std::size_t j = 0; j < bm25.size(); ++j) {
        const std::string doc = qid + "_d" + padded(j, 2);
        a.push_back({doc, bm25[j]});
        b.push_back({doc, ctx[j]});
        f.qrels.add({qid, doc, positives.count(j) ? 1 : 0});
    }
    f.bm25.push_back(make_scored_list(qid, std::move(a)));
    f.ctx.push_back(make_scored_list(qid, std::move(b)));
}

}  // namespace

FusionFixture random_fusion_fixture(std::uint64_t seed, std::size_t num_queries,
                                    std::size_t candidates) {
    Rng rng(seed);
    FusionFixture f;
    for (std::size_t i = 0; i < num_queries; ++i) {
        const std::string qid = "q" + padded(i, 4);
        const std::size_t n = 2 + rng.below(candidates - 1);
        std::vector<double> bm25(n), ctx(n);
        for (std::size_t j = 0; j < n; ++j) {
            // coarse values so ties are common
            bm25[j] = static_cast<double>(rng.below(6)) * 1.5;
            ctx[j] = -static_cast<double>(rng.below(8)) * 0.75;
        }
        std::set<std::size_t> positives;
        const std::size_t want = 1 + rng.below(std::min<std::size_t>(5, n));
        while (positives.size() < want) positives.insert(rng.below(n));
        add_query(f, qid, bm25, ctx, positives);
    }
    return f;
}

FusionFixture planted_complementary_fixture() {
    FusionFixture f;
    // p1 = slot 0 tops BM25 and sinks in ctx; p2 = slot 9 the reverse.
    // Negatives sit in the middle of both, in opposite orders.
    for (std::size_t i = 0; i < 8; ++i) {
        std::vector<double> bm25{10.0}, ctx{0.0};
        for (int j = 0; j < 8; ++j) {
            bm25.push_back(3.0 + 0.5 * j);
            ctx.push_back(6.5 - 0.5 * j);
        }
        bm25.push_back(0.0);
        ctx.push_back(10.0);
        add_query(f, "c" + padded(i, 2), bm25, ctx, {0, 9});
    }
    // One query each where a single scorer is right and the other buries the
    // positives far below a tight cluster of negatives.
    {
        std::vector<double> good{10, 9.5, 0, 1, 2, 3, 4, 5, 6, 7};
        std::vector<double> bad{-100, -100, 0, 1, 2, 3, 4, 5, 6, 7};
        add_query(f, "b00", good, bad, {0, 1});
        add_query(f, "x00", bad, good, {0, 1});
    }
    return f;
}

namespace {

const char* const kOnsets[] = {"b", "c", "d", "f", "g", "h", "k", "l", "m", "n",
                               "p", "r", "s", "t", "v", "w", "z", "br", "st", "tr"};
const char* const kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};

std::string syllable(Rng& rng) {
    return std::string(kOnsets[rng.below(std::size(kOnsets))]) + kVowels[rng.below(std::size(kVowels))];
}

struct Lexicon {
    std::vector<std::string> words;  // frequency rank order
    std::vector<std::string> vocab;
};

Lexicon make_lexicon(Rng& rng, std::size_t vocab_size) {
    Lexicon lex;
    std::set<std::string> seen;
    lex.vocab.push_back("[PAD]");
    for (int i = 0; i < 99; ++i) lex.vocab.push_back("[unused" + std::to_string(i) + "]");
    for (const char* s : {"[UNK]", "[CLS]", "[SEP]", "[MASK]"}) lex.vocab.push_back(s);
    for (const char* p : {".", ",", ";", ":", "(", ")", "-", "%"}) lex.vocab.push_back(p);
    for (char c = 'a'; c <= 'z'; ++c) lex.vocab.push_back(std::string(1, c));
    for (char c = 'a'; c <= 'z'; ++c) lex.vocab.push_back("##" + std::string(1, c));
    for (const char* o : kOnsets) {
        for (const char* v : kVowels) lex.vocab.push_back("##" + std::string(o) + v);
    }
    for (const auto& t : lex.vocab) seen.insert(t);
    // Twice as many words as fit in the vocabulary: the tail splits into pieces.
    const std::size_t room = vocab_size - lex.vocab.size();
    while (lex.words.size() < 2 * room) {
        std::string w;
        const std::size_t n = 2 + rng.below(3);
        for (std::size_t i = 0; i < n; ++i) w += syllable(rng);
        if (seen.insert(w).second) lex.words.push_back(w);
    }
    for (std::size_t i = 0; lex.vocab.size() < vocab_size; ++i) lex.vocab.push_back(lex.words[i]);
    return lex;
}

std::string sentence(Rng& rng, const Lexicon& lex, const std::vector<std::size_t>& topic,
                     double topic_rate, std::size_t words) {
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
        std::size_t w;
        if (rng.uniform() < topic_rate) {
            w = topic[rng.below(topic.size())];
        } else {
            const double u = rng.uniform();
            w = static_cast<std::size_t>(static_cast<double>(lex.words.size()) * u * u * u);
        }
        if (!out.empty()) out += ' ';
        out += lex.words[w];
        if (rng.below(12) == 0) out += rng.below(2) ? "," : ".";
    }
    return out;
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

SyntheticPaths write_synthetic_dataset(const fs::path& dir, const SyntheticShape& shape) {
    Rng rng(shape.seed);
    const Lexicon lex = make_lexicon(rng, shape.vocab_size);
    SyntheticPaths paths{dir / "corpus.jsonl", dir / "pools.jsonl",   dir / "qrels.txt",
                         dir / "vocab.txt",    dir / "tilde.jsonl",   dir / "impacts.jsonl"};
    {
        std::ofstream out(paths.vocab, std::ios::binary);
        for (const auto& t : lex.vocab) out << t << '\n';
    }
    auto vocab = std::make_shared<const Vocabulary>(lex.vocab);
    AnalyzerSpec spec;
    spec.kind = AnalyzerKind::Subword;
    spec.vocab_path = paths.vocab;
    const Analyzer subword(spec, vocab);

    std::ofstream corpus(paths.corpus, std::ios::binary);
    std::ofstream pools(paths.pools, std::ios::binary);
    std::ofstream qrels(paths.qrels, std::ios::binary);
    std::ofstream tilde(paths.tilde, std::ios::binary);
    std::ofstream impacts(paths.impacts, std::ios::binary);
    tilde << json{{"floor_logprob", std::log(1e-6)}}.dump() << '\n';

    auto emit_doc = [&](const std::string& id, const std::vector<std::size_t>& topic, double rate,
                        bool stores) {
        const std::string title = sentence(rng, lex, topic, rate, 6 + rng.below(6));
        const std::string abstract =
            sentence(rng, lex, topic, rate, shape.abstract_words / 2 + rng.below(shape.abstract_words));
        corpus << json{{"doc_id", id}, {"title", title}, {"abstract", abstract}}.dump() << '\n';
        if (!stores) return;
        const auto tokens = subword.analyze(title + " " + abstract);
        std::set<TokenId> present;
        for (const auto& t : tokens) present.insert(*t.id);
        std::map<TokenId, double> dist;
        for (TokenId t : present) {
            if (dist.size() * 2 >= shape.tilde_entries) break;
            dist[t] = -0.05 - 6.0 * rng.uniform();
        }
        while (dist.size() < shape.tilde_entries) {
            dist.emplace(static_cast<TokenId>(rng.below(shape.vocab_size)), -2.0 - 10.0 * rng.uniform());
        }
        std::string line = "{\"doc_id\":\"" + id + "\",\"entries\":[";
        bool first = true;
        for (const auto& [t, lp] : dist) {
            line += (first ? "[" : ",[") + std::to_string(t) + "," + number(lp) + "]";
            first = false;
        }
        tilde << line << "]}\n";
        line = "{\"doc_id\":\"" + id + "\",\"weights\":[";
        first = true;
        for (TokenId t : present) {
            const double w = rng.below(10) == 0 ? 0.0 : 4.0 * rng.uniform();
            line += (first ? "[" : ",[") + std::to_string(t) + "," + number(w) + "]";
            first = false;
        }
        impacts << line << "]}\n";
    };

    for (std::size_t q = 0; q < shape.queries; ++q) {
        const std::string qid = "q" + padded(q, 5);
        std::vector<std::size_t> topic(12);
        for (auto& w : topic) w = rng.below(lex.words.size());
        emit_doc(qid, topic, 0.3, false);
        std::vector<std::string> cands;
        for (std::size_t j = 0; j < shape.candidates; ++j) {
            const bool positive = j < shape.positives;
            const std::string id = qid + "_c" + padded(j, 2);
            emit_doc(id, topic, positive ? 0.25 : 0.08, true);
            qrels << qid << " 0 " << id << ' ' << (positive ? 1 : 0) << '\n';
            cands.push_back(id);
        }
        rng.shuffle(cands);
        pools << json{{"query_id", qid}, {"candidates", cands}}.dump() << '\n';
    }
    return paths;
}

}  // namespace lexica::testing
