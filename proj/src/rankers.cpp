#include "lexica/rankers.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <json.hpp>

#include "lexica/error.hpp"
#include "lexica/io_util.hpp"
#include "lexica/parallel.hpp"

namespace lexica {

ScoredList make_scored_list(std::string query_id, std::vector<ScoredDoc> entries) {
    std::sort(entries.begin(), entries.end(), ranks_before);
    std::set<std::string_view> seen;
    for (const auto& e : entries) {
        if (!seen.insert(e.doc_id).second) {
            throw ConflictError("doc \"" + e.doc_id + "\" appears twice in list for query \"" +
                                query_id + "\"");
        }
    }
    return ScoredList{std::move(query_id), std::move(entries)};
}

std::vector<std::string> permutation(const ScoredList& list) {
    std::vector<std::string> ids;
    ids.reserve(list.entries.size());
    for (const auto& e : list.entries) {
        ids.push_back(e.doc_id);
    }
    return ids;
}

void Bm25Params::validate() const {
    if (!(k1 >= 0.0) || !(b >= 0.0 && b <= 1.0)) {
        throw ValidationError("BM25 requires k1 >= 0 and 0 <= b <= 1");
    }
}

void LmJmParams::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw ValidationError("Jelinek-Mercer lambda must lie in (0, 1)");
    }
}

namespace {

std::vector<std::uint32_t> resolve_ordinals(const InvertedIndex& index,
                                            std::span<const std::string> candidates) {
    std::vector<std::uint32_t> ords;
    ords.reserve(candidates.size());
    for (const auto& c : candidates) {
        auto o = index.ordinal(c);
        if (!o) {
            throw NotFoundError("document \"" + c + "\" is not indexed");
        }
        ords.push_back(*o);
    }
    return ords;
}

std::map<std::string_view, std::size_t> term_counts(std::span<const Token> query) {
    std::map<std::string_view, std::size_t> counts;
    for (const auto& t : query) {
        ++counts[t.surface];
    }
    return counts;
}

}  // namespace

Bm25Scorer::Bm25Scorer(const InvertedIndex& index, Bm25Params params)
    : index_(index), params_(params) {
    params_.validate();
}

std::vector<double> Bm25Scorer::score(std::span<const Token> query,
                                      std::span<const std::string> candidates) const {
    const auto ords = resolve_ordinals(index_, candidates);
    std::vector<double> scores(candidates.size(), 0.0);
    const auto& stats = index_.stats();
    const double n = static_cast<double>(stats.num_docs);
    const double avgdl = stats.avg_doc_len;
    for (const auto& [term, qcount] : term_counts(query)) {
        const auto* postings = index_.find(term);
        if (postings == nullptr) {
            continue;
        }
        const double df = static_cast<double>(postings->size());
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        const double qweight = params_.query_multiplicity ? static_cast<double>(qcount) : 1.0;
        for (std::size_t i = 0; i < ords.size(); ++i) {
            const auto tf = InvertedIndex::tf(*postings, ords[i]);
            if (tf == 0) {
                continue;
            }
            const double dl = index_.doc_len(ords[i]);
            const double norm = params_.k1 * (1.0 - params_.b + params_.b * dl / avgdl);
            scores[i] += qweight * idf * (tf / (tf + norm));
        }
    }
    return scores;
}

LmJmScorer::LmJmScorer(const InvertedIndex& index, LmJmParams params)
    : index_(index), params_(params) {
    params_.validate();
}

std::vector<double> LmJmScorer::score(std::span<const Token> query,
                                      std::span<const std::string> candidates) const {
    const auto ords = resolve_ordinals(index_, candidates);
    std::vector<double> scores(candidates.size(), 0.0);
    const double total = static_cast<double>(index_.stats().total_tokens);
    const double lambda = params_.lambda;
    for (const auto& [term, qcount] : term_counts(query)) {
        const auto* postings = index_.find(term);
        if (postings == nullptr) {
            continue;
        }
        const double cf = static_cast<double>(index_.stats().cf(term));
        const double collection_prob = cf / total;
        for (std::size_t i = 0; i < ords.size(); ++i) {
            const auto tf = InvertedIndex::tf(*postings, ords[i]);
            if (tf == 0) {
                continue;
            }
            const double dl = index_.doc_len(ords[i]);
            const double w = std::log(1.0 + ((1.0 - lambda) * tf / dl) / (lambda * collection_prob));
            scores[i] += static_cast<double>(qcount) * w;
        }
    }
    return scores;
}

std::vector<double> TildeScorer::score(std::span<const Token> query,
                                       std::span<const std::string> candidates) const {
    const auto ids = token_ids(query);
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (const auto& c : candidates) {
        scores.push_back(tilde_ql(ids, c, store_));
    }
    return scores;
}

std::vector<double> TildeV2Scorer::score(std::span<const Token> query,
                                         std::span<const std::string> candidates) const {
    const auto ids = token_ids(query);
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (const auto& c : candidates) {
        scores.push_back(tildev2_score(ids, c, store_));
    }
    return scores;
}

namespace {

std::vector<Token> as_tokens(std::span<const std::string> terms) {
    std::vector<Token> tokens;
    tokens.reserve(terms.size());
    for (const auto& t : terms) {
        tokens.push_back({t, std::nullopt});
    }
    return tokens;
}

}  // namespace

double bm25_score(std::span<const std::string> query_terms, std::string_view doc_id,
                  const InvertedIndex& index, const Bm25Params& params) {
    const std::string id(doc_id);
    return Bm25Scorer(index, params).score(as_tokens(query_terms), std::span(&id, 1)).front();
}

double lm_jm_score(std::span<const std::string> query_terms, std::string_view doc_id,
                   const InvertedIndex& index, const LmJmParams& params) {
    const std::string id(doc_id);
    return LmJmScorer(index, params).score(as_tokens(query_terms), std::span(&id, 1)).front();
}

double tilde_ql(std::span<const TokenId> query, std::string_view doc_id,
                const TildeDistributionStore& store) {
    const auto& entries = store.entries(doc_id);
    // Neumaier summation: long queries add hundreds of floor-sized terms
    double sum = 0.0;
    double compensation = 0.0;
    for (auto q : query) {
        const double x = TildeDistributionStore::lookup(entries, q, store.floor_logprob());
        const double t = sum + x;
        compensation += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + compensation;
}

double tildev2_score(std::span<const TokenId> query, std::string_view doc_id,
                     const ImpactStore& store) {
    const auto& weights = store.weights(doc_id);
    double sum = 0.0;
    for (const auto& [token, count] : unique_token_counts(query)) {
        sum += static_cast<double>(count) * ImpactStore::lookup(weights, token);
    }
    return sum;
}

ScoredList rerank(const QbeQuery& query, const CandidatePool& pool,
                  std::span<const Token> query_tokens, const Scorer& scorer) {
    std::vector<double> scores;
    try {
        scores = scorer.score(query_tokens, pool.candidates);
    } catch (const NotFoundError& e) {
        throw NotFoundError("query \"" + query.query_id + "\": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError("query \"" + query.query_id + "\": " + e.what());
    }
    std::vector<ScoredDoc> entries;
    entries.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        entries.push_back({pool.candidates[i], scores[i]});
    }
    return make_scored_list(query.query_id, std::move(entries));
}

std::vector<ScoredList> rerank_all(const PoolSet& pools, const Corpus& corpus,
                                   const Analyzer& analyzer, const Scorer& scorer,
                                   TextOrder order, unsigned threads) {
    std::vector<ScoredList> out(pools.pools.size());
    parallel_for(pools.pools.size(), threads, [&](std::size_t i) {
        const auto& q = pools.queries[i];
        const auto tokens = analyzer.analyze(compose_text(corpus.at(q.doc_id), order));
        out[i] = rerank(q, pools.pools[i], tokens, scorer);
    });
    return out;
}

std::vector<TokenId> expand_document(const std::set<TokenId>& doc_token_ids,
                                     std::span<const TokenWeight> ranked,
                                     const ExpansionConfig& config, const Vocabulary& vocab) {
    if (config.m < 0) {
        throw ValidationError("expansion size m must be >= 0");
    }
    std::vector<TokenId> additions;
    std::set<TokenId> taken;
    const auto top = std::min<std::size_t>(static_cast<std::size_t>(config.m), ranked.size());
    for (std::size_t i = 0; i < top; ++i) {
        const auto id = ranked[i].token;
        if (id >= vocab.size()) {
            throw RangeError("expansion token id " + std::to_string(id) +
                             " exceeds vocabulary size");
        }
        if (config.exclude_special_tokens && vocab.is_special(id)) {
            continue;
        }
        if (config.exclude_continuation_pieces && vocab.is_continuation(id)) {
            continue;
        }
        if (doc_token_ids.contains(id) || !taken.insert(id).second) {
            continue;
        }
        additions.push_back(id);
    }
    return additions;
}

ExpansionStats expansion_stats(const std::map<std::string, std::vector<TokenId>>& additions) {
    if (additions.empty()) {
        throw ValidationError("expansion statistics need at least one document");
    }
    ExpansionStats stats;
    double total = 0.0;
    for (const auto& [doc, added] : additions) {
        stats.per_doc.emplace(doc, added.size());
        total += static_cast<double>(added.size());
    }
    stats.mean_added = total / static_cast<double>(additions.size());
    return stats;
}

void write_expansions(const std::map<std::string, std::vector<TokenId>>& additions,
                      const std::filesystem::path& path) {
    io::write_atomic(path, [&](std::ostream& out) {
        for (const auto& [doc, added] : additions) {
            nlohmann::json obj = {{"doc_id", doc}, {"added_token_ids", added}};
            out << obj.dump() << '\n';
        }
    });
}

std::map<std::string, std::vector<TokenId>> load_expansions(const std::filesystem::path& path) {
    const auto lines = io::read_lines(path);
    const auto src = path.string();
    std::map<std::string, std::vector<TokenId>> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (io::is_blank(lines[i])) {
            continue;
        }
        try {
            auto obj = nlohmann::json::parse(lines[i]);
            auto doc = obj.at("doc_id").get<std::string>();
            auto ids = obj.at("added_token_ids").get<std::vector<TokenId>>();
            if (!out.emplace(doc, std::move(ids)).second) {
                throw ConflictError(src + ":" + std::to_string(i + 1) + ": duplicate doc \"" +
                                    doc + "\"");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(src, i + 1, e.what());
        }
    }
    return out;
}

}  // namespace lexica
