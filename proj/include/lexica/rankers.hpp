#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexica/corpus.hpp"
#include "lexica/index.hpp"
#include "lexica/scored_list.hpp"
#include "lexica/stores.hpp"
#include "lexica/textproc.hpp"

namespace lexica {

struct Bm25Params {
    double k1 = 2.75;
    double b = 1.0;
    /// Weight each distinct query term by its query count instead of once.
    bool query_multiplicity = false;

    void validate() const;
};

struct LmJmParams {
    double lambda = 0.1;

    void validate() const;
};

/// Scores every candidate of one analyzed query. Implementations are pure
/// functions of immutable indexes and stores.
class Scorer {
  public:
    virtual ~Scorer() = default;

    /// Throws NotFoundError for a candidate the scorer has no data for.
    virtual std::vector<double> score(std::span<const Token> query,
                                      std::span<const std::string> candidates) const = 0;
};

/// Lucene-style BM25:
///   idf = ln(1 + (N - df + 0.5) / (df + 0.5))
///   w   = idf * tf / (tf + k1 * (1 - b + b * dl / avgdl))
class Bm25Scorer final : public Scorer {
  public:
    Bm25Scorer(const InvertedIndex& index, Bm25Params params);

    std::vector<double> score(std::span<const Token> query,
                              std::span<const std::string> candidates) const override;

  private:
    const InvertedIndex& index_;
    Bm25Params params_;
};

/// Lucene's Jelinek-Mercer form: per query token occurrence with tf > 0,
///   ln(1 + ((1 - lambda) * tf / dl) / (lambda * cf / T))
class LmJmScorer final : public Scorer {
  public:
    LmJmScorer(const InvertedIndex& index, LmJmParams params);

    std::vector<double> score(std::span<const Token> query,
                              std::span<const std::string> candidates) const override;

  private:
    const InvertedIndex& index_;
    LmJmParams params_;
};

/// Query likelihood: sum of the document's log-probabilities over every query
/// token occurrence, the floor standing in for missing tokens.
class TildeScorer final : public Scorer {
  public:
    explicit TildeScorer(const TildeDistributionStore& store) : store_(store) {}

    std::vector<double> score(std::span<const Token> query,
                              std::span<const std::string> candidates) const override;

  private:
    const TildeDistributionStore& store_;
};

/// Exact match: sum over unique query tokens of query count times the
/// document's stored (maximum) impact weight.
class TildeV2Scorer final : public Scorer {
  public:
    explicit TildeV2Scorer(const ImpactStore& store) : store_(store) {}

    std::vector<double> score(std::span<const Token> query,
                              std::span<const std::string> candidates) const override;

  private:
    const ImpactStore& store_;
};

double bm25_score(std::span<const std::string> query_terms, std::string_view doc_id,
                  const InvertedIndex& index, const Bm25Params& params = {});
double lm_jm_score(std::span<const std::string> query_terms, std::string_view doc_id,
                   const InvertedIndex& index, const LmJmParams& params = {});
double tilde_ql(std::span<const TokenId> query, std::string_view doc_id,
                const TildeDistributionStore& store);
double tildev2_score(std::span<const TokenId> query, std::string_view doc_id,
                     const ImpactStore& store);

/// Scores a pool and orders it canonically. Scoring failures are rethrown
/// with the query id attached.
ScoredList rerank(const QbeQuery& query, const CandidatePool& pool,
                  std::span<const Token> query_tokens, const Scorer& scorer);

/// Reranks every pool, analyzing each query document's composed text.
/// Output order follows the pool set regardless of `threads`.
std::vector<ScoredList> rerank_all(const PoolSet& pools, const Corpus& corpus,
                                   const Analyzer& analyzer, const Scorer& scorer,
                                   TextOrder order, unsigned threads = 1);

struct ExpansionConfig {
    int m = 0;
    bool exclude_continuation_pieces = true;
    bool exclude_special_tokens = true;
};

/// New-terms-only expansion: of the top-m entries of `ranked` (sorted by
/// descending log-probability), returns in rank order those that pass the
/// filters and are not already in the document.
std::vector<TokenId> expand_document(const std::set<TokenId>& doc_token_ids,
                                     std::span<const TokenWeight> ranked,
                                     const ExpansionConfig& config, const Vocabulary& vocab);

struct ExpansionStats {
    double mean_added = 0.0;
    std::map<std::string, std::size_t> per_doc;
};

/// Throws ValidationError on empty input.
ExpansionStats expansion_stats(const std::map<std::string, std::vector<TokenId>>& additions);

/// Line-delimited {doc_id, added_token_ids: [...]}.
void write_expansions(const std::map<std::string, std::vector<TokenId>>& additions,
                      const std::filesystem::path& path);
std::map<std::string, std::vector<TokenId>> load_expansions(const std::filesystem::path& path);

}  // namespace lexica
