#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexica {

enum class TextOrder { TitleFirst, AbstractFirst };

struct Document {
    std::string doc_id;
    std::string title;
    std::string abstract;

    friend bool operator==(const Document&, const Document&) = default;
};

/// Documents in load order with id lookup. Immutable once loaded.
class Corpus {
  public:
    Corpus() = default;
    explicit Corpus(std::vector<Document> docs);

    /// Throws ConflictError on a duplicate id and ValidationError on an
    /// empty id or a document with neither title nor abstract.
    void add(Document doc);

    const Document* find(std::string_view doc_id) const;
    const Document& at(std::string_view doc_id) const;
    bool contains(std::string_view doc_id) const { return find(doc_id) != nullptr; }

    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }
    const std::vector<Document>& documents() const noexcept { return docs_; }
    auto begin() const noexcept { return docs_.begin(); }
    auto end() const noexcept { return docs_.end(); }

    friend bool operator==(const Corpus& a, const Corpus& b) { return a.docs_ == b.docs_; }

  private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// A seed document acting as the query.
struct QbeQuery {
    std::string query_id;
    std::string doc_id;

    friend bool operator==(const QbeQuery&, const QbeQuery&) = default;
};

struct CandidatePool {
    std::string query_id;
    std::vector<std::string> candidates;

    friend bool operator==(const CandidatePool&, const CandidatePool&) = default;
};

/// Queries and their pools, index-aligned, in file order.
struct PoolSet {
    std::vector<QbeQuery> queries;
    std::vector<CandidatePool> pools;
};

struct RelevanceJudgment {
    std::string query_id;
    std::string doc_id;
    int grade = 0;

    friend bool operator==(const RelevanceJudgment&, const RelevanceJudgment&) = default;
};

/// Binary judgments grouped by query. Judgments keep file order within a query.
class Qrels {
  public:
    /// Throws ConflictError on a repeated (query_id, doc_id) pair and
    /// ValidationError on a grade outside {0, 1}.
    void add(RelevanceJudgment judgment);

    /// Grade of a judged pair, 0 for unjudged.
    int grade(std::string_view query_id, std::string_view doc_id) const;
    bool has_query(std::string_view query_id) const;
    const std::vector<RelevanceJudgment>& judgments(std::string_view query_id) const;
    std::size_t num_relevant(std::string_view query_id) const;
    std::vector<std::string> query_ids() const;
    std::size_t size() const noexcept { return count_; }

  private:
    struct Entry {
        std::vector<RelevanceJudgment> list;
        std::map<std::string, int, std::less<>> grades;
    };
    std::map<std::string, Entry, std::less<>> by_query_;
    std::size_t count_ = 0;
};

struct DatasetSplit {
    std::set<std::string> train_query_ids;
    std::set<std::string> validation_query_ids;
    std::uint64_t seed = 0;
};

struct TrainingTriplet {
    std::string query_id;
    std::string positive_doc_id;
    std::string negative_doc_id;

    friend bool operator==(const TrainingTriplet&, const TrainingTriplet&) = default;
};

/// Line-delimited JSON records {doc_id, title, abstract}. Blank lines are skipped.
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Line-delimited JSON records {query_id, candidates[, query_doc_id]}. The
/// query document defaults to the document named by query_id. Every id must
/// resolve in `corpus`.
PoolSet load_pools(const std::filesystem::path& path, const Corpus& corpus);
void write_pools(const PoolSet& pools, const std::filesystem::path& path);

/// TREC qrels: query_id 0 doc_id grade. When `corpus` is given, every doc_id
/// must resolve in it.
Qrels load_qrels(const std::filesystem::path& path, const Corpus* corpus = nullptr);

/// Joins title and abstract with a single space; an empty field is dropped.
std::string compose_text(const Document& doc, TextOrder order);

/// Seeded Fisher-Yates shuffle followed by a prefix split; the train part
/// holds floor(train_fraction * n) queries.
DatasetSplit split_validation(const std::vector<std::string>& query_ids, double train_fraction,
                              std::uint64_t seed);

/// Pairs every positive with `negatives_per_positive` sampled negatives.
std::vector<TrainingTriplet> make_triplets(std::string_view query_id,
                                           const std::vector<RelevanceJudgment>& judgments,
                                           int negatives_per_positive, std::uint64_t seed);

/// Tab-separated query_id, positive_doc_id, negative_doc_id.
void write_triplets(const std::vector<TrainingTriplet>& triplets,
                    const std::filesystem::path& path);

}  // namespace lexica
