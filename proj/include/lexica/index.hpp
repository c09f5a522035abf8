#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexica/corpus.hpp"
#include "lexica/textproc.hpp"

namespace lexica {

struct TermStats {
    std::uint32_t df = 0;
    std::uint64_t cf = 0;

    friend bool operator==(const TermStats&, const TermStats&) = default;
};

/// Collection statistics for BM25 and LM scoring. Document lengths count
/// post-analysis tokens.
struct IndexStats {
    std::uint64_t num_docs = 0;
    std::uint64_t total_tokens = 0;
    double avg_doc_len = 0.0;
    std::map<std::string, std::uint32_t, std::less<>> doc_len;
    std::map<std::string, TermStats, std::less<>> terms;

    std::uint32_t df(std::string_view term) const;
    std::uint64_t cf(std::string_view term) const;

    friend bool operator==(const IndexStats&, const IndexStats&) = default;
};

/// `doc` is the ordinal of the document in the index's sorted doc-id table, so
/// ordering by ordinal is ordering by doc_id.
struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

class InvertedIndex {
  public:
    InvertedIndex() = default;
    InvertedIndex(IndexStats stats, std::map<std::string, std::vector<Posting>, std::less<>> postings,
                  AnalyzerSpec analyzer);

    const IndexStats& stats() const noexcept { return stats_; }
    const AnalyzerSpec& analyzer() const noexcept { return analyzer_; }
    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    const std::map<std::string, std::vector<Posting>, std::less<>>& postings() const noexcept {
        return postings_;
    }

    /// Postings of a term, or nullptr for an unindexed term.
    const std::vector<Posting>* find(std::string_view term) const;
    std::optional<std::uint32_t> ordinal(std::string_view doc_id) const;
    std::uint32_t doc_len(std::uint32_t ordinal) const { return doc_lens_[ordinal]; }

    /// Term frequency by binary search over the term's postings.
    static std::uint32_t tf(const std::vector<Posting>& postings, std::uint32_t ordinal);

    friend bool operator==(const InvertedIndex& a, const InvertedIndex& b) {
        return a.stats_ == b.stats_ && a.postings_ == b.postings_ && a.analyzer_ == b.analyzer_;
    }

  private:
    IndexStats stats_;
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
    AnalyzerSpec analyzer_;
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lens_;
};

/// Analyzes every document's composed text and accumulates postings and
/// statistics. Documents are analyzed on `threads` workers and merged in
/// doc_id order. Throws ValidationError on an empty corpus.
InvertedIndex build_index(const Corpus& corpus, const Analyzer& analyzer, TextOrder order,
                          unsigned threads = 1);
InvertedIndex build_index(const Corpus& corpus, const AnalyzerSpec& spec, TextOrder order);

/// Versioned little-endian binary image; identical indexes give identical bytes.
void persist_index(const InvertedIndex& index, const std::filesystem::path& path);
InvertedIndex load_index(const std::filesystem::path& path);

std::string serialize_index(const InvertedIndex& index);
InvertedIndex deserialize_index(std::string_view bytes);

}  // namespace lexica
