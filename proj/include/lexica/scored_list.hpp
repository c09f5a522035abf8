#pragma once

#include <string>
#include <vector>

namespace lexica {

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// One query's candidates ordered by score descending, ties by doc_id
/// ascending. Doc ids are unique.
struct ScoredList {
    std::string query_id;
    std::vector<ScoredDoc> entries;

    friend bool operator==(const ScoredList&, const ScoredList&) = default;
};

/// The engine-wide ordering: score descending, then doc_id ascending.
inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.doc_id < b.doc_id;
}

/// Sorts into canonical order; throws ConflictError on a repeated doc_id.
ScoredList make_scored_list(std::string query_id, std::vector<ScoredDoc> entries);

/// Doc ids in rank order.
std::vector<std::string> permutation(const ScoredList& list);

}  // namespace lexica
