#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexica/textproc.hpp"

namespace lexica {

/// ln(1e-6): score of a token missing from a document's sparse distribution.
inline const double kDefaultFloorLogprob = std::log(1e-6);

struct TokenWeight {
    TokenId token = 0;
    double value = 0.0;

    friend bool operator==(const TokenWeight&, const TokenWeight&) = default;
};

/// Sparse per-document entries sorted by token id.
using SparseVector = std::vector<TokenWeight>;

/// Precomputed per-document token log-probabilities. Lookups are total: a
/// token missing from a document scores the floor.
class TildeDistributionStore {
  public:
    TildeDistributionStore(std::size_t vocab_size, double floor_logprob);

    /// Throws ValidationError for a positive or non-finite log-probability,
    /// RangeError for an out-of-vocabulary token id and ConflictError for a
    /// repeated document.
    void insert(std::string doc_id, std::vector<TokenWeight> entries);

    bool contains(std::string_view doc_id) const;
    const SparseVector& entries(std::string_view doc_id) const;

    /// Throws NotFoundError for an unknown document.
    double lookup(std::string_view doc_id, TokenId token) const;
    static double lookup(const SparseVector& entries, TokenId token, double floor);

    /// Entries by descending log-probability, ties by ascending token id.
    std::vector<TokenWeight> ranked(std::string_view doc_id) const;

    double floor_logprob() const noexcept { return floor_; }
    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::size_t size() const noexcept { return docs_.size(); }
    const std::map<std::string, SparseVector, std::less<>>& documents() const noexcept {
        return docs_;
    }

  private:
    std::size_t vocab_size_;
    double floor_;
    std::map<std::string, SparseVector, std::less<>> docs_;
};

/// Per-document maximum impact weight per token. Missing tokens weigh 0.
class ImpactStore {
  public:
    explicit ImpactStore(std::size_t vocab_size);

    /// Throws ValidationError for a negative or non-finite weight, RangeError
    /// for an out-of-vocabulary token id and ConflictError for a repeated
    /// document. Repeated tokens within a document keep their maximum.
    void insert(std::string doc_id, std::vector<TokenWeight> weights);

    bool contains(std::string_view doc_id) const;
    const SparseVector& weights(std::string_view doc_id) const;

    /// Throws NotFoundError for an unknown document.
    double lookup(std::string_view doc_id, TokenId token) const;
    static double lookup(const SparseVector& weights, TokenId token);

    /// Adds expansion tokens to a document using the weights `source` holds
    /// for that document. Tokens without a supplied weight are skipped and
    /// tokens already present keep the larger weight. Returns the number of
    /// tokens added.
    std::size_t merge_expansion(std::string_view doc_id, const std::vector<TokenId>& additions,
                                const ImpactStore& source);

    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::size_t size() const noexcept { return docs_.size(); }
    const std::map<std::string, SparseVector, std::less<>>& documents() const noexcept {
        return docs_;
    }

  private:
    std::size_t vocab_size_;
    std::map<std::string, SparseVector, std::less<>> docs_;
};

/// Line-delimited {doc_id, entries: [[token_id, logprob], ...]}. The floor is
/// `floor_logprob` when given, else that of a {"floor_logprob": x} record (no
/// doc_id) in the file, else kDefaultFloorLogprob.
TildeDistributionStore load_tilde_store(const std::filesystem::path& path, std::size_t vocab_size,
                                        std::optional<double> floor_logprob = std::nullopt);
void write_tilde_store(const TildeDistributionStore& store, const std::filesystem::path& path,
                       bool write_floor = true);

/// Line-delimited {doc_id, weights: [[token_id, weight], ...]}.
ImpactStore load_impact_store(const std::filesystem::path& path, std::size_t vocab_size);
void write_impact_store(const ImpactStore& store, const std::filesystem::path& path);

}  // namespace lexica
