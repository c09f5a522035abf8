#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lexica/corpus.hpp"
#include "lexica/scored_list.hpp"

namespace lexica::testing {

/// Directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

std::filesystem::path data_path(const std::string& name);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Positional reference definitions. `relevant` flags follow rank order.
double brute_force_ap(const std::vector<bool>& relevant, std::size_t total_relevant);
double brute_force_ndcg(const std::vector<bool>& relevant, std::size_t total_relevant);

/// A scored run pair plus judgments for fusion tests.
struct FusionFixture {
    std::vector<ScoredList> bm25;
    std::vector<ScoredList> ctx;
    Qrels qrels;
};

/// Random scores with frequent ties, 1-5 positives per query.
FusionFixture random_fusion_fixture(std::uint64_t seed, std::size_t num_queries,
                                    std::size_t candidates);

/// Queries where each scorer puts a disjoint half of the positives on top and
/// the other half at the bottom, so neither endpoint is best; a few queries
/// favor one scorer outright so that no single α is best everywhere.
FusionFixture planted_complementary_fixture();

struct SyntheticShape {
    std::size_t queries = 1000;
    std::size_t candidates = 30;
    std::size_t positives = 5;
    std::size_t vocab_size = 30522;
    std::size_t abstract_words = 60;
    std::size_t tilde_entries = 48;
    std::uint64_t seed = 7;
};

struct SyntheticPaths {
    std::filesystem::path corpus;
    std::filesystem::path pools;
    std::filesystem::path qrels;
    std::filesystem::path vocab;
    std::filesystem::path tilde;
    std::filesystem::path impacts;
};

/// Writes a corpus, pools, qrels, vocabulary and both contextualized stores
/// shaped like the SciDocs reranking tasks. Deterministic in `shape.seed`.
SyntheticPaths write_synthetic_dataset(const std::filesystem::path& dir,
                                       const SyntheticShape& shape);

}  // namespace lexica::testing
