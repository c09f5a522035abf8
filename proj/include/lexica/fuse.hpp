#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lexica/corpus.hpp"
#include "lexica/evalkit.hpp"
#include "lexica/scored_list.hpp"

namespace lexica {

/// Interpolation weights in [0, 1], strictly increasing.
struct AlphaGrid {
    std::vector<double> values;

    /// 0, step, 2*step, ... and always 1. The default step gives 11 values.
    static AlphaGrid with_step(double step = 0.1);

    /// Throws ValidationError unless values are non-empty, strictly
    /// increasing and inside [0, 1].
    void validate() const;
};

/// Where z-scaling statistics come from: each query's own pool, or every
/// score of the run at once.
enum class ZScope { Query, Global };

struct ZStats {
    double mean = 0.0;
    double stddev = 0.0;  // population

    double apply(double x) const { return stddev == 0.0 ? 0.0 : (x - mean) / stddev; }
};

ZStats z_stats(std::span<const double> scores);

/// (s - mean) / std with the population deviation; all zeros when the
/// deviation vanishes. Throws ValidationError on empty input.
std::vector<double> z_scale(std::span<const double> scores);

/// α·z(bm25) + (1 − α)·z(ctx), z computed over this query's pool. Throws
/// AlignmentError when the two lists cover different candidates.
ScoredList interpolate(const ScoredList& bm25, const ScoredList& ctx, double alpha);

/// One query's candidates with both normalized score columns, aligned by
/// doc_id. Reused across every α of a sweep.
struct AlignedQuery {
    std::string query_id;
    std::vector<std::string> doc_ids;
    std::vector<double> bm25_z;
    std::vector<double> ctx_z;

    ScoredList fuse(double alpha) const;
};

/// Pairs the two runs query by query (in query-id order) and z-scales each
/// score column. Throws AlignmentError when the query sets or any pool differ.
std::vector<AlignedQuery> align_runs(const std::vector<ScoredList>& bm25,
                                     const std::vector<ScoredList>& ctx,
                                     ZScope scope = ZScope::Query);

struct AlphaAggregate {
    double alpha = 0.0;
    double metric = 0.0;
};

/// Aggregate metric at every grid value over the given queries.
std::vector<AlphaAggregate> sweep_fixed(const std::vector<AlignedQuery>& queries,
                                        const Qrels& qrels, const AlphaGrid& grid,
                                        MetricKind metric);

/// Grid value maximizing the aggregate metric over the validation queries,
/// the smallest one on ties. Throws ValidationError when no aligned query
/// belongs to the validation set.
double tune_alpha(const std::vector<AlignedQuery>& queries,
                  const std::set<std::string>& validation_query_ids, const Qrels& qrels,
                  const AlphaGrid& grid, MetricKind metric);

struct OracleResult {
    std::map<std::string, double> per_query_alpha;
    std::map<std::string, double> per_query_metric;
    double aggregate_metric = 0.0;
    double alpha_average = 0.0;
    std::size_t count_alpha_zero = 0;
    std::size_t count_alpha_one = 0;
    double alpha_iqr = 0.0;
};

enum class QuantileMethod { Type7, Type6 };

/// Per query, the smallest grid α reaching that query's best metric, plus
/// the summary statistics over the chosen values.
OracleResult oracle_sweep(const std::vector<AlignedQuery>& queries, const Qrels& qrels,
                          const AlphaGrid& grid, MetricKind metric,
                          QuantileMethod quantiles = QuantileMethod::Type7);

/// Q3 − Q1. Type 7 interpolates at h = (n − 1)p; type 6 at h = (n + 1)p − 1,
/// clamped to the sample range. Throws ValidationError on empty input.
double iqr(std::span<const double> values, QuantileMethod method = QuantileMethod::Type7);
double quantile(std::vector<double> values, double p, QuantileMethod method = QuantileMethod::Type7);

}  // namespace lexica
