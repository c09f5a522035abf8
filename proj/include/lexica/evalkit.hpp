#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lexica/corpus.hpp"
#include "lexica/scored_list.hpp"

namespace lexica {

enum class MetricKind { MAP, NDCG };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

struct PerQueryMetrics {
    MetricKind metric = MetricKind::MAP;
    std::map<std::string, double> values;
};

/// Precision at each relevant document's rank, averaged over every relevant
/// document judged for the query. Unjudged candidates count as non-relevant.
/// Throws ValidationError when the query has no relevant judgment.
double average_precision(const ScoredList& ranking, const Qrels& qrels);

/// Binary-gain DCG with a 1/log2(rank + 1) discount over the full list,
/// normalized by the ideal DCG of the query's judgments.
double ndcg(const ScoredList& ranking, const Qrels& qrels);

double evaluate_query(MetricKind metric, const ScoredList& ranking, const Qrels& qrels);

PerQueryMetrics evaluate_run(MetricKind metric, const std::vector<ScoredList>& run,
                             const Qrels& qrels);

/// Arithmetic mean over queries, summed in query-id order.
double aggregate(const PerQueryMetrics& per_query);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    /// Set when every difference equals the same non-zero value: the sample
    /// deviation vanishes and p is reported as 0.
    bool degenerate = false;
};

/// Two-sided paired t-test on per-query differences a - b with n - 1 degrees
/// of freedom. Throws AlignmentError when the query sets differ and
/// ValidationError for fewer than two queries.
TTestResult paired_t_test(const PerQueryMetrics& a, const PerQueryMetrics& b);

/// min(1, p * num_comparisons).
double bonferroni(double p, int num_comparisons);

struct SignificanceReport {
    std::string system_a;
    std::string system_b;
    double t_statistic = 0.0;
    double p_value = 1.0;
    int num_comparisons = 1;
    double adjusted_p = 1.0;
    bool significant = false;
    bool degenerate = false;
};

SignificanceReport compare_systems(std::string system_a, const PerQueryMetrics& a,
                                   std::string system_b, const PerQueryMetrics& b,
                                   int num_comparisons, double level = 0.05);

/// TREC run: query_id Q0 doc_id rank score tag, one line per candidate.
/// Lists keep file order when their ranks run 1..n; otherwise a warning is
/// recorded and the list is re-ranked by score.
std::map<std::string, ScoredList> read_run(const std::filesystem::path& path,
                                           std::vector<std::string>* warnings = nullptr);
void write_run(const std::vector<ScoredList>& lists, const std::filesystem::path& path,
               std::string_view tag);
std::string format_run(const std::vector<ScoredList>& lists, std::string_view tag);

}  // namespace lexica
