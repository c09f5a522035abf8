#include "lexica/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "lexica/error.hpp"

namespace lexica {

std::string_view to_string(MetricKind kind) {
    return kind == MetricKind::MAP ? "map" : "ndcg";
}

MetricKind parse_metric_kind(std::string_view name) {
    if (name == "map") return MetricKind::MAP;
    if (name == "ndcg") return MetricKind::NDCG;
    throw ConfigError("unknown metric \"" + std::string(name) + "\"");
}

namespace {

std::size_t require_relevant(const ScoredList& ranking, const Qrels& qrels) {
    const auto n = qrels.num_relevant(ranking.query_id);
    if (n == 0) {
        throw ValidationError("query \"" + ranking.query_id + "\" has no relevant judgments");
    }
    return n;
}

}  // namespace

double average_precision(const ScoredList& ranking, const Qrels& qrels) {
    const auto total_relevant = require_relevant(ranking, qrels);
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        if (qrels.grade(ranking.query_id, ranking.entries[i].doc_id) > 0) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(total_relevant);
}

double ndcg(const ScoredList& ranking, const Qrels& qrels) {
    const auto total_relevant = require_relevant(ranking, qrels);
    double dcg = 0.0;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        if (qrels.grade(ranking.query_id, ranking.entries[i].doc_id) > 0) {
            dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    double ideal = 0.0;
    for (std::size_t i = 0; i < total_relevant; ++i) {
        ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    return dcg / ideal;
}

double evaluate_query(MetricKind metric, const ScoredList& ranking, const Qrels& qrels) {
    return metric == MetricKind::MAP ? average_precision(ranking, qrels) : ndcg(ranking, qrels);
}

PerQueryMetrics evaluate_run(MetricKind metric, const std::vector<ScoredList>& run,
                             const Qrels& qrels) {
    PerQueryMetrics out{metric, {}};
    for (const auto& list : run) {
        out.values[list.query_id] = evaluate_query(metric, list, qrels);
    }
    return out;
}

double aggregate(const PerQueryMetrics& per_query) {
    if (per_query.values.empty()) {
        throw ValidationError("cannot aggregate an empty metric set");
    }
    double sum = 0.0;
    for (const auto& [_, v] : per_query.values) {
        sum += v;
    }
    return sum / static_cast<double>(per_query.values.size());
}

TTestResult paired_t_test(const PerQueryMetrics& a, const PerQueryMetrics& b) {
    std::vector<std::string> only_a;
    std::vector<std::string> only_b;
    for (const auto& [q, _] : a.values) {
        if (!b.values.contains(q)) only_a.push_back(q);
    }
    for (const auto& [q, _] : b.values) {
        if (!a.values.contains(q)) only_b.push_back(q);
    }
    if (!only_a.empty() || !only_b.empty()) {
        std::string msg = "paired test needs identical query sets;";
        for (const auto& q : only_a) msg += " only-a:" + q;
        for (const auto& q : only_b) msg += " only-b:" + q;
        throw AlignmentError(msg);
    }
    const auto n = a.values.size();
    if (n < 2) {
        throw ValidationError("paired test needs at least two queries");
    }
    std::vector<double> diffs;
    diffs.reserve(n);
    for (const auto& [q, va] : a.values) {
        diffs.push_back(va - b.values.at(q));
    }
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult r;
    if (sd == 0.0) {
        if (mean == 0.0) {
            return r;  // identical systems
        }
        r.t = mean > 0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
        r.p = 0.0;
        r.degenerate = true;
        return r;
    }
    r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))));
    return r;
}

double bonferroni(double p, int num_comparisons) {
    if (num_comparisons < 1) {
        throw ValidationError("Bonferroni correction needs at least one comparison");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("p-value must lie in [0, 1]");
    }
    return std::min(1.0, p * static_cast<double>(num_comparisons));
}

SignificanceReport compare_systems(std::string system_a, const PerQueryMetrics& a,
                                   std::string system_b, const PerQueryMetrics& b,
                                   int num_comparisons, double level) {
    const auto test = paired_t_test(a, b);
    SignificanceReport r;
    r.system_a = std::move(system_a);
    r.system_b = std::move(system_b);
    r.t_statistic = test.t;
    r.p_value = test.p;
    r.num_comparisons = num_comparisons;
    r.adjusted_p = bonferroni(test.p, num_comparisons);
    r.significant = r.adjusted_p < level;
    r.degenerate = test.degenerate;
    return r;
}

}  // namespace lexica
