#include "lexica/fuse.hpp"

#include <algorithm>
#include <cmath>

#include "lexica/error.hpp"

namespace lexica {

AlphaGrid AlphaGrid::with_step(double step) {
    if (!(step > 0.0 && step <= 1.0)) {
        throw ValidationError("grid step must lie in (0, 1]");
    }
    AlphaGrid grid;
    const double inverse = 1.0 / step;
    const double rounded = std::round(inverse);
    if (std::fabs(inverse - rounded) < 1e-9) {
        // divide instead of accumulating so 0.1 steps land on exact decimals
        const auto n = static_cast<int>(rounded);
        for (int i = 0; i <= n; ++i) {
            grid.values.push_back(static_cast<double>(i) / n);
        }
    } else {
        for (int i = 0; static_cast<double>(i) * step < 1.0; ++i) {
            grid.values.push_back(static_cast<double>(i) * step);
        }
        grid.values.push_back(1.0);
    }
    return grid;
}

void AlphaGrid::validate() const {
    if (values.empty()) {
        throw ValidationError("alpha grid is empty");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
            throw ValidationError("alpha grid value outside [0, 1]");
        }
        if (i > 0 && !(values[i] > values[i - 1])) {
            throw ValidationError("alpha grid must be strictly increasing");
        }
    }
}

ZStats z_stats(std::span<const double> scores) {
    if (scores.empty()) {
        throw ValidationError("cannot z-scale an empty score list");
    }
    const double n = static_cast<double>(scores.size());
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= n;
    double ss = 0.0;
    for (double s : scores) ss += (s - mean) * (s - mean);
    return {mean, std::sqrt(ss / n)};
}

std::vector<double> z_scale(std::span<const double> scores) {
    const auto stats = z_stats(scores);
    std::vector<double> out;
    out.reserve(scores.size());
    for (double s : scores) {
        out.push_back(stats.apply(s));
    }
    return out;
}

namespace {

struct Column {
    std::vector<std::string> doc_ids;  // sorted
    std::vector<double> scores;        // aligned with doc_ids
};

Column by_doc_id(const ScoredList& list) {
    std::vector<const ScoredDoc*> sorted;
    sorted.reserve(list.entries.size());
    for (const auto& e : list.entries) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(),
              [](const ScoredDoc* a, const ScoredDoc* b) { return a->doc_id < b->doc_id; });
    Column c;
    for (const auto* e : sorted) {
        c.doc_ids.push_back(e->doc_id);
        c.scores.push_back(e->score);
    }
    return c;
}

void check_same_pool(const std::string& query_id, const Column& a, const Column& b) {
    if (a.doc_ids == b.doc_ids) {
        return;
    }
    std::vector<std::string> only_a;
    std::vector<std::string> only_b;
    std::set_difference(a.doc_ids.begin(), a.doc_ids.end(), b.doc_ids.begin(), b.doc_ids.end(),
                        std::back_inserter(only_a));
    std::set_difference(b.doc_ids.begin(), b.doc_ids.end(), a.doc_ids.begin(), a.doc_ids.end(),
                        std::back_inserter(only_b));
    std::string msg = "candidate sets differ for query \"" + query_id + "\":";
    for (const auto& d : only_a) msg += " bm25-only:" + d;
    for (const auto& d : only_b) msg += " ctx-only:" + d;
    if (only_a.empty() && only_b.empty()) msg += " repeated documents";
    throw AlignmentError(msg);
}

AlignedQuery align_one(const ScoredList& bm25, const ScoredList& ctx, const ZStats* bm25_global,
                       const ZStats* ctx_global) {
    if (bm25.query_id != ctx.query_id) {
        throw AlignmentError("cannot fuse lists of queries \"" + bm25.query_id + "\" and \"" +
                             ctx.query_id + "\"");
    }
    auto a = by_doc_id(bm25);
    auto b = by_doc_id(ctx);
    check_same_pool(bm25.query_id, a, b);
    AlignedQuery q;
    q.query_id = bm25.query_id;
    if (bm25_global != nullptr) {
        for (double s : a.scores) q.bm25_z.push_back(bm25_global->apply(s));
        for (double s : b.scores) q.ctx_z.push_back(ctx_global->apply(s));
    } else {
        q.bm25_z = z_scale(a.scores);
        q.ctx_z = z_scale(b.scores);
    }
    q.doc_ids = std::move(a.doc_ids);
    return q;
}

}  // namespace

ScoredList AlignedQuery::fuse(double alpha) const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ValidationError("alpha must lie in [0, 1]");
    }
    std::vector<ScoredDoc> entries;
    entries.reserve(doc_ids.size());
    for (std::size_t i = 0; i < doc_ids.size(); ++i) {
        entries.push_back({doc_ids[i], alpha * bm25_z[i] + (1.0 - alpha) * ctx_z[i]});
    }
    std::sort(entries.begin(), entries.end(), ranks_before);
    return ScoredList{query_id, std::move(entries)};
}

ScoredList interpolate(const ScoredList& bm25, const ScoredList& ctx, double alpha) {
    return align_one(bm25, ctx, nullptr, nullptr).fuse(alpha);
}

std::vector<AlignedQuery> align_runs(const std::vector<ScoredList>& bm25,
                                     const std::vector<ScoredList>& ctx, ZScope scope) {
    std::map<std::string_view, const ScoredList*> a;
    std::map<std::string_view, const ScoredList*> b;
    for (const auto& l : bm25) {
        if (!a.emplace(l.query_id, &l).second) {
            throw AlignmentError("query \"" + l.query_id + "\" repeated in BM25 run");
        }
    }
    for (const auto& l : ctx) {
        if (!b.emplace(l.query_id, &l).second) {
            throw AlignmentError("query \"" + l.query_id + "\" repeated in contextualized run");
        }
    }
    std::string missing;
    for (const auto& [q, _] : a) {
        if (!b.contains(q)) missing += " bm25-only:" + std::string(q);
    }
    for (const auto& [q, _] : b) {
        if (!a.contains(q)) missing += " ctx-only:" + std::string(q);
    }
    if (!missing.empty()) {
        throw AlignmentError("runs cover different queries:" + missing);
    }

    ZStats ga;
    ZStats gb;
    if (scope == ZScope::Global) {
        std::vector<double> all_a;
        std::vector<double> all_b;
        for (const auto& [q, l] : a) {
            for (const auto& e : l->entries) all_a.push_back(e.score);
        }
        for (const auto& [q, l] : b) {
            for (const auto& e : l->entries) all_b.push_back(e.score);
        }
        ga = z_stats(all_a);
        gb = z_stats(all_b);
    }
    std::vector<AlignedQuery> out;
    out.reserve(a.size());
    for (const auto& [q, l] : a) {
        out.push_back(scope == ZScope::Global ? align_one(*l, *b.at(q), &ga, &gb)
                                              : align_one(*l, *b.at(q), nullptr, nullptr));
    }
    return out;
}

namespace {

// metric of one query at every grid value
std::vector<double> query_curve(const AlignedQuery& q, const Qrels& qrels, const AlphaGrid& grid,
                                MetricKind metric) {
    std::vector<double> curve;
    curve.reserve(grid.values.size());
    for (double alpha : grid.values) {
        curve.push_back(evaluate_query(metric, q.fuse(alpha), qrels));
    }
    return curve;
}

// aggregation always runs in query-id order so sums are reproducible
std::vector<const AlignedQuery*> in_id_order(const std::vector<AlignedQuery>& queries) {
    std::vector<const AlignedQuery*> ordered;
    ordered.reserve(queries.size());
    for (const auto& q : queries) ordered.push_back(&q);
    std::sort(ordered.begin(), ordered.end(), [](const AlignedQuery* a, const AlignedQuery* b) {
        return a->query_id < b->query_id;
    });
    return ordered;
}

}  // namespace

std::vector<AlphaAggregate> sweep_fixed(const std::vector<AlignedQuery>& queries,
                                        const Qrels& qrels, const AlphaGrid& grid,
                                        MetricKind metric) {
    grid.validate();
    if (queries.empty()) {
        throw ValidationError("sweep needs at least one query");
    }
    std::vector<double> sums(grid.values.size(), 0.0);
    for (const auto* q : in_id_order(queries)) {
        const auto curve = query_curve(*q, qrels, grid, metric);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            sums[i] += curve[i];
        }
    }
    std::vector<AlphaAggregate> out;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        out.push_back({grid.values[i], sums[i] / static_cast<double>(queries.size())});
    }
    return out;
}

double tune_alpha(const std::vector<AlignedQuery>& queries,
                  const std::set<std::string>& validation_query_ids, const Qrels& qrels,
                  const AlphaGrid& grid, MetricKind metric) {
    std::vector<AlignedQuery> subset;
    for (const auto& q : queries) {
        if (validation_query_ids.contains(q.query_id)) {
            subset.push_back(q);
        }
    }
    if (subset.empty()) {
        throw ValidationError("validation set is empty");
    }
    const auto curve = sweep_fixed(subset, qrels, grid, metric);
    auto best = curve.front();
    for (const auto& point : curve) {
        if (point.metric > best.metric) {
            best = point;
        }
    }
    return best.alpha;
}

OracleResult oracle_sweep(const std::vector<AlignedQuery>& queries, const Qrels& qrels,
                          const AlphaGrid& grid, MetricKind metric, QuantileMethod quantiles) {
    grid.validate();
    if (queries.empty()) {
        throw ValidationError("oracle sweep needs at least one query");
    }
    OracleResult r;
    std::vector<double> alphas;
    double metric_sum = 0.0;
    double alpha_sum = 0.0;
    const auto ordered = in_id_order(queries);
    for (const auto* q : ordered) {
        const auto curve = query_curve(*q, qrels, grid, metric);
        std::size_t best = 0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            if (curve[i] > curve[best]) {
                best = i;
            }
        }
        const double alpha = grid.values[best];
        r.per_query_alpha[q->query_id] = alpha;
        r.per_query_metric[q->query_id] = curve[best];
        metric_sum += curve[best];
        alpha_sum += alpha;
        alphas.push_back(alpha);
        if (alpha == 0.0) ++r.count_alpha_zero;
        if (alpha == 1.0) ++r.count_alpha_one;
    }
    const double n = static_cast<double>(ordered.size());
    r.aggregate_metric = metric_sum / n;
    r.alpha_average = alpha_sum / n;
    r.alpha_iqr = iqr(alphas, quantiles);
    return r;
}

double quantile(std::vector<double> values, double p, QuantileMethod method) {
    if (values.empty()) {
        throw ValidationError("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double h = method == QuantileMethod::Type7 ? (n - 1.0) * p : (n + 1.0) * p - 1.0;
    h = std::clamp(h, 0.0, n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double iqr(std::span<const double> values, QuantileMethod method) {
    std::vector<double> v(values.begin(), values.end());
    return quantile(v, 0.75, method) - quantile(v, 0.25, method);
}

}  // namespace lexica
