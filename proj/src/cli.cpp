#include "lexica/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "lexica/corpus.hpp"
#include "lexica/error.hpp"
#include "lexica/evalkit.hpp"
#include "lexica/fuse.hpp"
#include "lexica/index.hpp"
#include "lexica/io_util.hpp"
#include "lexica/parallel.hpp"
#include "lexica/rankers.hpp"
#include "lexica/stores.hpp"
#include "lexica/textproc.hpp"

namespace lexica::cli {

namespace {

using nlohmann::json;

struct Common {
    int threads = 0;
    std::uint64_t seed = 42;
    std::string title_order = "title-first";
};

struct AnalyzerFlags {
    std::string analyzer = "sa";
    std::string vocab;
    bool cased = false;
    bool keep_accents = false;
};

struct IndexArgs {
    std::string corpus;
    std::string output;
    AnalyzerFlags analyzer;
};

struct RerankArgs {
    std::string corpus;
    std::string pools;
    std::string index;
    std::string scorer;
    AnalyzerFlags analyzer;
    double k1 = 2.75;
    double b = 1.0;
    bool query_multiplicity = false;
    double lambda = 0.1;
    std::string tilde_store;
    std::string impact_store;
    std::optional<double> floor_logprob;
    std::string expansion;
    std::string expansion_impacts;
    std::string output;
    std::string tag;
};

struct FuseArgs {
    std::string bm25_run;
    std::string ctx_run;
    std::optional<double> alpha;
    std::string qrels;
    double grid_step = 0.1;
    double train_fraction = 0.85;
    std::string metric = "map";
    std::string z_scope = "query";
    std::string report;
    std::string output;
    std::string tag = "fused";
};

struct SweepArgs {
    std::string bm25_run;
    std::string ctx_run;
    std::string qrels;
    double grid_step = 0.1;
    std::string metric = "map";
    std::string z_scope = "query";
    std::string quantile = "type7";
    std::string output;
};

struct EvaluateArgs {
    std::string run;
    std::string qrels;
    std::string metric = "map";
    std::string output;
};

struct ExpandArgs {
    std::string corpus;
    std::string vocab;
    std::string tilde_store;
    int m = 200;
    bool include_continuation = false;
    std::optional<double> floor_logprob;
    std::string output;
};

struct TripletArgs {
    std::string qrels;
    std::string corpus;
    int negatives_per_positive = 2;
    std::optional<double> train_fraction;
    std::string output;
};

struct SignificanceArgs {
    std::string run_a;
    std::string run_b;
    std::string name_a;
    std::string name_b;
    std::string qrels;
    std::string metric = "map";
    int num_comparisons = 1;
    std::string output;
};

class Logger {
  public:
    explicit Logger(std::ostream& err) : err_(err) {}
    void info(const std::string& msg) const { err_ << "qbe-lexica: " << msg << '\n'; }

  private:
    std::ostream& err_;
};

TextOrder parse_order(const std::string& s) {
    return s == "abstract-first" ? TextOrder::AbstractFirst : TextOrder::TitleFirst;
}

ZScope parse_scope(const std::string& s) { return s == "global" ? ZScope::Global : ZScope::Query; }

AnalyzerSpec make_spec(const AnalyzerFlags& f) {
    AnalyzerSpec spec;
    spec.kind = parse_analyzer_kind(f.analyzer);
    if (!f.vocab.empty()) {
        spec.vocab_path = f.vocab;
    }
    spec.lowercase = !f.cased;
    spec.strip_accents = !(f.cased || f.keep_accents);
    return spec;
}

AnalyzerSpec subword_spec(const AnalyzerFlags& f) {
    auto spec = make_spec(f);
    spec.kind = AnalyzerKind::Subword;
    if (!spec.vocab_path) {
        throw ConfigError("--vocab is required to encode queries for this scorer");
    }
    return spec;
}

void add_analyzer_flags(CLI::App* sub, AnalyzerFlags& f) {
    sub->add_option("--analyzer", f.analyzer, "Analyzer pipeline")
        ->check(CLI::IsMember({"sa", "stm1", "stm2", "subword"}));
    sub->add_option("--vocab", f.vocab, "WordPiece vocabulary (one token per line)");
    sub->add_flag("--cased", f.cased, "Keep case and accents in subword analysis");
    sub->add_flag("--keep-accents", f.keep_accents, "Do not strip accents in subword analysis");
}

std::vector<ScoredList> values_of(std::map<std::string, ScoredList> lists) {
    std::vector<ScoredList> out;
    out.reserve(lists.size());
    for (auto& [_, l] : lists) {
        out.push_back(std::move(l));
    }
    return out;
}

std::vector<ScoredList> load_run(const std::string& path, const Logger& log) {
    std::vector<std::string> warnings;
    auto lists = read_run(path, &warnings);
    for (const auto& w : warnings) {
        log.info("warning: " + w);
    }
    return values_of(std::move(lists));
}

void write_jsonl(const std::string& path, const std::vector<json>& records) {
    io::write_atomic(path, [&](std::ostream& out) {
        for (const auto& r : records) {
            out << r.dump() << '\n';
        }
    });
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

void cmd_index(const IndexArgs& a, const Common& c, const Logger& log) {
    const auto corpus = load_corpus(a.corpus);
    const Analyzer analyzer(make_spec(a.analyzer));
    const auto index = build_index(corpus, analyzer, parse_order(c.title_order),
                                   resolve_threads(c.threads));
    persist_index(index, a.output);
    log.info("indexed " + std::to_string(index.stats().num_docs) + " documents, " +
             std::to_string(index.postings().size()) + " terms");
}

void cmd_rerank(const RerankArgs& a, const Common& c, const Logger& log) {
    const auto corpus = load_corpus(a.corpus);
    const auto pools = load_pools(a.pools, corpus);
    const auto order = parse_order(c.title_order);
    const auto threads = resolve_threads(c.threads);

    std::optional<InvertedIndex> index;
    std::unique_ptr<Analyzer> analyzer;
    std::shared_ptr<const Vocabulary> vocab;
    std::optional<TildeDistributionStore> tilde;
    std::optional<ImpactStore> impacts;
    std::unique_ptr<Scorer> scorer;

    if (a.scorer == "bm25" || a.scorer == "lmjm") {
        if (!a.index.empty()) {
            index = load_index(a.index);
            auto spec = index->analyzer();
            if (!a.analyzer.vocab.empty()) {
                spec.vocab_path = a.analyzer.vocab;
            }
            analyzer = std::make_unique<Analyzer>(spec);
        } else {
            analyzer = std::make_unique<Analyzer>(make_spec(a.analyzer));
            index = build_index(corpus, *analyzer, order, threads);
        }
        if (a.scorer == "bm25") {
            scorer = std::make_unique<Bm25Scorer>(
                *index, Bm25Params{a.k1, a.b, a.query_multiplicity});
        } else {
            scorer = std::make_unique<LmJmScorer>(*index, LmJmParams{a.lambda});
        }
    } else {
        auto spec = subword_spec(a.analyzer);
        vocab = std::make_shared<const Vocabulary>(Vocabulary::load(*spec.vocab_path));
        analyzer = std::make_unique<Analyzer>(spec, vocab);
        if (a.scorer == "tilde") {
            tilde = load_tilde_store(a.tilde_store, vocab->size(), a.floor_logprob);
            scorer = std::make_unique<TildeScorer>(*tilde);
        } else {
            impacts = load_impact_store(a.impact_store, vocab->size());
            if (!a.expansion.empty()) {
                const auto additions = load_expansions(a.expansion);
                const auto supplied = load_impact_store(a.expansion_impacts, vocab->size());
                std::size_t merged = 0;
                for (const auto& [doc, added] : additions) {
                    if (impacts->contains(doc)) {
                        merged += impacts->merge_expansion(doc, added, supplied);
                    }
                }
                log.info("merged " + std::to_string(merged) + " expansion tokens");
            }
            scorer = std::make_unique<TildeV2Scorer>(*impacts);
        }
    }
    const auto lists = rerank_all(pools, corpus, *analyzer, *scorer, order, threads);
    write_run(lists, a.output, a.tag.empty() ? a.scorer : a.tag);
    log.info("reranked " + std::to_string(lists.size()) + " queries with " + a.scorer);
}

std::vector<json> metric_records(const PerQueryMetrics& m) {
    std::vector<json> out;
    for (const auto& [q, v] : m.values) {
        out.push_back({{"query_id", q}, {"metric", to_string(m.metric)}, {"value", v}});
    }
    out.push_back({{"query_id", "ALL"}, {"metric", to_string(m.metric)}, {"value", aggregate(m)}});
    return out;
}

void cmd_fuse(const FuseArgs& a, const Common& c, const Logger& log) {
    const auto bm25 = load_run(a.bm25_run, log);
    const auto ctx = load_run(a.ctx_run, log);
    const auto aligned = align_runs(bm25, ctx, parse_scope(a.z_scope));
    const auto metric = parse_metric_kind(a.metric);
    std::optional<Qrels> qrels;
    if (!a.qrels.empty()) {
        qrels = load_qrels(a.qrels);
    }
    double alpha = 0.0;
    if (a.alpha) {
        alpha = *a.alpha;
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            throw ValidationError("--alpha must lie in [0, 1]");
        }
    } else {
        if (!qrels) {
            throw ConfigError("fuse needs --alpha or --qrels to tune it");
        }
        std::vector<std::string> ids;
        for (const auto& q : aligned) ids.push_back(q.query_id);
        const auto split = split_validation(ids, a.train_fraction, c.seed);
        alpha = tune_alpha(aligned, split.validation_query_ids, *qrels,
                           AlphaGrid::with_step(a.grid_step), metric);
        log.info("tuned alpha " + io::format_fixed6(alpha) + " on " +
                 std::to_string(split.validation_query_ids.size()) + " validation queries");
    }
    std::vector<ScoredList> fused;
    fused.reserve(aligned.size());
    for (const auto& q : aligned) {
        fused.push_back(q.fuse(alpha));
    }
    write_run(fused, a.output, a.tag);
    if (!a.report.empty()) {
        if (!qrels) {
            throw ConfigError("--report needs --qrels");
        }
        const auto per_query = evaluate_run(metric, fused, *qrels);
        std::vector<json> records;
        for (const auto& [q, v] : per_query.values) {
            records.push_back({{"query_id", q}, {"alpha", alpha},
                               {"metric_name", to_string(metric)}, {"metric_value", v}});
        }
        records.push_back({{"query_id", "ALL"}, {"alpha", alpha},
                           {"metric_name", to_string(metric)},
                           {"metric_value", aggregate(per_query)}});
        write_jsonl(a.report, records);
    }
}

void cmd_sweep(const SweepArgs& a, const Common&, const Logger& log) {
    const auto bm25 = load_run(a.bm25_run, log);
    const auto ctx = load_run(a.ctx_run, log);
    const auto qrels = load_qrels(a.qrels);
    const auto metric = parse_metric_kind(a.metric);
    const auto grid = AlphaGrid::with_step(a.grid_step);
    const auto aligned = align_runs(bm25, ctx, parse_scope(a.z_scope));
    const auto name = std::string(to_string(metric));

    std::vector<json> records;
    for (const auto& point : sweep_fixed(aligned, qrels, grid, metric)) {
        records.push_back({{"query_id", "ALL"}, {"kind", "fixed"}, {"alpha", point.alpha},
                           {"metric_name", name}, {"metric_value", point.metric}});
    }
    const auto oracle =
        oracle_sweep(aligned, qrels, grid, metric,
                     a.quantile == "type6" ? QuantileMethod::Type6 : QuantileMethod::Type7);
    for (const auto& [q, alpha] : oracle.per_query_alpha) {
        records.push_back({{"query_id", q}, {"kind", "oracle"}, {"alpha", alpha},
                           {"alpha_star", alpha}, {"metric_name", name},
                           {"metric_value", oracle.per_query_metric.at(q)}});
    }
    records.push_back({{"query_id", "ALL"},
                       {"kind", "oracle"},
                       {"metric_name", name},
                       {"metric_value", oracle.aggregate_metric},
                       {"alpha_average", oracle.alpha_average},
                       {"count_alpha_zero", oracle.count_alpha_zero},
                       {"count_alpha_one", oracle.count_alpha_one},
                       {"alpha_iqr", oracle.alpha_iqr}});
    write_jsonl(a.output, records);
    log.info("swept " + std::to_string(grid.values.size()) + " alpha values over " +
             std::to_string(aligned.size()) + " queries");
}

void cmd_evaluate(const EvaluateArgs& a, const Common&, const Logger& log) {
    const auto run = load_run(a.run, log);
    const auto qrels = load_qrels(a.qrels);
    const auto per_query = evaluate_run(parse_metric_kind(a.metric), run, qrels);
    write_jsonl(a.output, metric_records(per_query));
    log.info(a.metric + " = " + io::format_fixed6(aggregate(per_query)));
}

void cmd_expand(const ExpandArgs& a, const Common& c, const Logger& log) {
    const auto corpus = load_corpus(a.corpus);
    AnalyzerFlags flags;
    flags.vocab = a.vocab;
    const auto spec = subword_spec(flags);
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::load(*spec.vocab_path));
    const Analyzer analyzer(spec, vocab);
    const auto store = load_tilde_store(a.tilde_store, vocab->size(), a.floor_logprob);
    ExpansionConfig config{a.m, !a.include_continuation, true};
    const auto order = parse_order(c.title_order);

    std::vector<const Document*> docs;
    for (const auto& d : corpus) {
        if (store.contains(d.doc_id)) docs.push_back(&d);
    }
    std::vector<std::vector<TokenId>> added(docs.size());
    parallel_for(docs.size(), resolve_threads(c.threads), [&](std::size_t i) {
        const auto tokens = analyzer.analyze(compose_text(*docs[i], order));
        const auto ids = token_ids(tokens);
        const std::set<TokenId> present(ids.begin(), ids.end());
        added[i] = expand_document(present, store.ranked(docs[i]->doc_id), config, *vocab);
    });
    std::map<std::string, std::vector<TokenId>> additions;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        additions.emplace(docs[i]->doc_id, std::move(added[i]));
    }
    write_expansions(additions, a.output);
    const auto stats = expansion_stats(additions);
    log.info("mean new tokens per document: " + io::format_fixed6(stats.mean_added));
}

void cmd_triplets(const TripletArgs& a, const Common& c, const Logger& log) {
    std::optional<Corpus> corpus;
    if (!a.corpus.empty()) {
        corpus = load_corpus(a.corpus);
    }
    const auto qrels = load_qrels(a.qrels, corpus ? &*corpus : nullptr);
    auto ids = qrels.query_ids();
    if (a.train_fraction) {
        const auto split = split_validation(ids, *a.train_fraction, c.seed);
        ids.assign(split.train_query_ids.begin(), split.train_query_ids.end());
    }
    std::vector<TrainingTriplet> all;
    for (const auto& q : ids) {
        auto t = make_triplets(q, qrels.judgments(q), a.negatives_per_positive, c.seed);
        std::move(t.begin(), t.end(), std::back_inserter(all));
    }
    write_triplets(all, a.output);
    log.info("wrote " + std::to_string(all.size()) + " triplets for " +
             std::to_string(ids.size()) + " queries");
}

void cmd_significance(const SignificanceArgs& a, const Common&, const Logger& log) {
    const auto qrels = load_qrels(a.qrels);
    const auto metric = parse_metric_kind(a.metric);
    const auto ma = evaluate_run(metric, load_run(a.run_a, log), qrels);
    const auto mb = evaluate_run(metric, load_run(a.run_b, log), qrels);
    const auto r = compare_systems(a.name_a.empty() ? stem_of(a.run_a) : a.name_a, ma,
                                   a.name_b.empty() ? stem_of(a.run_b) : a.name_b, mb,
                                   a.num_comparisons);
    json rec = {{"system_a", r.system_a},       {"system_b", r.system_b},
                {"t", r.t_statistic},           {"p", r.p_value},
                {"adjusted_p", r.adjusted_p},   {"significant", r.significant},
                {"num_comparisons", r.num_comparisons}};
    if (std::isinf(r.t_statistic)) {
        rec["t"] = r.t_statistic > 0 ? "inf" : "-inf";
    }
    if (r.degenerate) {
        rec["degenerate"] = true;
    }
    write_jsonl(a.output, {rec});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Query-by-example lexical reranking toolkit", "qbe-lexica"};
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "TOML/INI file mirroring the command-line flags");

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", common.threads, "Worker threads (0 = auto)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", common.seed, "Seed for every random choice");
        sub->add_option("--title-order", common.title_order, "Field order of document text")
            ->check(CLI::IsMember({"title-first", "abstract-first"}));
    };

    IndexArgs index_args;
    auto* index = app.add_subcommand("index", "Build and persist an inverted index");
    index->add_option("--corpus", index_args.corpus)->required();
    index->add_option("--output", index_args.output)->required();
    add_analyzer_flags(index, index_args.analyzer);
    add_common(index);

    RerankArgs rr;
    auto* rerank_cmd = app.add_subcommand("rerank", "Score candidate pools with one scorer");
    rerank_cmd->add_option("--corpus", rr.corpus)->required();
    rerank_cmd->add_option("--pools", rr.pools)->required();
    rerank_cmd->add_option("--scorer", rr.scorer)
        ->required()
        ->check(CLI::IsMember({"bm25", "lmjm", "tilde", "tildev2"}));
    rerank_cmd->add_option("--index", rr.index, "Persisted index (built on the fly if absent)");
    add_analyzer_flags(rerank_cmd, rr.analyzer);
    auto* k1 = rerank_cmd->add_option("--k1", rr.k1, "BM25 term saturation");
    auto* b = rerank_cmd->add_option("--b", rr.b, "BM25 length normalization");
    auto* mult = rerank_cmd->add_flag("--bm25-query-multiplicity", rr.query_multiplicity,
                                     "Weight BM25 query terms by their count");
    auto* lambda = rerank_cmd->add_option("--lambda", rr.lambda, "Jelinek-Mercer smoothing weight");
    auto* tilde_store = rerank_cmd->add_option("--tilde-store", rr.tilde_store,
                                               "Per-document token log-probabilities");
    auto* floor = rerank_cmd->add_option("--floor-logprob", rr.floor_logprob,
                                         "Score of tokens missing from a distribution");
    auto* impact_store = rerank_cmd->add_option("--impact-store", rr.impact_store,
                                                "Per-document token impact weights");
    auto* expansion = rerank_cmd->add_option("--expansion", rr.expansion,
                                             "Expansion additions to merge (tildev2)");
    auto* expansion_impacts = rerank_cmd->add_option(
        "--expansion-impacts", rr.expansion_impacts, "Impact weights for expansion tokens");
    expansion->needs(expansion_impacts);
    expansion_impacts->needs(expansion);
    rerank_cmd->add_option("--output", rr.output)->required();
    rerank_cmd->add_option("--tag", rr.tag, "Run tag (defaults to the scorer name)");
    add_common(rerank_cmd);

    FuseArgs fa;
    auto* fuse_cmd = app.add_subcommand("fuse", "Interpolate a BM25 run with a contextualized run");
    fuse_cmd->add_option("--bm25-run", fa.bm25_run)->required();
    fuse_cmd->add_option("--ctx-run", fa.ctx_run)->required();
    fuse_cmd->add_option("--alpha", fa.alpha, "Fixed weight (tuned on a validation split if absent)");
    fuse_cmd->add_option("--qrels", fa.qrels);
    fuse_cmd->add_option("--grid-step", fa.grid_step);
    fuse_cmd->add_option("--train-fraction", fa.train_fraction);
    fuse_cmd->add_option("--metric", fa.metric)->check(CLI::IsMember({"map", "ndcg"}));
    fuse_cmd->add_option("--z-scope", fa.z_scope)->check(CLI::IsMember({"query", "global"}));
    fuse_cmd->add_option("--report", fa.report);
    fuse_cmd->add_option("--output", fa.output)->required();
    fuse_cmd->add_option("--tag", fa.tag);
    add_common(fuse_cmd);

    SweepArgs sa;
    auto* sweep_cmd = app.add_subcommand("sweep", "Fixed-alpha grid and per-query oracle");
    sweep_cmd->add_option("--bm25-run", sa.bm25_run)->required();
    sweep_cmd->add_option("--ctx-run", sa.ctx_run)->required();
    sweep_cmd->add_option("--qrels", sa.qrels)->required();
    sweep_cmd->add_option("--grid-step", sa.grid_step);
    sweep_cmd->add_option("--metric", sa.metric)->check(CLI::IsMember({"map", "ndcg"}));
    sweep_cmd->add_option("--z-scope", sa.z_scope)->check(CLI::IsMember({"query", "global"}));
    sweep_cmd->add_option("--quantile", sa.quantile, "Quantile definition for the alpha IQR")
        ->check(CLI::IsMember({"type7", "type6"}));
    sweep_cmd->add_option("--output", sa.output)->required();
    add_common(sweep_cmd);

    EvaluateArgs ea;
    auto* eval_cmd = app.add_subcommand("evaluate", "Per-query and mean MAP or nDCG");
    eval_cmd->add_option("--run", ea.run)->required();
    eval_cmd->add_option("--qrels", ea.qrels)->required();
    eval_cmd->add_option("--metric", ea.metric)->check(CLI::IsMember({"map", "ndcg"}));
    eval_cmd->add_option("--output", ea.output)->required();
    add_common(eval_cmd);

    ExpandArgs xa;
    auto* expand_cmd = app.add_subcommand("expand", "New-term document expansion lists");
    expand_cmd->add_option("--corpus", xa.corpus)->required();
    expand_cmd->add_option("--vocab", xa.vocab)->required();
    expand_cmd->add_option("--tilde-store", xa.tilde_store)->required();
    expand_cmd->add_option("--expansion-m", xa.m)->check(CLI::NonNegativeNumber);
    expand_cmd->add_flag("--include-continuation-pieces", xa.include_continuation);
    expand_cmd->add_option("--floor-logprob", xa.floor_logprob);
    expand_cmd->add_option("--output", xa.output)->required();
    add_common(expand_cmd);

    TripletArgs ta;
    auto* trip_cmd = app.add_subcommand("triplets", "Training triplets from judgments");
    trip_cmd->add_option("--qrels", ta.qrels)->required();
    trip_cmd->add_option("--corpus", ta.corpus);
    trip_cmd->add_option("--negatives-per-positive", ta.negatives_per_positive)
        ->check(CLI::PositiveNumber);
    trip_cmd->add_option("--train-fraction", ta.train_fraction,
                         "Only emit triplets for the training part of a seeded split");
    trip_cmd->add_option("--output", ta.output)->required();
    add_common(trip_cmd);

    SignificanceArgs sg;
    auto* sig_cmd = app.add_subcommand("significance", "Paired t-test with Bonferroni correction");
    sig_cmd->add_option("--run-a", sg.run_a)->required();
    sig_cmd->add_option("--run-b", sg.run_b)->required();
    sig_cmd->add_option("--name-a", sg.name_a);
    sig_cmd->add_option("--name-b", sg.name_b);
    sig_cmd->add_option("--qrels", sg.qrels)->required();
    sig_cmd->add_option("--metric", sg.metric)->check(CLI::IsMember({"map", "ndcg"}));
    sig_cmd->add_option("--num-comparisons", sg.num_comparisons)->check(CLI::PositiveNumber);
    sig_cmd->add_option("--output", sg.output)->required();
    add_common(sig_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "qbe-lexica: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    const auto scorer_flags_ok = [&]() -> std::string {
        if (!rerank_cmd->parsed()) return {};
        const auto& s = rr.scorer;
        auto given = [](const CLI::Option* o) { return o->count() > 0; };
        if ((given(k1) || given(b) || given(mult)) && s != "bm25")
            return "--k1/--b/--bm25-query-multiplicity only apply to --scorer bm25";
        if (given(lambda) && s != "lmjm") return "--lambda only applies to --scorer lmjm";
        if ((given(tilde_store) || given(floor)) && s != "tilde")
            return "--tilde-store/--floor-logprob only apply to --scorer tilde";
        if ((given(impact_store) || given(expansion)) && s != "tildev2")
            return "--impact-store/--expansion only apply to --scorer tildev2";
        if (s == "tilde" && !given(tilde_store)) return "--scorer tilde needs --tilde-store";
        if (s == "tildev2" && !given(impact_store)) return "--scorer tildev2 needs --impact-store";
        return {};
    }();
    if (!scorer_flags_ok.empty()) {
        err << "qbe-lexica: " << scorer_flags_ok << '\n' << rerank_cmd->help();
        return kUsage;
    }

    const Logger log(err);
    const io::StdoutRedirect redirect(out);
    try {
        if (index->parsed()) cmd_index(index_args, common, log);
        else if (rerank_cmd->parsed()) cmd_rerank(rr, common, log);
        else if (fuse_cmd->parsed()) cmd_fuse(fa, common, log);
        else if (sweep_cmd->parsed()) cmd_sweep(sa, common, log);
        else if (eval_cmd->parsed()) cmd_evaluate(ea, common, log);
        else if (expand_cmd->parsed()) cmd_expand(xa, common, log);
        else if (trip_cmd->parsed()) cmd_triplets(ta, common, log);
        else if (sig_cmd->parsed()) cmd_significance(sg, common, log);
        return kOk;
    } catch (const Error& e) {
        err << "qbe-lexica: error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "qbe-lexica: internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

}  // namespace lexica::cli
