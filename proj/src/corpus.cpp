#include "lexica/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lexica/error.hpp"
#include "lexica/io_util.hpp"
#include "lexica/random.hpp"

namespace lexica {

using nlohmann::json;

Corpus::Corpus(std::vector<Document> docs) {
    docs_.reserve(docs.size());
    for (auto& d : docs) {
        add(std::move(d));
    }
}

void Corpus::add(Document doc) {
    if (doc.doc_id.empty()) {
        throw ValidationError("document with empty doc_id");
    }
    if (doc.title.empty() && doc.abstract.empty()) {
        throw ValidationError("document " + doc.doc_id + " has neither title nor abstract");
    }
    if (by_id_.contains(doc.doc_id)) {
        throw ConflictError("duplicate doc_id \"" + doc.doc_id + "\"");
    }
    by_id_.emplace(doc.doc_id, docs_.size());
    docs_.push_back(std::move(doc));
}

const Document* Corpus::find(std::string_view doc_id) const {
    auto it = by_id_.find(std::string(doc_id));
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const Document& Corpus::at(std::string_view doc_id) const {
    if (const auto* d = find(doc_id)) {
        return *d;
    }
    throw NotFoundError("unknown doc_id \"" + std::string(doc_id) + "\"");
}

void Qrels::add(RelevanceJudgment judgment) {
    if (judgment.grade != 0 && judgment.grade != 1) {
        throw ValidationError("grade " + std::to_string(judgment.grade) + " for (" +
                              judgment.query_id + ", " + judgment.doc_id + ") is not binary");
    }
    auto& entry = by_query_[judgment.query_id];
    if (!entry.grades.emplace(judgment.doc_id, judgment.grade).second) {
        throw ConflictError("duplicate judgment (" + judgment.query_id + ", " + judgment.doc_id +
                            ")");
    }
    entry.list.push_back(std::move(judgment));
    ++count_;
}

int Qrels::grade(std::string_view query_id, std::string_view doc_id) const {
    auto q = by_query_.find(query_id);
    if (q == by_query_.end()) {
        return 0;
    }
    auto d = q->second.grades.find(doc_id);
    return d == q->second.grades.end() ? 0 : d->second;
}

bool Qrels::has_query(std::string_view query_id) const {
    return by_query_.find(query_id) != by_query_.end();
}

const std::vector<RelevanceJudgment>& Qrels::judgments(std::string_view query_id) const {
    static const std::vector<RelevanceJudgment> kEmpty;
    auto q = by_query_.find(query_id);
    return q == by_query_.end() ? kEmpty : q->second.list;
}

std::size_t Qrels::num_relevant(std::string_view query_id) const {
    const auto& list = judgments(query_id);
    return static_cast<std::size_t>(
        std::count_if(list.begin(), list.end(), [](const auto& j) { return j.grade > 0; }));
}

std::vector<std::string> Qrels::query_ids() const {
    std::vector<std::string> ids;
    ids.reserve(by_query_.size());
    for (const auto& [qid, _] : by_query_) {
        ids.push_back(qid);
    }
    return ids;
}

namespace {

std::string require_string(const json& obj, const char* field, const std::string& src,
                           std::size_t lineno, bool allow_missing = false) {
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) {
        if (allow_missing) {
            return {};
        }
        throw ParseError(src, lineno, std::string("missing field \"") + field + "\"");
    }
    if (!it->is_string()) {
        throw ParseError(src, lineno, std::string("field \"") + field + "\" is not a string");
    }
    return it->get<std::string>();
}

json parse_record(const std::string& line, const std::string& src, std::size_t lineno) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(src, lineno, e.what());
    }
    if (!obj.is_object()) {
        throw ParseError(src, lineno, "record is not an object");
    }
    return obj;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path) {
    const auto lines = io::read_lines(path);
    const auto src = path.string();
    Corpus corpus;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (io::is_blank(lines[i])) {
            continue;
        }
        auto obj = parse_record(lines[i], src, i + 1);
        Document doc{require_string(obj, "doc_id", src, i + 1),
                     require_string(obj, "title", src, i + 1, true),
                     require_string(obj, "abstract", src, i + 1, true)};
        try {
            corpus.add(std::move(doc));
        } catch (const ConflictError& e) {
            throw ConflictError(src + ":" + std::to_string(i + 1) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ParseError(src, i + 1, e.what());
        }
    }
    return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    io::write_atomic(path, [&](std::ostream& out) {
        for (const auto& d : corpus) {
            json obj = {{"doc_id", d.doc_id}, {"title", d.title}, {"abstract", d.abstract}};
            out << obj.dump() << '\n';
        }
    });
}

PoolSet load_pools(const std::filesystem::path& path, const Corpus& corpus) {
    const auto lines = io::read_lines(path);
    const auto src = path.string();
    PoolSet set;
    std::set<std::string, std::less<>> seen_queries;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (io::is_blank(lines[i])) {
            continue;
        }
        const auto lineno = i + 1;
        auto obj = parse_record(lines[i], src, lineno);
        CandidatePool pool;
        pool.query_id = require_string(obj, "query_id", src, lineno);
        auto query_doc = require_string(obj, "query_doc_id", src, lineno, true);
        if (query_doc.empty()) {
            query_doc = pool.query_id;
        }
        auto cands = obj.find("candidates");
        if (cands == obj.end() || !cands->is_array()) {
            throw ParseError(src, lineno, "field \"candidates\" must be an array");
        }
        std::set<std::string, std::less<>> seen;
        for (const auto& c : *cands) {
            if (!c.is_string()) {
                throw ParseError(src, lineno, "candidate ids must be strings");
            }
            auto id = c.get<std::string>();
            if (!corpus.contains(id)) {
                throw NotFoundError(src + ":" + std::to_string(lineno) + ": candidate \"" + id +
                                    "\" of query \"" + pool.query_id + "\" not in corpus");
            }
            if (!seen.insert(id).second) {
                throw ConflictError(src + ":" + std::to_string(lineno) + ": candidate \"" + id +
                                    "\" repeated in pool of \"" + pool.query_id + "\"");
            }
            pool.candidates.push_back(std::move(id));
        }
        if (pool.candidates.empty()) {
            throw ValidationError(src + ":" + std::to_string(lineno) + ": empty pool for \"" +
                                  pool.query_id + "\"");
        }
        if (!corpus.contains(query_doc)) {
            throw NotFoundError(src + ":" + std::to_string(lineno) + ": query document \"" +
                                query_doc + "\" not in corpus");
        }
        if (!seen_queries.insert(pool.query_id).second) {
            throw ConflictError(src + ":" + std::to_string(lineno) + ": duplicate query \"" +
                                pool.query_id + "\"");
        }
        set.queries.push_back({pool.query_id, std::move(query_doc)});
        set.pools.push_back(std::move(pool));
    }
    return set;
}

void write_pools(const PoolSet& pools, const std::filesystem::path& path) {
    io::write_atomic(path, [&](std::ostream& out) {
        for (std::size_t i = 0; i < pools.pools.size(); ++i) {
            json obj = {{"query_id", pools.pools[i].query_id},
                        {"candidates", pools.pools[i].candidates}};
            if (pools.queries[i].doc_id != pools.pools[i].query_id) {
                obj["query_doc_id"] = pools.queries[i].doc_id;
            }
            out << obj.dump() << '\n';
        }
    });
}

Qrels load_qrels(const std::filesystem::path& path, const Corpus* corpus) {
    const auto lines = io::read_lines(path);
    const auto src = path.string();
    Qrels qrels;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (io::is_blank(lines[i])) {
            continue;
        }
        std::istringstream ss(lines[i]);
        std::vector<std::string> cols;
        for (std::string c; ss >> c;) {
            cols.push_back(std::move(c));
        }
        if (cols.size() != 4) {
            throw ParseError(src, i + 1,
                             "expected 4 columns, found " + std::to_string(cols.size()));
        }
        int grade = 0;
        try {
            std::size_t used = 0;
            grade = std::stoi(cols[3], &used);
            if (used != cols[3].size()) {
                throw std::invalid_argument(cols[3]);
            }
        } catch (const std::logic_error&) {
            throw ParseError(src, i + 1, "grade \"" + cols[3] + "\" is not an integer");
        }
        if (corpus != nullptr && !corpus->contains(cols[2])) {
            throw NotFoundError(src + ":" + std::to_string(i + 1) + ": judged doc \"" + cols[2] +
                                "\" not in corpus");
        }
        try {
            qrels.add({cols[0], cols[2], grade});
        } catch (const ConflictError& e) {
            throw ConflictError(src + ":" + std::to_string(i + 1) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(src + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return qrels;
}

std::string compose_text(const Document& doc, TextOrder order) {
    const auto& first = order == TextOrder::TitleFirst ? doc.title : doc.abstract;
    const auto& second = order == TextOrder::TitleFirst ? doc.abstract : doc.title;
    if (first.empty()) {
        return second;
    }
    if (second.empty()) {
        return first;
    }
    return first + " " + second;
}

DatasetSplit split_validation(const std::vector<std::string>& query_ids, double train_fraction,
                              std::uint64_t seed) {
    if (query_ids.empty()) {
        throw ValidationError("cannot split an empty query set");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ValidationError("train fraction must lie in (0, 1)");
    }
    auto order = query_ids;
    Rng rng(seed);
    rng.shuffle(order);
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(order.size())));
    DatasetSplit split;
    split.seed = seed;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? split.train_query_ids : split.validation_query_ids).insert(order[i]);
    }
    return split;
}

std::vector<TrainingTriplet> make_triplets(std::string_view query_id,
                                           const std::vector<RelevanceJudgment>& judgments,
                                           int negatives_per_positive, std::uint64_t seed) {
    if (negatives_per_positive < 1) {
        throw ValidationError("negatives_per_positive must be at least 1");
    }
    std::vector<const std::string*> positives;
    std::vector<const std::string*> negatives;
    for (const auto& j : judgments) {
        if (j.query_id != query_id) {
            continue;
        }
        (j.grade > 0 ? positives : negatives).push_back(&j.doc_id);
    }
    std::vector<TrainingTriplet> out;
    if (positives.empty()) {
        return out;
    }
    if (negatives.empty()) {
        throw ValidationError("query \"" + std::string(query_id) +
                              "\" has positives but no negatives to pair with");
    }
    const auto k = static_cast<std::size_t>(negatives_per_positive);
    Rng rng(seed ^ fnv1a(query_id));
    out.reserve(positives.size() * k);
    for (const auto* pos : positives) {
        if (negatives.size() >= k) {
            // partial Fisher-Yates over a fresh copy: k distinct negatives
            auto pool = negatives;
            for (std::size_t i = 0; i < k; ++i) {
                std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
                out.push_back({std::string(query_id), *pos, *pool[i]});
            }
        } else {
            for (std::size_t i = 0; i < k; ++i) {
                out.push_back(
                    {std::string(query_id), *pos, *negatives[rng.below(negatives.size())]});
            }
        }
    }
    return out;
}

void write_triplets(const std::vector<TrainingTriplet>& triplets,
                    const std::filesystem::path& path) {
    io::write_atomic(path, [&](std::ostream& out) {
        for (const auto& t : triplets) {
            out << t.query_id << '\t' << t.positive_doc_id << '\t' << t.negative_doc_id << '\n';
        }
    });
}

}  // namespace lexica
