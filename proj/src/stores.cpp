#include "lexica/stores.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "lexica/error.hpp"
#include "lexica/io_util.hpp"

namespace lexica {

using nlohmann::json;

namespace {

void check_token(TokenId token, std::size_t vocab_size, std::string_view doc_id) {
    if (token >= vocab_size) {
        throw RangeError("token id " + std::to_string(token) + " in document \"" +
                         std::string(doc_id) + "\" exceeds vocabulary size " +
                         std::to_string(vocab_size));
    }
}

const SparseVector::const_iterator find_token(const SparseVector& v, TokenId token) {
    auto it = std::lower_bound(v.begin(), v.end(), token,
                               [](const TokenWeight& e, TokenId t) { return e.token < t; });
    return (it != v.end() && it->token == token) ? it : v.end();
}

void sort_by_token(SparseVector& v) {
    std::sort(v.begin(), v.end(),
              [](const TokenWeight& a, const TokenWeight& b) { return a.token < b.token; });
}

}  // namespace

TildeDistributionStore::TildeDistributionStore(std::size_t vocab_size, double floor_logprob)
    : vocab_size_(vocab_size), floor_(floor_logprob) {
    if (!(floor_logprob <= 0.0)) {
        throw ValidationError("floor log-probability must be <= 0");
    }
}

void TildeDistributionStore::insert(std::string doc_id, std::vector<TokenWeight> entries) {
    for (const auto& e : entries) {
        check_token(e.token, vocab_size_, doc_id);
        if (!std::isfinite(e.value) || e.value > 0.0) {
            throw ValidationError("log-probability " + std::to_string(e.value) + " for token " +
                                  std::to_string(e.token) + " in document \"" + doc_id +
                                  "\" is not <= 0");
        }
    }
    sort_by_token(entries);
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].token == entries[i - 1].token) {
            throw ValidationError("token " + std::to_string(entries[i].token) +
                                  " repeated in distribution of \"" + doc_id + "\"");
        }
    }
    if (docs_.contains(doc_id)) {
        throw ConflictError("duplicate distribution for document \"" + doc_id + "\"");
    }
    docs_.emplace(std::move(doc_id), std::move(entries));
}

bool TildeDistributionStore::contains(std::string_view doc_id) const {
    return docs_.find(doc_id) != docs_.end();
}

const SparseVector& TildeDistributionStore::entries(std::string_view doc_id) const {
    auto it = docs_.find(doc_id);
    if (it == docs_.end()) {
        throw NotFoundError("no distribution for document \"" + std::string(doc_id) + "\"");
    }
    return it->second;
}

double TildeDistributionStore::lookup(const SparseVector& entries, TokenId token, double floor) {
    auto it = find_token(entries, token);
    return it == entries.end() ? floor : it->value;
}

double TildeDistributionStore::lookup(std::string_view doc_id, TokenId token) const {
    return lookup(entries(doc_id), token, floor_);
}

std::vector<TokenWeight> TildeDistributionStore::ranked(std::string_view doc_id) const {
    auto out = entries(doc_id);
    std::stable_sort(out.begin(), out.end(), [](const TokenWeight& a, const TokenWeight& b) {
        return a.value > b.value;
    });
    return out;
}

ImpactStore::ImpactStore(std::size_t vocab_size) : vocab_size_(vocab_size) {}

void ImpactStore::insert(std::string doc_id, std::vector<TokenWeight> weights) {
    for (const auto& w : weights) {
        check_token(w.token, vocab_size_, doc_id);
        if (!std::isfinite(w.value) || w.value < 0.0) {
            throw ValidationError("impact weight " + std::to_string(w.value) + " for token " +
                                  std::to_string(w.token) + " in document \"" + doc_id +
                                  "\" is negative");
        }
    }
    sort_by_token(weights);
    SparseVector merged;
    merged.reserve(weights.size());
    for (const auto& w : weights) {
        if (!merged.empty() && merged.back().token == w.token) {
            merged.back().value = std::max(merged.back().value, w.value);
        } else {
            merged.push_back(w);
        }
    }
    if (docs_.contains(doc_id)) {
        throw ConflictError("duplicate impact entry for document \"" + doc_id + "\"");
    }
    docs_.emplace(std::move(doc_id), std::move(merged));
}

bool ImpactStore::contains(std::string_view doc_id) const {
    return docs_.find(doc_id) != docs_.end();
}

const SparseVector& ImpactStore::weights(std::string_view doc_id) const {
    auto it = docs_.find(doc_id);
    if (it == docs_.end()) {
        throw NotFoundError("no impact weights for document \"" + std::string(doc_id) + "\"");
    }
    return it->second;
}

double ImpactStore::lookup(const SparseVector& weights, TokenId token) {
    auto it = find_token(weights, token);
    return it == weights.end() ? 0.0 : it->value;
}

double ImpactStore::lookup(std::string_view doc_id, TokenId token) const {
    return lookup(weights(doc_id), token);
}

std::size_t ImpactStore::merge_expansion(std::string_view doc_id,
                                         const std::vector<TokenId>& additions,
                                         const ImpactStore& source) {
    auto it = docs_.find(doc_id);
    if (it == docs_.end()) {
        throw NotFoundError("no impact weights for document \"" + std::string(doc_id) + "\"");
    }
    if (!source.contains(doc_id)) {
        return 0;
    }
    const auto& supplied = source.weights(doc_id);
    auto& target = it->second;
    std::size_t added = 0;
    for (auto token : additions) {
        auto s = find_token(supplied, token);
        if (s == supplied.end()) {
            continue;
        }
        check_token(token, vocab_size_, doc_id);
        auto pos = std::lower_bound(target.begin(), target.end(), token,
                                    [](const TokenWeight& e, TokenId t) { return e.token < t; });
        if (pos != target.end() && pos->token == token) {
            pos->value = std::max(pos->value, s->value);
        } else {
            target.insert(pos, *s);
            ++added;
        }
    }
    return added;
}

namespace {

std::vector<TokenWeight> parse_pairs(const json& arr, const std::string& src, std::size_t lineno,
                                     const char* field) {
    if (!arr.is_array()) {
        throw ParseError(src, lineno, std::string("field \"") + field + "\" must be an array");
    }
    std::vector<TokenWeight> out;
    out.reserve(arr.size());
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number()) {
            throw ParseError(src, lineno, "entries must be [token_id, value] pairs");
        }
        const auto id = pair[0].get<std::int64_t>();
        if (id < 0 || id > static_cast<std::int64_t>(UINT32_MAX)) {
            throw RangeError(src + ":" + std::to_string(lineno) + ": token id " +
                             std::to_string(id) + " out of range");
        }
        out.push_back({static_cast<TokenId>(id), pair[1].get<double>()});
    }
    return out;
}

template <typename OnRecord>
void for_each_record(const std::filesystem::path& path, OnRecord&& on_record) {
    const auto lines = io::read_lines(path);
    const auto src = path.string();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (io::is_blank(lines[i])) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(lines[i]);
        } catch (const json::parse_error& e) {
            throw ParseError(src, i + 1, e.what());
        }
        if (!obj.is_object()) {
            throw ParseError(src, i + 1, "record is not an object");
        }
        on_record(obj, src, i + 1);
    }
}

template <typename Store>
void insert_with_context(Store& store, std::string doc_id, std::vector<TokenWeight> v,
                         const std::string& src, std::size_t lineno) {
    try {
        store.insert(std::move(doc_id), std::move(v));
    } catch (const ValidationError& e) {
        throw ValidationError(src + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const RangeError& e) {
        throw RangeError(src + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const ConflictError& e) {
        throw ConflictError(src + ":" + std::to_string(lineno) + ": " + e.what());
    }
}

std::string doc_id_of(const json& obj, const std::string& src, std::size_t lineno) {
    auto it = obj.find("doc_id");
    if (it == obj.end() || !it->is_string()) {
        throw ParseError(src, lineno, "missing string field \"doc_id\"");
    }
    return it->get<std::string>();
}

std::string fixed_json_number(double v) {
    // round-trippable and locale independent
    return json(v).dump();
}

}  // namespace

TildeDistributionStore load_tilde_store(const std::filesystem::path& path, std::size_t vocab_size,
                                        std::optional<double> floor_logprob) {
    // the floor header may appear anywhere, so collect records first
    double floor = kDefaultFloorLogprob;
    std::vector<std::tuple<std::string, std::vector<TokenWeight>, std::size_t>> records;
    std::string src;
    for_each_record(path, [&](const json& obj, const std::string& s, std::size_t lineno) {
        src = s;
        if (!obj.contains("doc_id")) {
            auto f = obj.find("floor_logprob");
            if (f == obj.end() || !f->is_number()) {
                throw ParseError(s, lineno, "record lacks doc_id");
            }
            floor = f->get<double>();
            if (!(floor <= 0.0)) {
                throw ValidationError(s + ":" + std::to_string(lineno) +
                                      ": floor_logprob must be <= 0");
            }
            return;
        }
        auto entries = obj.find("entries");
        if (entries == obj.end()) {
            throw ParseError(s, lineno, "missing field \"entries\"");
        }
        records.emplace_back(doc_id_of(obj, s, lineno), parse_pairs(*entries, s, lineno, "entries"),
                             lineno);
    });
    TildeDistributionStore store(vocab_size, floor_logprob.value_or(floor));
    for (auto& [id, v, lineno] : records) {
        insert_with_context(store, std::move(id), std::move(v), src, lineno);
    }
    return store;
}

void write_tilde_store(const TildeDistributionStore& store, const std::filesystem::path& path,
                       bool write_floor) {
    io::write_atomic(path, [&](std::ostream& out) {
        if (write_floor) {
            out << "{\"floor_logprob\":" << fixed_json_number(store.floor_logprob()) << "}\n";
        }
        for (const auto& [id, entries] : store.documents()) {
            out << "{\"doc_id\":" << json(id).dump() << ",\"entries\":[";
            for (std::size_t i = 0; i < entries.size(); ++i) {
                out << (i ? "," : "") << '[' << entries[i].token << ','
                    << fixed_json_number(entries[i].value) << ']';
            }
            out << "]}\n";
        }
    });
}

ImpactStore load_impact_store(const std::filesystem::path& path, std::size_t vocab_size) {
    ImpactStore store(vocab_size);
    for_each_record(path, [&](const json& obj, const std::string& src, std::size_t lineno) {
        auto weights = obj.find("weights");
        if (weights == obj.end()) {
            throw ParseError(src, lineno, "missing field \"weights\"");
        }
        insert_with_context(store, doc_id_of(obj, src, lineno),
                            parse_pairs(*weights, src, lineno, "weights"), src, lineno);
    });
    return store;
}

void write_impact_store(const ImpactStore& store, const std::filesystem::path& path) {
    io::write_atomic(path, [&](std::ostream& out) {
        for (const auto& [id, weights] : store.documents()) {
            out << "{\"doc_id\":" << json(id).dump() << ",\"weights\":[";
            for (std::size_t i = 0; i < weights.size(); ++i) {
                out << (i ? "," : "") << '[' << weights[i].token << ','
                    << fixed_json_number(weights[i].value) << ']';
            }
            out << "]}\n";
        }
    });
}

}  // namespace lexica
