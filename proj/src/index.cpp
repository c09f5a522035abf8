#include "lexica/index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "lexica/error.hpp"
#include "lexica/io_util.hpp"
#include "lexica/parallel.hpp"

namespace lexica {

std::uint32_t IndexStats::df(std::string_view term) const {
    auto it = terms.find(term);
    return it == terms.end() ? 0 : it->second.df;
}

std::uint64_t IndexStats::cf(std::string_view term) const {
    auto it = terms.find(term);
    return it == terms.end() ? 0 : it->second.cf;
}

InvertedIndex::InvertedIndex(IndexStats stats,
                             std::map<std::string, std::vector<Posting>, std::less<>> postings,
                             AnalyzerSpec analyzer)
    : stats_(std::move(stats)), postings_(std::move(postings)), analyzer_(std::move(analyzer)) {
    doc_ids_.reserve(stats_.doc_len.size());
    doc_lens_.reserve(stats_.doc_len.size());
    for (const auto& [id, len] : stats_.doc_len) {
        doc_ids_.push_back(id);
        doc_lens_.push_back(len);
    }
}

const std::vector<Posting>* InvertedIndex::find(std::string_view term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> InvertedIndex::ordinal(std::string_view doc_id) const {
    auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), doc_id);
    if (it == doc_ids_.end() || *it != doc_id) {
        return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - doc_ids_.begin());
}

std::uint32_t InvertedIndex::tf(const std::vector<Posting>& postings, std::uint32_t ordinal) {
    auto it = std::lower_bound(postings.begin(), postings.end(), ordinal,
                               [](const Posting& p, std::uint32_t d) { return p.doc < d; });
    return (it != postings.end() && it->doc == ordinal) ? it->tf : 0;
}

InvertedIndex build_index(const Corpus& corpus, const Analyzer& analyzer, TextOrder order,
                          unsigned threads) {
    if (corpus.empty()) {
        throw ValidationError("cannot index an empty corpus");
    }
    std::vector<const Document*> docs;
    docs.reserve(corpus.size());
    for (const auto& d : corpus) {
        docs.push_back(&d);
    }
    std::sort(docs.begin(), docs.end(),
              [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

    // per-document term histograms, filled in parallel and merged in order
    std::vector<std::map<std::string, std::uint32_t>> histograms(docs.size());
    std::vector<std::uint32_t> lengths(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) {
        const auto tokens = analyzer.analyze(compose_text(*docs[i], order));
        lengths[i] = static_cast<std::uint32_t>(tokens.size());
        auto& h = histograms[i];
        for (const auto& t : tokens) {
            ++h[t.surface];
        }
    });

    IndexStats stats;
    std::map<std::string, std::vector<Posting>, std::less<>> postings;
    stats.num_docs = docs.size();
    for (std::size_t i = 0; i < docs.size(); ++i) {
        stats.doc_len.emplace_hint(stats.doc_len.end(), docs[i]->doc_id, lengths[i]);
        stats.total_tokens += lengths[i];
        for (const auto& [term, tf] : histograms[i]) {
            postings[term].push_back({static_cast<std::uint32_t>(i), tf});
            auto& ts = stats.terms[term];
            ts.df += 1;
            ts.cf += tf;
        }
        histograms[i].clear();
    }
    stats.avg_doc_len = static_cast<double>(stats.total_tokens) / static_cast<double>(stats.num_docs);
    return InvertedIndex(std::move(stats), std::move(postings), analyzer.spec());
}

InvertedIndex build_index(const Corpus& corpus, const AnalyzerSpec& spec, TextOrder order) {
    return build_index(corpus, Analyzer(spec), order, 1);
}

namespace {

constexpr char kMagic[8] = {'L', 'X', 'I', 'D', 'X', '\0', '\0', '\0'};
constexpr char kTrailer[8] = {'L', 'X', 'E', 'N', 'D', '\0', '\0', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
  public:
    void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void str(std::string_view s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
    std::string take() { return std::move(out_); }

  private:
    std::string out_;
};

class Reader {
  public:
    explicit Reader(std::string_view in) : in_(in) {}

    void bytes(void* p, std::size_t n) {
        need(n);
        std::memcpy(p, in_.data() + pos_, n);
        pos_ += n;
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(in_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
        return v;
    }
    std::string str() {
        const auto n = u64();
        need(n);
        std::string s(in_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    bool at_end() const { return pos_ == in_.size(); }

  private:
    void need(std::uint64_t n) const {
        if (n > in_.size() - pos_) {
            throw FormatError("index image truncated at byte " + std::to_string(pos_));
        }
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_index(const InvertedIndex& index) {
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kFormatVersion);
    const auto& spec = index.analyzer();
    w.u8(static_cast<std::uint8_t>(spec.kind));
    w.u8(spec.lowercase ? 1 : 0);
    w.u8(spec.strip_accents ? 1 : 0);
    w.u32(static_cast<std::uint32_t>(spec.max_word_chars));
    w.u8(spec.vocab_path ? 1 : 0);
    w.str(spec.vocab_path ? spec.vocab_path->string() : std::string());

    const auto& stats = index.stats();
    w.u64(stats.num_docs);
    w.u64(stats.total_tokens);
    w.u64(stats.doc_len.size());
    for (const auto& [id, len] : stats.doc_len) {
        w.str(id);
        w.u32(len);
    }
    w.u64(index.postings().size());
    for (const auto& [term, list] : index.postings()) {
        const auto& ts = stats.terms.at(term);
        w.str(term);
        w.u32(ts.df);
        w.u64(ts.cf);
        w.u64(list.size());
        for (const auto& p : list) {
            w.u32(p.doc);
            w.u32(p.tf);
        }
    }
    w.bytes(kTrailer, sizeof kTrailer);
    return w.take();
}

InvertedIndex deserialize_index(std::string_view bytes) {
    Reader r(bytes);
    char magic[8];
    r.bytes(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof magic) != 0) {
        throw FormatError("not an index image (bad magic)");
    }
    const auto version = r.u32();
    if (version != kFormatVersion) {
        throw FormatError("index format version " + std::to_string(version) +
                          " unsupported (expected " + std::to_string(kFormatVersion) + ")");
    }
    AnalyzerSpec spec;
    const auto kind = r.u8();
    if (kind > static_cast<std::uint8_t>(AnalyzerKind::Subword)) {
        throw FormatError("unknown analyzer kind " + std::to_string(kind));
    }
    spec.kind = static_cast<AnalyzerKind>(kind);
    spec.lowercase = r.u8() != 0;
    spec.strip_accents = r.u8() != 0;
    spec.max_word_chars = static_cast<int>(r.u32());
    const bool has_vocab = r.u8() != 0;
    auto vocab = r.str();
    if (has_vocab) {
        spec.vocab_path = vocab;
    }

    IndexStats stats;
    stats.num_docs = r.u64();
    stats.total_tokens = r.u64();
    const auto ndocs = r.u64();
    if (ndocs != stats.num_docs) {
        throw FormatError("document table size disagrees with header");
    }
    for (std::uint64_t i = 0; i < ndocs; ++i) {
        auto id = r.str();
        const auto len = r.u32();
        stats.doc_len.emplace_hint(stats.doc_len.end(), std::move(id), len);
    }
    stats.avg_doc_len = stats.num_docs == 0 ? 0.0
                                            : static_cast<double>(stats.total_tokens) /
                                                  static_cast<double>(stats.num_docs);
    std::map<std::string, std::vector<Posting>, std::less<>> postings;
    const auto nterms = r.u64();
    for (std::uint64_t t = 0; t < nterms; ++t) {
        auto term = r.str();
        TermStats ts;
        ts.df = r.u32();
        ts.cf = r.u64();
        const auto n = r.u64();
        if (n != ts.df) {
            throw FormatError("postings length of \"" + term + "\" disagrees with its df");
        }
        std::vector<Posting> list;
        list.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            Posting p;
            p.doc = r.u32();
            p.tf = r.u32();
            if (p.doc >= ndocs) {
                throw FormatError("posting references document ordinal out of range");
            }
            list.push_back(p);
        }
        stats.terms.emplace_hint(stats.terms.end(), term, ts);
        postings.emplace_hint(postings.end(), std::move(term), std::move(list));
    }
    char trailer[8];
    r.bytes(trailer, sizeof trailer);
    if (std::memcmp(trailer, kTrailer, sizeof trailer) != 0 || !r.at_end()) {
        throw FormatError("index image has a corrupt trailer");
    }
    return InvertedIndex(std::move(stats), std::move(postings), std::move(spec));
}

void persist_index(const InvertedIndex& index, const std::filesystem::path& path) {
    const auto image = serialize_index(index);
    io::write_atomic(path, [&](std::ostream& out) { out.write(image.data(), static_cast<std::streamsize>(image.size())); });
}

InvertedIndex load_index(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    try {
        return deserialize_index(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace lexica
