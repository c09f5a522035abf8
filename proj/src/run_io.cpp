#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "lexica/error.hpp"
#include "lexica/evalkit.hpp"
#include "lexica/io_util.hpp"

namespace lexica {

namespace {

struct RunLine {
    std::string doc_id;
    long rank = 0;
    double score = 0.0;
};

}  // namespace

std::map<std::string, ScoredList> read_run(const std::filesystem::path& path,
                                           std::vector<std::string>* warnings) {
    const auto lines = io::read_lines(path);
    const auto src = path.string();
    std::map<std::string, std::vector<RunLine>> raw;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (io::is_blank(lines[i])) {
            continue;
        }
        std::istringstream ss(lines[i]);
        std::vector<std::string> cols;
        for (std::string c; ss >> c;) {
            cols.push_back(std::move(c));
        }
        if (cols.size() != 6) {
            throw ParseError(src, i + 1,
                             "expected 6 columns, found " + std::to_string(cols.size()));
        }
        RunLine line;
        line.doc_id = cols[2];
        const auto& rank = cols[3];
        auto [rp, rec] = std::from_chars(rank.data(), rank.data() + rank.size(), line.rank);
        if (rec != std::errc() || rp != rank.data() + rank.size()) {
            throw ParseError(src, i + 1, "rank \"" + rank + "\" is not an integer");
        }
        char* end = nullptr;
        line.score = std::strtod(cols[4].c_str(), &end);
        if (end != cols[4].c_str() + cols[4].size() || cols[4].empty()) {
            throw ParseError(src, i + 1, "score \"" + cols[4] + "\" is not a number");
        }
        raw[cols[0]].push_back(std::move(line));
    }

    std::map<std::string, ScoredList> out;
    for (auto& [qid, rows] : raw) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const RunLine& a, const RunLine& b) { return a.rank < b.rank; });
        bool contiguous = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].rank != static_cast<long>(i + 1)) {
                contiguous = false;
                break;
            }
        }
        std::vector<ScoredDoc> entries;
        entries.reserve(rows.size());
        for (auto& r : rows) {
            entries.push_back({std::move(r.doc_id), r.score});
        }
        if (contiguous) {
            std::vector<std::string_view> ids;
            for (const auto& e : entries) ids.push_back(e.doc_id);
            std::sort(ids.begin(), ids.end());
            if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
                throw ConflictError(src + ": query \"" + qid + "\" lists a document twice");
            }
            out.emplace(qid, ScoredList{qid, std::move(entries)});
        } else {
            if (warnings != nullptr) {
                warnings->push_back(src + ": ranks of query \"" + qid +
                                    "\" do not run 1..n; re-ranked by score");
            }
            out.emplace(qid, make_scored_list(qid, std::move(entries)));
        }
    }
    return out;
}

std::string format_run(const std::vector<ScoredList>& lists, std::string_view tag) {
    std::string out;
    for (const auto& list : lists) {
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            const auto& e = list.entries[i];
            out += list.query_id;
            out += " Q0 ";
            out += e.doc_id;
            out += ' ';
            out += std::to_string(i + 1);
            out += ' ';
            out += io::format_fixed6(e.score);
            out += ' ';
            out += tag;
            out += '\n';
        }
    }
    return out;
}

void write_run(const std::vector<ScoredList>& lists, const std::filesystem::path& path,
               std::string_view tag) {
    const auto text = format_run(lists, tag);
    io::write_atomic(path, [&](std::ostream& out) { out << text; });
}

}  // namespace lexica
