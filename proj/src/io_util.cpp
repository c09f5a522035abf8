#include "lexica/io_util.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lexica/error.hpp"

namespace lexica::io {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

namespace {

thread_local std::ostream* stdout_target = nullptr;

}  // namespace

StdoutRedirect::StdoutRedirect(std::ostream& target) : previous_(stdout_target) {
    stdout_target = &target;
}

StdoutRedirect::~StdoutRedirect() { stdout_target = previous_; }

void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer) {
    if (path == "-") {
        std::ostream& out = stdout_target != nullptr ? *stdout_target : std::cout;
        writer(out);
        out.flush();
        return;
    }
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw ConfigError("cannot write " + path.string());
            }
            writer(out);
            out.flush();
            if (!out) {
                throw ConfigError("write failed for " + path.string());
            }
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string format_fixed6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

}  // namespace lexica::io
