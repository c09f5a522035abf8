#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lexica::io {

/// Reads a text file into lines, stripping the trailing '\n' (and '\r').
/// Throws ConfigError when the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it over `path`, so a
/// failed writer never leaves a partial output behind. A path of "-"
/// streams to stdout instead, or to the stream of the innermost
/// StdoutRedirect on this thread.
void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

class StdoutRedirect {
  public:
    explicit StdoutRedirect(std::ostream& target);
    ~StdoutRedirect();
    StdoutRedirect(const StdoutRedirect&) = delete;
    StdoutRedirect& operator=(const StdoutRedirect&) = delete;

  private:
    std::ostream* previous_;
};

/// True for lines that hold nothing but whitespace.
bool is_blank(std::string_view line);

/// Formats with printf-style "%.6f".
std::string format_fixed6(double value);

}  // namespace lexica::io
