#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "apatlas/errors.hpp"

namespace apatlas {

/// Locale-independent float formatting: 9 significant digits, '.' decimal
/// separator. This is the CSV ground-truth format.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Writes content atomically (temp file + rename) with LF line endings.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw DomainError("write_file_atomic: cannot open " + tmp.string());
        out << content;
        if (!out)
            throw DomainError("write_file_atomic: write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

/// Minimal CSV accumulator: header row first, then value rows.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::string& header) { buf_ = header + "\n"; }

    void row_begin() { first_ = true; }
    void cell(const std::string& s) {
        if (!first_) buf_ += ',';
        buf_ += s;
        first_ = false;
    }
    void cell(double v) { cell(format_double(v)); }
    void row_end() { buf_ += '\n'; }

    const std::string& str() const { return buf_; }

private:
    std::string buf_;
    bool        first_ = true;
};

} // namespace apatlas
