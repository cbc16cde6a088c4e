#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lfikit {

// Shortest exact decimal for a double ("%.17g" trimmed): reading it back
// reproduces the same bits, and equal values always print identically.
std::string format_double(double v);

// FNV-1a 64-bit hash of a byte string, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Writes bytes to `path` atomically: temporary file in the same directory,
// then rename. Throws IoError on any filesystem failure.
void atomic_write_file(const std::filesystem::path& path, const std::string& bytes);

std::string read_file(const std::filesystem::path& path);

// Renders header + numeric rows as CSV (UTF-8, LF endings, no quoting —
// callers pass plain identifiers as column names).
std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Strict reader for the files csv_string produces.
CsvTable read_csv(const std::filesystem::path& path);

} // namespace lfikit
