#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "evsim/time.hpp"

namespace evsim {

std::string read_file(const std::string& path); // throws DataError

/// Writes via a sibling temp file and rename; no partial file is ever visible.
void write_file_atomic(const std::string& path, const std::string& content); // throws DataError

struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; // 1-based source line per row
};

/// Parses a comma-separated file (no quoting; CRLF tolerated) and checks the
/// header verbatim. Blank lines are rejected except one trailing newline.
/// A header with zero data rows is an error unless allow_empty is set.
CsvTable read_csv(const std::string& path, const std::vector<std::string>& expected_header,
                  bool allow_empty = false);

[[noreturn]] void csv_fail(const CsvTable& table, std::size_t row, const std::string& message);

double csv_double(const CsvTable& table, std::size_t row, std::size_t col);
std::int64_t csv_int(const CsvTable& table, std::size_t row, std::size_t col);
SimTime csv_timestamp(const CsvTable& table, std::size_t row, std::size_t col);

} // namespace evsim
