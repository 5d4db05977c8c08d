#include "evsim/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "evsim/errors.hpp"

namespace evsim {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw DataError(path + ": read failed");
    return std::move(buf).str();
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError(tmp + ": cannot open for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            throw DataError(tmp + ": write failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        const int err = errno;
        std::remove(tmp.c_str());
        throw DataError(path + ": rename failed: " + std::strerror(err));
    }
}

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}

} // namespace

CsvTable read_csv(const std::string& path, const std::vector<std::string>& expected_header,
                  bool allow_empty)
{
    const std::string text = read_file(path);
    CsvTable table;
    table.path = path;

    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = nl + 1;
        ++line_no;

        if (line.empty()) {
            if (pos >= text.size()) break; // trailing newline
            throw DataError(path + ":" + std::to_string(line_no) + ": blank line");
        }
        if (line_no == 1) {
            table.header = split_fields(line);
            if (table.header != expected_header) {
                throw DataError(path + ":1: expected header '" + join(expected_header) + "', got '" +
                                line + "'");
            }
            continue;
        }
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != expected_header.size()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (table.header.empty()) throw DataError(path + ": empty file");
    if (table.rows.empty() && !allow_empty) throw DataError(path + ": no data rows");
    return table;
}

void csv_fail(const CsvTable& table, std::size_t row, const std::string& message)
{
    throw DataError(table.path + ":" + std::to_string(table.line_numbers[row]) + ": " + message);
}

double csv_double(const CsvTable& table, std::size_t row, std::size_t col)
{
    const std::string& s = table.rows[row][col];
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        csv_fail(table, row, "column '" + table.header[col] + "': not a number: '" + s + "'");
    }
    return v;
}

std::int64_t csv_int(const CsvTable& table, std::size_t row, std::size_t col)
{
    const std::string& s = table.rows[row][col];
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        csv_fail(table, row, "column '" + table.header[col] + "': not an integer: '" + s + "'");
    }
    return v;
}

SimTime csv_timestamp(const CsvTable& table, std::size_t row, std::size_t col)
{
    try {
        return SimTime::parse(table.rows[row][col]);
    }
    catch (const DataError& e) {
        csv_fail(table, row, std::string("column '") + table.header[col] + "': " + e.what());
    }
}

} // namespace evsim
