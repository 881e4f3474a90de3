#include "scca/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "scca/error.hpp"

namespace scca {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    return lines;
}

[[noreturn]] void format_error(std::size_t line, const std::string& what) {
    fail(ErrorKind::FormatError, "line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view token, std::size_t line, std::size_t column) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
        format_error(line, "column " + std::to_string(column) + ": not a finite number '" + std::string(token) + "'");
    }
    return v;
}

long long parse_integer(std::string_view token, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        format_error(line, "expected an integer, got '" + std::string(token) + "'");
    }
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto start = s.find_first_not_of(" \t\r", pos);
        if (start == std::string_view::npos) break;
        const auto end = s.find_first_of(" \t\r", start);
        out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) break;
        pos = end;
    }
    return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path.string());
    out << content;
    if (!out) fail(ErrorKind::InvalidInput, "write failed for " + path.string());
}

Matrix parse_dense(std::string_view text, bool has_header) {
    std::vector<std::vector<double>> rows;
    bool header_pending = has_header;
    std::size_t line_no = 0;
    for (std::string_view raw : split_lines(text)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::vector<double> row;
        std::size_t pos = 0;
        std::size_t column = 1;
        for (;;) {
            const auto comma = line.find(',', pos);
            const auto token = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            row.push_back(parse_number(token, line_no, column));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
            ++column;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            format_error(line_no, "ragged row: expected " + std::to_string(rows.front().size()) + " values, got " +
                                      std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorKind::FormatError, "no numeric rows found");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

Matrix load_dense(const std::filesystem::path& path, bool has_header) {
    try {
        return parse_dense(read_file(path), has_header);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::FormatError) fail(ErrorKind::FormatError, path.string() + ": " + e.what());
        throw;
    }
}

double parse_double(std::string_view text) { return parse_number(text, 1, 1); }

std::string format_number(double v) {
    char buf[64];
    // Shortest round-trip representation; never more than 17 significant digits.
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) fail(ErrorKind::InvalidInput, "format_number: conversion failed");
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    if (ec != std::errc()) fail(ErrorKind::InvalidInput, "format_fixed: conversion failed");
    return std::string(buf, ptr);
}

std::string format_dense(const Matrix& m) {
    std::string out;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_number(m(i, j));
        }
        out += '\n';
    }
    return out;
}

void save_dense(const std::filesystem::path& path, const Matrix& m) { write_file(path, format_dense(m)); }

Matrix parse_sparse_triplets(std::string_view text) {
    bool have_header = false;
    Index rows = 0, cols = 0;
    long long nnz = 0, seen = 0;
    Matrix m;
    std::size_t line_no = 0;
    for (std::string_view raw : split_lines(text)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '%') continue;
        const auto tokens = split_ws(line);
        if (tokens.size() != 3) format_error(line_no, "expected three fields");
        if (!have_header) {
            rows = parse_integer(tokens[0], line_no);
            cols = parse_integer(tokens[1], line_no);
            nnz = parse_integer(tokens[2], line_no);
            if (rows < 1 || cols < 1 || nnz < 0) format_error(line_no, "invalid header dimensions");
            m = Matrix::Zero(rows, cols);
            have_header = true;
            continue;
        }
        const long long i = parse_integer(tokens[0], line_no);
        const long long j = parse_integer(tokens[1], line_no);
        const double v = parse_number(tokens[2], line_no, 3);
        if (i < 1 || i > rows || j < 1 || j > cols) format_error(line_no, "index out of bounds");
        m(i - 1, j - 1) += v;
        ++seen;
    }
    if (!have_header) fail(ErrorKind::FormatError, "missing 'rows cols nnz' header");
    if (seen != nnz) {
        fail(ErrorKind::FormatError, "header declares " + std::to_string(nnz) + " entries, found " + std::to_string(seen));
    }
    return m;
}

Matrix load_sparse_triplets(const std::filesystem::path& path) {
    try {
        return parse_sparse_triplets(read_file(path));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::FormatError) fail(ErrorKind::FormatError, path.string() + ": " + e.what());
        throw;
    }
}

void KeyValueWriter::add(const std::string& key, const std::string& value) {
    text_ += key;
    text_ += '=';
    text_ += value;
    text_ += '\n';
}

void KeyValueWriter::add(const std::string& key, double value) { add(key, format_number(value)); }

void KeyValueWriter::add(const std::string& key, long long value) { add(key, std::to_string(value)); }

void KeyValueWriter::save(const std::filesystem::path& path) const { write_file(path, text_); }

std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    for (std::string_view raw : split_lines(text)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) format_error(line_no, "expected key=value");
        out[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

std::map<std::string, std::string> load_key_values(const std::filesystem::path& path) {
    return parse_key_values(read_file(path));
}

}  // namespace scca
