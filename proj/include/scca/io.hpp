#pragma once

// Text formats.
//
// Dense: comma-separated decimals, one matrix row per line, optional single
// header line. Written with 17 significant digits so values round-trip
// exactly.
//
// Sparse: coordinate triplets. '%' lines are comments; the first other line
// is "rows cols nnz", followed by nnz lines "i j value" with 1-based indices.
// Duplicate (i, j) entries are summed.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "scca/types.hpp"

namespace scca {

Matrix parse_dense(std::string_view text, bool has_header = false);
Matrix load_dense(const std::filesystem::path& path, bool has_header = false);

std::string format_dense(const Matrix& m);
void save_dense(const std::filesystem::path& path, const Matrix& m);

Matrix parse_sparse_triplets(std::string_view text);
Matrix load_sparse_triplets(const std::filesystem::path& path);

// Locale-independent decimal parse; FormatError on trailing junk or non-finite.
double parse_double(std::string_view text);

// Shortest text that reads back as the same double, at most 17 digits.
std::string format_number(double v);
// Fixed-point with `decimals` digits, for human-readable tables.
std::string format_fixed(double v, int decimals);

// key=value records, one per line, LF endings, keys kept in insertion order.
class KeyValueWriter {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, long long value);
    std::string str() const { return text_; }
    void save(const std::filesystem::path& path) const;

private:
    std::string text_;
};

std::map<std::string, std::string> parse_key_values(std::string_view text);
std::map<std::string, std::string> load_key_values(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace scca
