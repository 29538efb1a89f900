#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pcs::io {

/// %g-style float text with `digits` significant digits (trailing zeros
/// stripped); the 15-digit default is the CSV contract.
std::string format_double(double v, int digits = 15);

/// Minimal CSV assembler: fixed header, rows of preformatted cells.
class csv_table {
public:
  explicit csv_table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes via a temp file in the target directory plus rename, so readers
/// never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace pcs::io
