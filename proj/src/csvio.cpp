#include "pcs/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcs/error.hpp"

namespace pcs::io {

namespace {

std::string quote_if_needed(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

} // namespace

std::string format_double(double v, int digits) {
  digits = std::max(1, std::min(digits, 17));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void csv_table::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw error(errc::invalid_argument, "csv_table: row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string csv_table::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header_.size(); ++i)
    out << (i ? "," : "") << quote_if_needed(header_[i]);
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote_if_needed(row[i]);
    out << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(dir, ec); // best effort; the open below reports failures
  const fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io, "cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw error(errc::io, "write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw error(errc::io, "rename failed: " + path.string() + " (" + ec.message() + ")");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io, "cannot open for reading: " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw error(errc::io, "read failed: " + path.string());
  return out.str();
}

} // namespace pcs::io
