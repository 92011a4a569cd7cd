#include "rwave/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rwave/errors.hpp"

namespace rwave {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void ensure_parent(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec)
      throw InvalidArgument("cannot create directory " + p.parent_path().string() + ": " +
                            ec.message());
  }
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline mangling
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw InvalidArgument("csv row width " + std::to_string(row.size()) +
                            " does not match " + std::to_string(columns.size()) +
                            " columns in " + path);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_g17(row[c]);
    }
    out << '\n';
  }
  if (!out.good()) throw InvalidArgument("write failed for " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  out << content;
  if (!out.good()) throw InvalidArgument("write failed for " + path);
}

}  // namespace rwave
