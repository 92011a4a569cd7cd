// Deterministic artifact writers: CSV tables and plain text files.
//
// Numbers are rendered with %.17g so writing and re-reading round-trips every
// double exactly and identical runs produce byte-identical files.
#pragma once

#include <string>
#include <vector>

namespace rwave {

std::string format_g17(double v);

// Writes a header row followed by numeric rows; every row must match the
// column count.  Parent directories are created as needed.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rwave
