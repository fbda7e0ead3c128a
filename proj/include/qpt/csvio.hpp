#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "qpt/analysis.hpp"
#include "qpt/errors.hpp"

namespace qpt {

// Shortest round-trip decimal form of a double (%.17g); NaN prints as "nan".
std::string format_double(double v);

// Streaming writer for scan tables. Layout:
//   # qpt scan v1
//   # config: {...one-line JSON echo...}
//   <param>,<col>,...[,degenerate]
//   1.25,0.3721,...,0
// Failed points keep their row (NaN cells) and gain a preceding
// "# error <param>=<x>: <message>" comment. Rows are flushed as written so a
// partial file is usable after an interrupted run.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& param_name,
            const std::vector<std::string>& columns,
            const std::string& config_json, bool degenerate_column);

  void write_row(const ScanRecord& rec);
  void write_comment(const std::string& text);  // "# <text>"
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::string param_name_;
  std::size_t n_cols_ = 0;
  bool degenerate_column_ = false;
};

// Parsed CSV contents. `comments` holds every "#" line with the marker and
// one optional following space stripped; the config echo is also surfaced
// separately for cache-key comparison and replay.
struct CsvFile {
  std::vector<std::string> comments;
  std::string config_json;  // empty when no "config:" comment is present
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Error message for each row, reattached from the "# error ..." comment
  // immediately preceding it; empty for clean rows.
  std::vector<std::string> row_errors;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

CsvFile read_csv(const std::string& path);

// Convert parsed CSV back into a ScanTable (param = first column; a final
// "degenerate" column, when present, is folded into the row flag).
ScanTable table_from_csv(const CsvFile& file);

void write_scan_csv(const std::string& path, const ScanTable& table,
                    const std::string& config_json, bool degenerate_column);

}  // namespace qpt
