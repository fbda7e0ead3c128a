#include "qpt/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qpt {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& param_name,
                     const std::vector<std::string>& columns,
                     const std::string& config_json, bool degenerate_column)
    : path_(path), param_name_(param_name), n_cols_(columns.size()),
      degenerate_column_(degenerate_column) {
  out_.open(path, std::ios::trunc);
  if (!out_) throw UsageError("cannot open output file '" + path + "'");
  out_ << "# qpt scan v1\n";
  if (!config_json.empty()) out_ << "# config: " << config_json << "\n";
  out_ << param_name;
  for (const auto& c : columns) out_ << "," << c;
  if (degenerate_column_) out_ << ",degenerate";
  out_ << "\n";
  out_.flush();
}

void CsvWriter::write_row(const ScanRecord& rec) {
  if (!rec.error.empty())
    out_ << "# error " << param_name_ << "=" << format_double(rec.param)
         << ": " << rec.error << "\n";
  out_ << format_double(rec.param);
  for (std::size_t i = 0; i < n_cols_; ++i)
    out_ << ","
         << format_double(i < rec.values.size()
                              ? rec.values[i]
                              : std::numeric_limits<double>::quiet_NaN());
  if (degenerate_column_) out_ << "," << (rec.degenerate ? 1 : 0);
  out_ << "\n";
  out_.flush();
}

void CsvWriter::write_comment(const std::string& text) {
  out_ << "# " << text << "\n";
  out_.flush();
}

void CsvWriter::close() {
  if (out_.is_open()) {
    out_.flush();
    out_.close();
    if (!out_) throw UsageError("failed writing '" + path_ + "'");
  }
}

std::size_t CsvFile::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw UsageError("CSV has no column named '" + name + "'");
}

std::vector<double> CsvFile::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> v(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    v[i] = c < rows[i].size() ? rows[i][c]
                              : std::numeric_limits<double>::quiet_NaN();
  return v;
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  CsvFile f;
  std::string line;
  std::string pending_error;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body = body.substr(1);
      f.comments.push_back(body);
      const std::string key = "config: ";
      if (body.rfind(key, 0) == 0) f.config_json = body.substr(key.size());
      // "error <param>=<x>: <message>" comments precede the row they mark.
      if (body.rfind("error ", 0) == 0) {
        const std::size_t sep = body.find(": ");
        pending_error =
            sep == std::string::npos ? body.substr(6) : body.substr(sep + 2);
      }
      continue;
    }
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    if (!have_header) {
      f.columns = fields;
      have_header = true;
      pending_error.clear();
      continue;
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i] == "nan" || fields[i] == "-nan") {
        row[i] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      try {
        std::size_t used = 0;
        row[i] = std::stod(fields[i], &used);
        if (used != fields[i].size()) throw std::invalid_argument(fields[i]);
      } catch (const std::exception&) {
        throw UsageError("CSV cell '" + fields[i] + "' in '" + path +
                         "' is not numeric");
      }
    }
    f.rows.push_back(std::move(row));
    f.row_errors.push_back(std::move(pending_error));
    pending_error.clear();
  }
  if (!have_header) throw UsageError("CSV '" + path + "' has no header row");
  return f;
}

ScanTable table_from_csv(const CsvFile& file) {
  if (file.columns.empty()) throw UsageError("CSV has no columns");
  ScanTable t;
  t.param_name = file.columns.front();
  const bool has_degen =
      file.columns.size() >= 2 && file.columns.back() == "degenerate";
  const std::size_t n_meas = file.columns.size() - 1 - (has_degen ? 1 : 0);
  t.columns.assign(file.columns.begin() + 1,
                   file.columns.begin() + 1 + n_meas);
  t.rows.reserve(file.rows.size());
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    const auto& row = file.rows[i];
    if (row.size() != file.columns.size())
      throw UsageError("CSV row width does not match header");
    ScanRecord rec;
    rec.param = row[0];
    rec.values.assign(row.begin() + 1, row.begin() + 1 + n_meas);
    rec.degenerate = has_degen && row.back() != 0.0;
    if (i < file.row_errors.size()) rec.error = file.row_errors[i];
    t.rows.push_back(std::move(rec));
  }
  return t;
}

void write_scan_csv(const std::string& path, const ScanTable& table,
                    const std::string& config_json, bool degenerate_column) {
  CsvWriter w(path, table.param_name, table.columns, config_json,
              degenerate_column);
  for (const auto& rec : table.rows) w.write_row(rec);
  w.close();
}

}  // namespace qpt
