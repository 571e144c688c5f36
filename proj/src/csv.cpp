#include "qfield/io/csv.hpp"

#include <sstream>

#include "qfield/error.hpp"
#include "qfield/io/format.hpp"

namespace qfield::io {

std::string diagnostics_header(int nmax) {
  std::string header = "t";
  for (int n = 0; n <= nmax; ++n) {
    header += ",M" + std::to_string(n) + ",P" + std::to_string(n);
  }
  return header + ",X,H,boundary_max";
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord<double>>& records,
                           std::ostream& sink, int nmax) {
  if (nmax < 0) throw ValidationError("nmax must be non-negative");
  sink << diagnostics_header(nmax) << '\n';
  for (const auto& rec : records) {
    if (rec.n_max() < nmax) throw ValidationError("record carries fewer orders than nmax");
    std::string row = format_double(rec.time);
    for (int n = 0; n <= nmax; ++n) {
      row += ',' + format_double(rec.m[n]) + ',' + format_double(rec.p[n]);
    }
    row += ',' + format_double(rec.center) + ',' + format_double(rec.energy) + ',' +
           format_double(rec.boundary_max);
    sink << row << '\n';
  }
  sink.flush();
  if (!sink) throw IoError("failed writing diagnostics CSV");
}

std::vector<DiagnosticsRecord<double>> read_diagnostics_csv(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) throw IoError("diagnostics CSV is empty");
  int columns = 1;
  for (char c : line) columns += c == ',';
  const int nmax = (columns - 4) / 2 - 1;
  if (nmax < 0 || diagnostics_header(nmax) != trim(line)) {
    throw IoError("unrecognized diagnostics CSV header: " + line);
  }
  std::vector<DiagnosticsRecord<double>> records;
  int line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto v = parse_double(cell);
      if (!v) throw IoError("line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      values.push_back(*v);
    }
    if (static_cast<int>(values.size()) != columns) {
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                    " columns, got " + std::to_string(values.size()));
    }
    DiagnosticsRecord<double> rec;
    rec.time = values[0];
    for (int n = 0; n <= nmax; ++n) {
      rec.m.push_back(values[1 + 2 * n]);
      rec.p.push_back(values[2 + 2 * n]);
    }
    rec.center = values[columns - 3];
    rec.energy = values[columns - 2];
    rec.boundary_max = values[columns - 1];
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace qfield::io
