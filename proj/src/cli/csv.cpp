#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ihd/cli.hpp"

namespace ihd::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string trace_to_csv(const Trace& trace, int dim) {
  const bool coords = dim <= 4;
  std::string out = "k,f,residual,step_norm,lyapunov";
  if (coords)
    for (int d = 0; d < dim; ++d) out += ",x" + std::to_string(d);
  out += "\n";
  for (const TraceRecord& r : trace.records) {
    out += std::to_string(r.k);
    out += ',';
    out += fmt(r.f_value);
    out += ',';
    out += fmt(r.residual);
    out += ',';
    out += fmt(r.step_norm);
    out += ',';
    out += fmt(r.lyapunov);
    if (coords)
      for (int d = 0; d < dim; ++d) {
        out += ',';
        out += fmt(r.x[d]);
      }
    out += '\n';
  }
  return out;
}

std::string time_to_csv(const Trace& trace) {
  std::string out = "k,t_sec\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    out += std::to_string(trace.records[i].k);
    out += ',';
    out += fmt(i < trace.t_sec.size() ? trace.t_sec[i] : 0.0);
    out += '\n';
  }
  return out;
}

long CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<long>(i);
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) table.columns.push_back(col);
  }
  if (table.columns.empty()) throw ConfigError(path + ": empty header");
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      const char* s = cell.c_str();
      char* end = nullptr;
      const double v = std::strtod(s, &end);
      if (end == s || *end != '\0')
        throw ConfigError(path + ": line " + std::to_string(lineno) +
                          ": not a number: '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != table.columns.size())
      throw ConfigError(path + ": line " + std::to_string(lineno) +
                        ": expected " + std::to_string(table.columns.size()) +
                        " fields, got " + std::to_string(row.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace ihd::cli
