#include "lqsp/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lqsp {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

long long to_integer(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_csv_row(const MetricRow& row) {
  std::string out = row.algo;
  out += ',' + fmt("%.6g", row.q);
  out += ',' + fmt("%.6g", row.f_value);
  out += ',' + (row.re_err ? fmt("%.6g", *row.re_err) : std::string());
  out += ',' + (row.acc ? fmt("%.6g", *row.acc) : std::string());
  out += ',' + std::to_string(row.support_size);
  out += ',' + fmt("%.6g", row.time_seconds);
  out += ',' + std::to_string(row.iterations);
  out += ',' + row.status;
  return out;
}

void write_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << format_csv_row(row) << '\n';
}

std::vector<MetricRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("csv: missing or wrong header");
  std::vector<MetricRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 9 fields");
    MetricRow row;
    row.algo = f[0];
    row.q = to_double(f[1], line_no);
    row.f_value = to_double(f[2], line_no);
    if (!f[3].empty()) row.re_err = to_double(f[3], line_no);
    if (!f[4].empty()) row.acc = to_double(f[4], line_no);
    row.support_size = static_cast<Index>(to_integer(f[5], line_no));
    row.time_seconds = to_double(f[6], line_no);
    row.iterations = static_cast<int>(to_integer(f[7], line_no));
    row.status = f[8];
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  for (const auto& r : trace) {
    out << r.k << ',' << fmt("%.17g", r.objective) << ',' << fmt("%.17g", r.grad_inf) << ',' << r.support_size
        << ',' << fmt("%.17g", r.alpha) << ',' << (r.beta ? fmt("%.17g", *r.beta) : std::string("nan")) << ','
        << (r.newton_accepted ? 1 : 0) << '\n';
  }
}

}  // namespace lqsp
