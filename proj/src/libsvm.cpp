#include "lqsp/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace lqsp {

namespace {

bool parse_double(std::string_view token, double& out) {
  // from_chars for double is not available everywhere; strtod on a copy.
  std::string copy(token);
  char* end = nullptr;
  out = std::strtod(copy.c_str(), &end);
  return end == copy.c_str() + copy.size() && !copy.empty() && std::isfinite(out);
}

bool parse_index(std::string_view token, long long& out) {
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Eigen::VectorXd DatasetTable::labels01() const {
  return labels.unaryExpr([](double y) { return y > 0.0 ? 1.0 : 0.0; });
}

DatasetTable read_libsvm(std::istream& in, Eigen::Index min_features) {
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> raw_labels;
  long long max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token) || token[0] == '#') continue;
    double label = 0.0;
    if (!parse_double(token, label)) throw ParseError(line_no, "bad label '" + token + "'");
    const auto row = static_cast<int>(raw_labels.size());
    raw_labels.push_back(label);
    long long previous = 0;
    while (tokens >> token) {
      if (token[0] == '#') break;
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "expected idx:val, got '" + token + "'");
      long long index = 0;
      double value = 0.0;
      if (!parse_index(std::string_view(token).substr(0, colon), index) || index < 1) {
        throw ParseError(line_no, "bad feature index in '" + token + "'");
      }
      if (!parse_double(std::string_view(token).substr(colon + 1), value)) {
        throw ParseError(line_no, "bad feature value in '" + token + "'");
      }
      if (index <= previous) throw ParseError(line_no, "feature indices must be strictly increasing");
      previous = index;
      max_index = std::max(max_index, index);
      if (value != 0.0) triplets.emplace_back(row, static_cast<int>(index - 1), value);
    }
  }
  if (raw_labels.empty()) throw ParseError(line_no, "no samples found");

  const std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) throw ParseError(line_no, "expected a binary dataset, found more than two labels");
  const double positive = *distinct.rbegin();

  DatasetTable table;
  const Eigen::Index cols = std::max<Eigen::Index>(static_cast<Eigen::Index>(max_index), min_features);
  table.samples.resize(static_cast<Eigen::Index>(raw_labels.size()), cols);
  table.samples.setFromTriplets(triplets.begin(), triplets.end());
  table.samples.makeCompressed();
  table.labels.resize(static_cast<Eigen::Index>(raw_labels.size()));
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    // A single-label file is all positive when that label is positive.
    const bool pos = distinct.size() == 1 ? raw_labels[i] > 0.0 : raw_labels[i] == positive;
    table.labels[static_cast<Eigen::Index>(i)] = pos ? 1.0 : -1.0;
  }
  return table;
}

DatasetTable read_libsvm(const std::filesystem::path& path, Eigen::Index min_features) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_libsvm(in, min_features);
}

void write_libsvm(std::ostream& out, const DatasetTable& table) {
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows = table.samples;
  char buf[64];
  for (Eigen::Index i = 0; i < rows.outerSize(); ++i) {
    out << (table.labels[i] > 0.0 ? "1" : "-1");
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, i); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << ' ' << (it.col() + 1) << ':' << buf;
    }
    out << '\n';
  }
}

void write_libsvm(const std::filesystem::path& path, const DatasetTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_libsvm(out, table);
}

DatasetTable scale_features(const DatasetTable& table) {
  DatasetTable out = table;
  out.samples.makeCompressed();
  Eigen::VectorXd max_abs = Eigen::VectorXd::Zero(out.cols());
  for (Eigen::Index j = 0; j < out.samples.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(out.samples, j); it; ++it) {
      max_abs[j] = std::max(max_abs[j], std::abs(it.value()));
    }
  }
  for (Eigen::Index j = 0; j < out.samples.outerSize(); ++j) {
    if (max_abs[j] == 0.0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(out.samples, j); it; ++it) {
      it.valueRef() /= max_abs[j];
    }
  }
  out.scaled = true;
  return out;
}

}  // namespace lqsp
