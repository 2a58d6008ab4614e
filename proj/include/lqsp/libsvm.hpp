#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace lqsp {

/// Binary-labelled sparse samples, one row per sample.
struct DatasetTable {
  Eigen::SparseMatrix<double> samples;
  Eigen::VectorXd labels;  // -1 / +1
  bool scaled = false;

  Eigen::Index rows() const { return samples.rows(); }
  Eigen::Index cols() const { return samples.cols(); }
  /// Labels mapped back to 0/1 (for the logistic model).
  Eigen::VectorXd labels01() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads `label idx:val idx:val ...` lines with 1-based, strictly increasing
/// feature indices. Exactly two distinct label values are allowed; the smaller
/// maps to -1 and the larger to +1 (so 0/1 files map 0 to -1). Blank lines and
/// lines starting with '#' are skipped. `min_features` pads the column count.
DatasetTable read_libsvm(std::istream& in, Eigen::Index min_features = 0);
DatasetTable read_libsvm(const std::filesystem::path& path, Eigen::Index min_features = 0);

/// Writes the table in the same format, values with 17 significant digits.
void write_libsvm(std::ostream& out, const DatasetTable& table);
void write_libsvm(const std::filesystem::path& path, const DatasetTable& table);

/// Divides each feature column by its largest magnitude; all-zero columns are
/// left alone. Entries end up in [-1,1].
DatasetTable scale_features(const DatasetTable& table);

}  // namespace lqsp
