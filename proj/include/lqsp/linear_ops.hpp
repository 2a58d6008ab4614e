#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace lqsp {

using Index = Eigen::Index;

/// Sorted, duplicate-free coordinate index set.
using Support = std::vector<Index>;

/// Indices of the nonzero entries of x, ascending.
Support support_of(const Eigen::VectorXd& x);

/// x restricted to the coordinates in s.
Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const Support& s);

/// Length-n vector equal to v on s and zero elsewhere.
Eigen::VectorXd scatter(const Eigen::VectorXd& v, const Support& s, Index n);

/// A subset of columns of a DataMatrix, gathered into its own storage.
class ColumnBlock {
 public:
  ColumnBlock(Eigen::MatrixXd dense);
  ColumnBlock(Eigen::SparseMatrix<double> sparse);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const { return sparse_.has_value(); }

  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& r) const;

  /// B^T diag(w) B; an empty w means the identity weighting.
  Eigen::MatrixXd weighted_gram(const Eigen::VectorXd& w) const;

 private:
  Eigen::MatrixXd dense_;
  std::optional<Eigen::SparseMatrix<double>> sparse_;
};

/// Immutable m-by-n matrix, dense (column-major) or sparse (kept in both CSC
/// and CSR so that A x and A^T r are both gather loops).
class DataMatrix {
 public:
  DataMatrix();
  explicit DataMatrix(Eigen::MatrixXd dense);
  explicit DataMatrix(const Eigen::SparseMatrix<double>& sparse);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const;

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& r) const;

  /// Serial reference versions of the two products.
  Eigen::VectorXd multiply_serial(const Eigen::VectorXd& x) const;
  Eigen::VectorXd multiply_transpose_serial(const Eigen::VectorXd& r) const;

  ColumnBlock columns(const Support& s) const;
  Eigen::MatrixXd to_dense() const;

  const Eigen::MatrixXd& dense() const;
  const Eigen::SparseMatrix<double>& sparse() const;

 private:
  struct Storage;
  std::shared_ptr<const Storage> storage_;
};

/// Symmetric linear map on R^dim, either stored as a matrix or as an action.
class SymmetricOperator {
 public:
  using Action = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  static SymmetricOperator from_matrix(Eigen::MatrixXd m);
  static SymmetricOperator from_action(Index dim, Action action);

  Index dim() const { return dim_; }
  bool has_matrix() const { return matrix_ != nullptr; }
  const Eigen::MatrixXd& matrix() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  /// Dense matrix of the operator (built column by column if only an action).
  Eigen::MatrixXd materialize() const;

  /// The operator plus diag(d).
  SymmetricOperator plus_diagonal(const Eigen::VectorXd& d) const;

 private:
  Index dim_ = 0;
  std::shared_ptr<const Eigen::MatrixXd> matrix_;
  Action action_;
};

enum class LinearSolveStatus { Converged, Singular, NonPositiveCurvature, NoConvergence };

struct LinearSolveResult {
  Eigen::VectorXd solution;
  LinearSolveStatus status = LinearSolveStatus::Converged;
  int iterations = 0;
  double residual_norm = 0.0;

  bool ok() const { return status == LinearSolveStatus::Converged; }
};

/// LU with partial pivoting. Reports Singular when a pivot falls below
/// 1e-12*||M||_inf or the residual exceeds 1e-10*(1+||rhs||).
LinearSolveResult solve_direct(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs);

/// Conjugate gradients. Stops on ||r|| <= tol*||rhs||; aborts with
/// NonPositiveCurvature as soon as <Mp,p> <= 0. maxit < 0 means 10*dim.
LinearSolveResult solve_cg(const SymmetricOperator& op, const Eigen::VectorXd& rhs,
                           double tol = 1e-10, int maxit = -1);

}  // namespace lqsp
