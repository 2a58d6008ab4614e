#pragma once

#include "lqsp/linear_ops.hpp"

#include <Eigen/Core>

#include <string_view>

namespace lqsp {

enum class ModelKind { LeastSquares, LogisticL2, SquaredHingeSvm };

std::string_view to_string(ModelKind kind);

/// Support-restricted element of the generalized Hessian of f.
struct RestrictedHessian {
  Support support;
  SymmetricOperator op;
};

/// Smooth loss f over a data matrix:
///   LeastSquares     0.5*||Ax - b||^2
///   LogisticL2       (1/m) sum softplus(<a_i,x>) - b_i <a_i,x> + mu/2 ||x||^2,  b_i in {0,1}
///   SquaredHingeSvm  (1/2m) sum max(1 - y_i <a_i,x>, 0)^2 + mu/2 ||x||^2,     y_i in {-1,1}
/// Rows of the data matrix are samples. Immutable after construction.
class Problem {
 public:
  /// Restricted Gram blocks are materialized only for supports up to this size.
  static constexpr Index kDefaultDenseThreshold = 500;

  Problem(ModelKind kind, DataMatrix data, Eigen::VectorXd response, double ridge = 0.0);

  static Problem least_squares(DataMatrix a, Eigen::VectorXd b);
  static Problem logistic(DataMatrix samples, Eigen::VectorXd labels01, double mu);
  static Problem squared_hinge_svm(DataMatrix samples, Eigen::VectorXd labels_pm1, double mu);

  ModelKind kind() const { return kind_; }
  const DataMatrix& data() const { return data_; }
  const Eigen::VectorXd& response() const { return response_; }
  double ridge() const { return ridge_; }
  Index samples() const { return data_.rows(); }
  Index dim() const { return data_.cols(); }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  /// One element of the generalized Hessian restricted to s (nonempty). For the
  /// SVM, samples exactly at the kink (margin 1) are excluded.
  RestrictedHessian restricted_hessian(const Eigen::VectorXd& x, const Support& s,
                                       Index dense_threshold = kDefaultDenseThreshold) const;

  /// F(x) = f(x) + lambda * sum |x_i|^q, with 0^0 = 0.
  double penalized_value(const Eigen::VectorXd& x, double lambda, double q) const;

  /// grad_S f(w) + lambda*q*sgn(w_S)|w_S|^{q-1}; every w_i, i in s, must be nonzero.
  Eigen::VectorXd restricted_penalized_gradient(const Eigen::VectorXd& w, const Support& s, double lambda,
                                                double q) const;

  /// Same, reusing a precomputed full gradient of f at w.
  static Eigen::VectorXd restricted_penalized_gradient(const Eigen::VectorXd& w, const Eigen::VectorXd& grad_f,
                                                       const Support& s, double lambda, double q);

  /// H_S + lambda*diag(q(q-1)|w_i|^{q-2}); every w_i, i in s, must be nonzero.
  RestrictedHessian newton_matrix(const Eigen::VectorXd& w, const Support& s, double lambda, double q,
                                  Index dense_threshold = kDefaultDenseThreshold) const;

 private:
  void check_dim(const Eigen::VectorXd& x) const;
  // Per-sample curvature weights of f at x (before the 1/m factor for the
  // classifiers); empty for least squares.
  Eigen::VectorXd hessian_weights(const Eigen::VectorXd& x) const;

  ModelKind kind_;
  DataMatrix data_;
  Eigen::VectorXd response_;
  double ridge_;
};

/// sum |x_i|^q with 0^0 = 0 (so q = 0 counts nonzeros).
double lq_penalty(const Eigen::VectorXd& x, double q);

}  // namespace lqsp
