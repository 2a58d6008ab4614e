#pragma once

#include "lqsp/libsvm.hpp"
#include "lqsp/problems.hpp"
#include "lqsp/solver.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>

namespace lqsp {

/// Synthetic compressed-sensing instance b = A x_true + nf*eps.
struct CsInstance {
  DataMatrix A;
  Eigen::VectorXd b;
  Eigen::VectorXd x_true;
  Index s = 0;
  double nf = 0.0;
  std::uint64_t seed = 0;
  double density = 1.0;

  Problem problem() const { return Problem::least_squares(A, b); }
};

/// Gaussian A with unit columns (each entry kept with probability `density`,
/// empty columns are redrawn), s-sparse x_true with magnitudes in [0.5,1.5]
/// and random signs. Deterministic in the seed.
CsInstance gen_cs(Index m, Index n, Index s, double nf, std::uint64_t seed, double density = 1.0);

/// Sparse-ground-truth classification data: Gaussian samples (rows), an
/// s-sparse x_true drawn as in gen_cs.
struct ClassificationInstance {
  DatasetTable table;
  Eigen::VectorXd x_true;
};

/// Labels y_i = +1 with probability sigmoid(<a_i, x_true>), else -1.
ClassificationInstance gen_logistic(Index m, Index n, Index s, std::uint64_t seed);

/// Two Gaussian classes: labels are fair +-1 draws and sample i is
/// y_i * x_true + eps_i, so only the s coordinates of x_true separate the
/// classes. Features are scaled to [-1,1].
ClassificationInstance gen_svm(Index m, Index n, Index s, std::uint64_t seed);

/// The multiplier a in lambda = a*||A^T b||_inf: 0.02, 0.03, 0.04 for
/// q = 0, 1/2, 2/3. Other q throw std::invalid_argument.
double cs_lambda_multiplier(double q);

/// a*||A^T b||_inf with a from cs_lambda_multiplier unless given.
double lambda_rule_cs(const DataMatrix& a, const Eigen::VectorXd& b, double q,
                      std::optional<double> multiplier = std::nullopt);

struct SvmRegularization {
  double lambda = 0.0;
  double mu = 0.0;
};

/// lambda = 0.0003*log2(n/m)/m * ||sum_i y_i a_i||_inf, mu = lambda.
SvmRegularization lambda_rule_svm(const DatasetTable& table);

/// log2(m*n)*1e-5.
double svm_grad_tol(Index m, Index n);

struct MetricRow {
  std::string algo;
  double q = 0.0;
  double f_value = 0.0;
  std::optional<double> re_err;
  std::optional<double> acc;
  Index support_size = 0;
  double time_seconds = 0.0;
  int iterations = 0;
  std::string status;
};

/// ||x - x_true|| / ||x_true||.
double relative_error(const Eigen::VectorXd& x, const Eigen::VectorXd& x_true);

/// Fraction of samples with y_i*sgn(<a_i,x>) > 0; a zero score counts as wrong.
double classification_accuracy(const DataMatrix& samples, const Eigen::VectorXd& labels_pm1,
                               const Eigen::VectorXd& x);

MetricRow metrics(const std::string& algo, double q, const SolveReport& report, const CsInstance& instance);
MetricRow metrics(const std::string& algo, double q, const SolveReport& report, const DatasetTable& table);

}  // namespace lqsp
