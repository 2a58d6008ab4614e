#pragma once

#include "lqsp/problems.hpp"
#include "lqsp/prox.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lqsp {

enum class NewtonMode { Auto, Direct, CG, Off };

enum class SolveStatus { StationaryStop, MaxIter, LineSearchStall, NumericFailure };

std::string_view to_string(SolveStatus status);
std::string_view to_string(NewtonMode mode);

struct SolveOptions {
  double q = 0.0;
  double lambda = 0.0;
  double sigma = 1e-4;
  /// Initial Armijo step; 1 is the usual choice for least squares, 10 for the SVM.
  double tau = 1.0;
  double gamma = 0.5;
  int max_iter = 10000;
  double grad_tol = 1e-6;
  int max_backtracks = 50;
  NewtonMode newton_mode = NewtonMode::Auto;
  TieRule tie_rule = TieRule::PreferZero;
  /// Supports up to this size use the direct solve in Auto mode; larger use CG.
  Index dense_threshold = Problem::kDefaultDenseThreshold;
  double cg_tol = 1e-10;
  /// Empty means the origin.
  Eigen::VectorXd x0;
  /// Keep x^k and w^k of every iteration in SolveReport::history.
  bool record_iterates = false;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct TraceRecord {
  int k = 0;
  double objective = 0.0;      // F(x^k)
  double grad_inf = 0.0;       // ||grad_{S^k} F(x^k)||_inf (smooth part at zero coordinates)
  Index support_size = 0;      // |S^k| = |supp(w^k)|
  double alpha = 0.0;
  std::optional<double> beta;  // set when the Newton step was taken
  bool newton_accepted = false;
  bool support_changed = true;  // S^k != S^{k-1}, with S^{-1} = supp(x^0)
  double elapsed_seconds = 0.0;
  // Descent bookkeeping; unset on the terminating iteration.
  std::optional<double> objective_next;  // F(x^{k+1})
  double prox_step_sq = 0.0;             // ||w^k - x^k||^2
  double total_step_sq = 0.0;            // ||x^{k+1} - x^k||^2
};

struct IterateRecord {
  Eigen::VectorXd x;  // x^k
  Eigen::VectorXd w;  // w^k
};

struct SolveReport {
  Eigen::VectorXd x_final;
  Support support;
  double objective = 0.0;
  double f_value = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIter;
  std::vector<TraceRecord> trace;
  double stationarity_residual = 0.0;
  /// Step of the last proximal phase (used for the stationarity residual).
  double alpha_last = 0.0;
  double total_seconds = 0.0;
  std::vector<std::string> warnings;
  std::vector<IterateRecord> history;
};

/// Proximal semismooth Newton pursuit.
///
/// Each iteration takes an Armijo proximal-gradient step to w^k, fixes the
/// support S^k = supp(w^k), and then tries a Newton step on the restricted
/// surrogate f(x) + lambda*||x_S||_q^q. The Newton step is kept only if its own
/// backtracking finds sufficient decrease; otherwise x^{k+1} = w^k. Singular
/// systems, CG breakdowns and failed backtracking all fall back silently.
///
/// Stops with StationaryStop once S^k = S^{k-1} = supp(x^k) and the on-support
/// gradient of F at x^k is below grad_tol and ||w^k - x^k||_inf <= 10*grad_tol;
/// x^k is returned.
SolveReport psnp(const Problem& problem, const SolveOptions& opts);

/// Plain proximal gradient with the same step search and stopping rule
/// (hard thresholding for q = 0, half thresholding for q = 1/2, ...).
SolveReport prox_grad(const Problem& problem, const SolveOptions& opts);

/// ||x - Prox_{alpha*lambda*||.||_q^q}(x - alpha*grad f(x))||_inf, taking the
/// nearest element of the prox set per coordinate.
double stationarity_residual(const Problem& problem, const Eigen::VectorXd& x, double alpha, double lambda,
                             double q);

struct SecondOrderDiagnostic {
  double min_eig_M = 0.0;
  double min_eig_H = 0.0;
  bool sufficient_holds = false;   // min_eig_M > 0
  bool corollary1_holds = false;   // min_eig_H > q/(2 alpha)
};

/// Eigenvalue test of the restricted Newton matrix at x (x != 0).
SecondOrderDiagnostic second_order_check(const Problem& problem, const Eigen::VectorXd& x, double lambda, double q,
                                         double alpha);

/// ||grad_S F(x)||_inf over s; at coordinates where x_i = 0 only grad f counts.
double restricted_gradient_inf(const Eigen::VectorXd& x, const Eigen::VectorXd& grad_f, const Support& s,
                               double lambda, double q);

}  // namespace lqsp
