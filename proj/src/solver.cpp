#include "lqsp/solver.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lqsp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::StationaryStop: return "StationaryStop";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::LineSearchStall: return "LineSearchStall";
    case SolveStatus::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

std::string_view to_string(NewtonMode mode) {
  switch (mode) {
    case NewtonMode::Auto: return "auto";
    case NewtonMode::Direct: return "direct";
    case NewtonMode::CG: return "cg";
    case NewtonMode::Off: return "off";
  }
  return "unknown";
}

void SolveOptions::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(std::string("SolveOptions: ") + what); };
  if (!(q >= 0.0 && q < 1.0)) fail("q must lie in [0,1)");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be positive");
  if (!(sigma > 0.0)) fail("sigma must be positive");
  if (!(tau > 0.0)) fail("tau must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma must lie in (0,1)");
  if (max_iter < 0) fail("max_iter must be nonnegative");
  if (!(grad_tol > 0.0)) fail("grad_tol must be positive");
  if (max_backtracks < 0) fail("max_backtracks must be nonnegative");
  if (dense_threshold < 0) fail("dense_threshold must be nonnegative");
  if (!(cg_tol > 0.0)) fail("cg_tol must be positive");
}

double restricted_gradient_inf(const Eigen::VectorXd& x, const Eigen::VectorXd& grad_f, const Support& s,
                               double lambda, double q) {
  double out = 0.0;
  for (Index i : s) {
    double gi = grad_f[i];
    if (q > 0.0 && x[i] != 0.0) {
      const double sign = x[i] < 0.0 ? -1.0 : 1.0;
      gi += lambda * q * sign * std::pow(std::abs(x[i]), q - 1.0);
    }
    out = std::max(out, std::abs(gi));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct NewtonOutcome {
  bool accepted = false;
  double beta = 0.0;
  Eigen::VectorXd x;
  double objective = 0.0;
};

// Phase III: Newton direction on supp(w) followed by backtracking on beta.
NewtonOutcome newton_pursuit(const Problem& p, const SolveOptions& opts, const Eigen::VectorXd& w,
                             const Eigen::VectorXd& grad_w, double objective_w, const Support& s) {
  NewtonOutcome out;
  const Eigen::VectorXd rhs = Problem::restricted_penalized_gradient(w, grad_w, s, opts.lambda, opts.q);
  const Index k = static_cast<Index>(s.size());

  bool direct = opts.newton_mode == NewtonMode::Direct;
  if (opts.newton_mode == NewtonMode::Auto) direct = k <= opts.dense_threshold;
  const Index materialize_up_to = direct ? std::numeric_limits<Index>::max() : opts.dense_threshold;
  const RestrictedHessian m = p.newton_matrix(w, s, opts.lambda, opts.q, materialize_up_to);

  const LinearSolveResult solve =
      direct ? solve_direct(m.op.materialize(), rhs) : solve_cg(m.op, rhs, opts.cg_tol);
  if (!solve.ok() || !solve.solution.allFinite()) return out;

  const Eigen::VectorXd& d = solve.solution;
  const double d_sq = d.squaredNorm();
  double beta = 1.0;
  for (int t = 0; t <= opts.max_backtracks; ++t) {
    Eigen::VectorXd trial = w;
    for (Index i = 0; i < k; ++i) trial[s[static_cast<std::size_t>(i)]] -= beta * d[i];
    const double f_trial = p.penalized_value(trial, opts.lambda, opts.q);
    if (f_trial <= objective_w - 0.5 * opts.sigma * beta * beta * d_sq) {
      out.accepted = true;
      out.beta = beta;
      out.x = std::move(trial);
      out.objective = f_trial;
      return out;
    }
    beta *= opts.gamma;
  }
  return out;
}

SolveReport run(const Problem& p, const SolveOptions& opts, bool use_newton) {
  opts.validate();
  const auto start = Clock::now();
  const Index n = p.dim();
  const double lambda = opts.lambda;
  const double q = opts.q;

  SolveReport rep;
  Eigen::VectorXd x = opts.x0.size() == 0 ? Eigen::VectorXd::Zero(n) : opts.x0;
  if (x.size() != n) throw std::invalid_argument("SolveOptions: x0 has the wrong length");

  {
    const Eigen::VectorXd g0 = p.gradient(Eigen::VectorXd::Zero(n));
    if (g0.lpNorm<Eigen::Infinity>() == 0.0) {
      rep.warnings.emplace_back("gradient at the origin is zero; the origin is stationary");
    } else if (lambda >= lambda_upper_bound(g0, opts.tau, q)) {
      rep.warnings.emplace_back("lambda is not below the bound that excludes the origin for step tau");
    }
  }

  double objective = p.penalized_value(x, lambda, q);
  Eigen::VectorXd grad = p.gradient(x);
  if (!std::isfinite(objective) || !grad.allFinite()) {
    rep.status = SolveStatus::NumericFailure;
    rep.x_final = x;
    rep.objective = objective;
    rep.f_value = p.value(x);
    return rep;
  }

  Support prev_support = support_of(x);
  int empty_streak = 0;
  double alpha_last = opts.tau;
  int k = 0;
  for (;; ++k) {
    if (k >= opts.max_iter) {
      rep.status = SolveStatus::MaxIter;
      break;
    }

    // I. Proximal descent with alpha = tau*gamma^t.
    double alpha = opts.tau;
    Eigen::VectorXd w;
    double objective_w = 0.0;
    bool sufficient = false;
    for (int t = 0; t <= opts.max_backtracks; ++t) {
      const ProxSpec spec{alpha * lambda, q, opts.tie_rule};
      w = prox_vector(x - alpha * grad, spec);
      objective_w = p.penalized_value(w, lambda, q);
      if (objective_w <= objective - 0.5 * opts.sigma * (w - x).squaredNorm()) {
        sufficient = true;
        break;
      }
      if (t < opts.max_backtracks) alpha *= opts.gamma;
    }
    alpha_last = alpha;
    if (!sufficient) {
      if (objective_w <= objective) {
        rep.warnings.emplace_back("iteration " + std::to_string(k) +
                                  ": step search exhausted; accepted a non-increasing step");
      } else {
        rep.status = SolveStatus::LineSearchStall;
        break;
      }
    }

    // II. Support determination.
    const Support s = support_of(w);
    TraceRecord rec;
    rec.k = k;
    rec.objective = objective;
    rec.grad_inf = restricted_gradient_inf(x, grad, s, lambda, q);
    rec.support_size = static_cast<Index>(s.size());
    rec.alpha = alpha;
    rec.support_changed = s != prev_support;
    if (opts.record_iterates) rep.history.push_back({x, w});

    // The prox step doubles as the fixed-point certificate: with alpha*|grad| near
    // grad_tol*tau the gradient test alone can leave the residual just above 10*grad_tol.
    const bool certified = (w - x).lpNorm<Eigen::Infinity>() <= 10.0 * opts.grad_tol;
    if (!rec.support_changed && rec.grad_inf < opts.grad_tol && certified && support_of(x) == s) {
      rec.elapsed_seconds = seconds_since(start);
      rep.trace.push_back(rec);
      rep.status = SolveStatus::StationaryStop;
      break;
    }

    // III. Semismooth Newton pursuit on S^k.
    Eigen::VectorXd x_next = w;
    double objective_next = objective_w;
    std::optional<Eigen::VectorXd> grad_next;
    if (s.empty()) {
      ++empty_streak;
    } else {
      empty_streak = 0;
      if (use_newton) {
        Eigen::VectorXd grad_w = p.gradient(w);
        NewtonOutcome newton = newton_pursuit(p, opts, w, grad_w, objective_w, s);
        if (newton.accepted) {
          x_next = std::move(newton.x);
          objective_next = newton.objective;
          rec.beta = newton.beta;
          rec.newton_accepted = true;
        } else {
          grad_next = std::move(grad_w);
        }
      }
    }
    if (!grad_next) grad_next = p.gradient(x_next);

    rec.objective_next = objective_next;
    rec.prox_step_sq = (w - x).squaredNorm();
    rec.total_step_sq = (x_next - x).squaredNorm();
    rec.elapsed_seconds = seconds_since(start);
    rep.trace.push_back(rec);

    prev_support = s;
    x = std::move(x_next);
    objective = objective_next;
    grad = std::move(*grad_next);

    if (!std::isfinite(objective) || !grad.allFinite()) {
      rep.status = SolveStatus::NumericFailure;
      ++k;
      break;
    }
    if (empty_streak >= 3) {
      rep.warnings.emplace_back("iterate stayed at the origin; lambda likely exceeds the origin-excluding bound");
      rep.status = SolveStatus::StationaryStop;
      ++k;
      break;
    }
  }

  rep.iterations = k;
  rep.x_final = x;
  rep.support = support_of(x);
  rep.objective = objective;
  rep.f_value = p.value(x);
  rep.alpha_last = alpha_last;
  if (rep.status != SolveStatus::NumericFailure) {
    rep.stationarity_residual = stationarity_residual(p, x, alpha_last, lambda, q);
  }
  if (rep.status == SolveStatus::StationaryStop && rep.support.empty()) {
    rep.warnings.emplace_back("solution is the origin");
  }
  rep.total_seconds = seconds_since(start);
  return rep;
}

}  // namespace

SolveReport psnp(const Problem& problem, const SolveOptions& opts) {
  return run(problem, opts, opts.newton_mode != NewtonMode::Off);
}

SolveReport prox_grad(const Problem& problem, const SolveOptions& opts) { return run(problem, opts, false); }

double stationarity_residual(const Problem& problem, const Eigen::VectorXd& x, double alpha, double lambda,
                             double q) {
  const Eigen::VectorXd a = x - alpha * problem.gradient(x);
  const ProxSpec spec{alpha * lambda, q, TieRule::PreferNonzero};
  double out = 0.0;
  for (Index i = 0; i < x.size(); ++i) out = std::max(out, prox_scalar_set(a[i], spec).distance(x[i]));
  return out;
}

SecondOrderDiagnostic second_order_check(const Problem& problem, const Eigen::VectorXd& x, double lambda, double q,
                                         double alpha) {
  const Support s = support_of(x);
  if (s.empty()) throw std::invalid_argument("second_order_check: x must be nonzero");
  const Eigen::MatrixXd h =
      problem.restricted_hessian(x, s, std::numeric_limits<Index>::max()).op.materialize();
  Eigen::MatrixXd m = h;
  if (q > 0.0) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      m(static_cast<Index>(i), static_cast<Index>(i)) +=
          lambda * q * (q - 1.0) * std::pow(std::abs(x[s[i]]), q - 2.0);
    }
  }
  SecondOrderDiagnostic out;
  out.min_eig_H = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  out.min_eig_M = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  out.sufficient_holds = out.min_eig_M > 0.0;
  out.corollary1_holds = out.min_eig_H > q / (2.0 * alpha);
  return out;
}

}  // namespace lqsp
