#include "lqsp/prox.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

namespace lqsp {

namespace {

constexpr int kRootMaxIterations = 100;

// Unique root z >= c of psi(z) = z - abs_a + weight*q*z^{q-1}, for abs_a > kappa
// and q in (0,1). psi is convex and increasing on [c, inf) with psi(c) < 0 <
// psi(abs_a), so Newton started at abs_a descends monotonically; the bracket
// only guards against rounding.
double nonzero_branch_root(double abs_a, const ProxSpec& spec, double c) {
  const double wq = spec.weight * spec.q;
  const double tol = 1e-12 * std::max(1.0, abs_a);
  double lo = c;
  double hi = abs_a;
  double z = abs_a;
  for (int it = 0; it < kRootMaxIterations; ++it) {
    const double psi = z - abs_a + wq * std::pow(z, spec.q - 1.0);
    if (std::abs(psi) <= tol) return z;
    if (psi > 0.0) {
      hi = z;
    } else {
      lo = z;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return z;
    const double dpsi = 1.0 + wq * (spec.q - 1.0) * std::pow(z, spec.q - 2.0);
    double next = z - psi / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    z = next;
  }
  throw ProxNumericsError("prox root finder did not converge for |a|=" + std::to_string(abs_a) +
                          ", weight=" + std::to_string(spec.weight) + ", q=" + std::to_string(spec.q));
}

}  // namespace

void ProxSpec::validate() const {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("ProxSpec: weight must be positive and finite");
  }
  if (!(q >= 0.0 && q < 1.0)) {
    throw std::invalid_argument("ProxSpec: q must lie in [0,1)");
  }
}

ProxConstants prox_constants(const ProxSpec& spec) {
  spec.validate();
  const double q = spec.q;
  ProxConstants out;
  out.c = std::pow(2.0 * spec.weight * (1.0 - q), 1.0 / (2.0 - q));
  // kappa is where phi(0) = phi(c) and c is stationary: kappa = c + weight*q*c^{q-1}.
  out.kappa = out.c * (2.0 - q) / (2.0 * (1.0 - q));
  return out;
}

double prox_scalar(double a, const ProxSpec& spec, const ProxConstants& constants) {
  if (!std::isfinite(a)) throw std::invalid_argument("prox_scalar: input must be finite");
  const double abs_a = std::abs(a);
  if (abs_a < constants.kappa) return 0.0;
  const double sign = a < 0.0 ? -1.0 : 1.0;
  if (abs_a == constants.kappa) {
    if (spec.tie_rule == TieRule::PreferZero) return 0.0;
    return sign * constants.c;
  }
  if (spec.q == 0.0) return a;
  return sign * nonzero_branch_root(abs_a, spec, constants.c);
}

double prox_scalar(double a, const ProxSpec& spec) {
  return prox_scalar(a, spec, prox_constants(spec));
}

double ProxSet::distance(double z) const {
  double best = std::abs(z - values[0]);
  for (std::size_t i = 1; i < size; ++i) best = std::min(best, std::abs(z - values[i]));
  return best;
}

ProxSet prox_scalar_set(double a, const ProxSpec& spec) {
  const ProxConstants constants = prox_constants(spec);
  ProxSet set;
  if (std::abs(a) == constants.kappa) {
    set.values = {0.0, (a < 0.0 ? -1.0 : 1.0) * constants.c};
    set.size = 2;
    return set;
  }
  set.values[0] = prox_scalar(a, spec, constants);
  return set;
}

Eigen::VectorXd prox_vector_serial(const Eigen::VectorXd& x, const ProxSpec& spec) {
  const ProxConstants constants = prox_constants(spec);
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = prox_scalar(x[i], spec, constants);
  return out;
}

Eigen::VectorXd prox_vector(const Eigen::VectorXd& x, const ProxSpec& spec) {
  const ProxConstants constants = prox_constants(spec);
  const Eigen::Index n = x.size();
  Eigen::VectorXd out(n);
  std::atomic<bool> failed{false};
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      out[i] = prox_scalar(x[i], spec, constants);
    } catch (...) {
#pragma omp critical(lqsp_prox_error)
      {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double lambda_upper_bound(const Eigen::VectorXd& grad0, double alpha, double q) {
  if (!(alpha > 0.0)) throw std::invalid_argument("lambda_upper_bound: alpha must be positive");
  const double g = grad0.size() == 0 ? 0.0 : grad0.lpNorm<Eigen::Infinity>();
  if (g == 0.0) {
    throw std::invalid_argument("lambda_upper_bound: gradient at the origin is zero (degenerate problem)");
  }
  return 0.5 * std::pow(alpha, 1.0 - q) * std::pow(g, 2.0 - q);
}

}  // namespace lqsp
