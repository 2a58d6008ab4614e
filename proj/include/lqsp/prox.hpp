#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <stdexcept>

namespace lqsp {

/// Selection rule when the scalar prox is two-valued (|a| exactly at kappa).
enum class TieRule { PreferZero, PreferNonzero };

/// Parameters of Prox_{weight*|.|^q}. `weight` is the composed step*lambda.
struct ProxSpec {
  double weight = 1.0;
  double q = 0.0;
  TieRule tie_rule = TieRule::PreferZero;

  /// Throws std::invalid_argument unless weight > 0 and 0 <= q < 1.
  void validate() const;
};

/// c: smallest magnitude a nonzero prox output can have.
/// kappa: threshold on |a| below which the prox is {0}.
struct ProxConstants {
  double c = 0.0;
  double kappa = 0.0;
};

/// Raised when the root finder for the nonzero branch fails to converge.
class ProxNumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProxConstants prox_constants(const ProxSpec& spec);

/// One element of argmin_z 0.5*(z-a)^2 + weight*|z|^q, chosen by spec.tie_rule.
double prox_scalar(double a, const ProxSpec& spec);
double prox_scalar(double a, const ProxSpec& spec, const ProxConstants& constants);

/// The full prox set: one element, or two ({0, sgn(a)*c}) at an exact tie.
struct ProxSet {
  std::array<double, 2> values{0.0, 0.0};
  std::size_t size = 1;

  /// Distance from z to the nearest element of the set.
  double distance(double z) const;
};

ProxSet prox_scalar_set(double a, const ProxSpec& spec);

/// Elementwise prox (OpenMP-parallel over entries).
Eigen::VectorXd prox_vector(const Eigen::VectorXd& x, const ProxSpec& spec);

/// Serial reference for prox_vector.
Eigen::VectorXd prox_vector_serial(const Eigen::VectorXd& x, const ProxSpec& spec);

/// lambda_bar = alpha^{1-q}/2 * ||grad0||_inf^{2-q}. For lambda below this
/// value the origin is not a P-stationary point for step alpha.
/// Throws std::invalid_argument if grad0 == 0 or alpha <= 0.
double lambda_upper_bound(const Eigen::VectorXd& grad0, double alpha, double q);

}  // namespace lqsp
