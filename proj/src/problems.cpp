#include "lqsp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace lqsp {

namespace {

double softplus(double t) { return std::log1p(std::exp(-std::abs(t))) + std::max(t, 0.0); }

double logistic_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void require_nonzero_on(const Eigen::VectorXd& w, const Support& s, const char* what) {
  for (Index i : s) {
    if (w[i] == 0.0) {
      throw std::invalid_argument(std::string(what) + ": zero entry at index " + std::to_string(i) +
                                  " inside the support");
    }
  }
}

void require_valid_support(const Support& s, Index n, const char* what) {
  if (s.empty()) throw std::invalid_argument(std::string(what) + ": empty support");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= n || (i > 0 && s[i] <= s[i - 1])) {
      throw std::invalid_argument(std::string(what) + ": support must be sorted, unique and in range");
    }
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LeastSquares: return "least_squares";
    case ModelKind::LogisticL2: return "logistic";
    case ModelKind::SquaredHingeSvm: return "svm";
  }
  return "unknown";
}

double lq_penalty(const Eigen::VectorXd& x, double q) {
  double s = 0.0;
  if (q == 0.0) {
    for (Index i = 0; i < x.size(); ++i) s += x[i] != 0.0 ? 1.0 : 0.0;
    return s;
  }
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) s += std::pow(std::abs(x[i]), q);
  }
  return s;
}

Problem::Problem(ModelKind kind, DataMatrix data, Eigen::VectorXd response, double ridge)
    : kind_(kind), data_(std::move(data)), response_(std::move(response)), ridge_(ridge) {
  if (response_.size() != data_.rows()) {
    throw std::invalid_argument("Problem: response length " + std::to_string(response_.size()) +
                                " does not match " + std::to_string(data_.rows()) + " rows");
  }
  if (data_.cols() == 0 || data_.rows() == 0) throw std::invalid_argument("Problem: empty data matrix");
  if (!response_.allFinite()) throw std::invalid_argument("Problem: response must be finite");
  switch (kind_) {
    case ModelKind::LeastSquares:
      if (ridge_ != 0.0) throw std::invalid_argument("Problem: least squares takes no ridge term");
      break;
    case ModelKind::LogisticL2:
      if (!(ridge_ > 0.0)) throw std::invalid_argument("Problem: logistic model needs mu > 0");
      for (Index i = 0; i < response_.size(); ++i) {
        if (response_[i] != 0.0 && response_[i] != 1.0) {
          throw std::invalid_argument("Problem: logistic labels must be 0 or 1");
        }
      }
      break;
    case ModelKind::SquaredHingeSvm:
      if (!(ridge_ > 0.0)) throw std::invalid_argument("Problem: SVM model needs mu > 0");
      for (Index i = 0; i < response_.size(); ++i) {
        if (response_[i] != -1.0 && response_[i] != 1.0) {
          throw std::invalid_argument("Problem: SVM labels must be -1 or +1");
        }
      }
      break;
  }
}

Problem Problem::least_squares(DataMatrix a, Eigen::VectorXd b) {
  return Problem(ModelKind::LeastSquares, std::move(a), std::move(b), 0.0);
}

Problem Problem::logistic(DataMatrix samples, Eigen::VectorXd labels01, double mu) {
  return Problem(ModelKind::LogisticL2, std::move(samples), std::move(labels01), mu);
}

Problem Problem::squared_hinge_svm(DataMatrix samples, Eigen::VectorXd labels_pm1, double mu) {
  return Problem(ModelKind::SquaredHingeSvm, std::move(samples), std::move(labels_pm1), mu);
}

void Problem::check_dim(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("Problem: expected a vector of length " + std::to_string(dim()) + ", got " +
                                std::to_string(x.size()));
  }
}

double Problem::value(const Eigen::VectorXd& x) const {
  check_dim(x);
  const Eigen::VectorXd t = data_.multiply(x);
  const double m = static_cast<double>(samples());
  switch (kind_) {
    case ModelKind::LeastSquares:
      return 0.5 * (t - response_).squaredNorm();
    case ModelKind::LogisticL2: {
      double s = 0.0;
      for (Index i = 0; i < t.size(); ++i) s += softplus(t[i]) - response_[i] * t[i];
      return s / m + 0.5 * ridge_ * x.squaredNorm();
    }
    case ModelKind::SquaredHingeSvm: {
      double s = 0.0;
      for (Index i = 0; i < t.size(); ++i) {
        const double slack = std::max(1.0 - response_[i] * t[i], 0.0);
        s += slack * slack;
      }
      return s / (2.0 * m) + 0.5 * ridge_ * x.squaredNorm();
    }
  }
  return 0.0;
}

Eigen::VectorXd Problem::gradient(const Eigen::VectorXd& x) const {
  check_dim(x);
  const Eigen::VectorXd t = data_.multiply(x);
  const double m = static_cast<double>(samples());
  Eigen::VectorXd r(t.size());
  switch (kind_) {
    case ModelKind::LeastSquares:
      return data_.multiply_transpose(t - response_);
    case ModelKind::LogisticL2:
      for (Index i = 0; i < t.size(); ++i) r[i] = (logistic_sigmoid(t[i]) - response_[i]) / m;
      break;
    case ModelKind::SquaredHingeSvm:
      for (Index i = 0; i < t.size(); ++i) {
        const double slack = 1.0 - response_[i] * t[i];
        r[i] = slack > 0.0 ? -slack * response_[i] / m : 0.0;
      }
      break;
  }
  Eigen::VectorXd g = data_.multiply_transpose(r);
  g += ridge_ * x;
  return g;
}

Eigen::VectorXd Problem::hessian_weights(const Eigen::VectorXd& x) const {
  if (kind_ == ModelKind::LeastSquares) return Eigen::VectorXd();
  const Eigen::VectorXd t = data_.multiply(x);
  const double m = static_cast<double>(samples());
  Eigen::VectorXd w(t.size());
  for (Index i = 0; i < t.size(); ++i) {
    if (kind_ == ModelKind::LogisticL2) {
      const double s = logistic_sigmoid(t[i]);
      w[i] = s * (1.0 - s) / m;
    } else {
      w[i] = 1.0 - response_[i] * t[i] > 0.0 ? 1.0 / m : 0.0;
    }
  }
  return w;
}

RestrictedHessian Problem::restricted_hessian(const Eigen::VectorXd& x, const Support& s,
                                              Index dense_threshold) const {
  check_dim(x);
  require_valid_support(s, dim(), "restricted_hessian");
  const Eigen::VectorXd weights = hessian_weights(x);
  auto block = std::make_shared<const ColumnBlock>(data_.columns(s));
  const Index k = static_cast<Index>(s.size());
  const double ridge = ridge_;
  if (k <= dense_threshold) {
    Eigen::MatrixXd g = block->weighted_gram(weights);
    if (ridge != 0.0) g.diagonal().array() += ridge;
    return {s, SymmetricOperator::from_matrix(std::move(g))};
  }
  auto action = [block, weights, ridge](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd t = block->multiply(v);
    if (weights.size() != 0) t.array() *= weights.array();
    Eigen::VectorXd out = block->multiply_transpose(t);
    if (ridge != 0.0) out += ridge * v;
    return out;
  };
  return {s, SymmetricOperator::from_action(k, std::move(action))};
}

double Problem::penalized_value(const Eigen::VectorXd& x, double lambda, double q) const {
  return value(x) + lambda * lq_penalty(x, q);
}

Eigen::VectorXd Problem::restricted_penalized_gradient(const Eigen::VectorXd& w, const Eigen::VectorXd& grad_f,
                                                       const Support& s, double lambda, double q) {
  require_nonzero_on(w, s, "restricted_penalized_gradient");
  Eigen::VectorXd g = restrict_to(grad_f, s);
  if (q == 0.0) return g;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double wi = w[s[i]];
    const double sign = wi < 0.0 ? -1.0 : 1.0;
    g[static_cast<Index>(i)] += lambda * q * sign * std::pow(std::abs(wi), q - 1.0);
  }
  return g;
}

Eigen::VectorXd Problem::restricted_penalized_gradient(const Eigen::VectorXd& w, const Support& s, double lambda,
                                                       double q) const {
  check_dim(w);
  require_nonzero_on(w, s, "restricted_penalized_gradient");
  return restricted_penalized_gradient(w, gradient(w), s, lambda, q);
}

RestrictedHessian Problem::newton_matrix(const Eigen::VectorXd& w, const Support& s, double lambda, double q,
                                         Index dense_threshold) const {
  require_nonzero_on(w, s, "newton_matrix");
  RestrictedHessian h = restricted_hessian(w, s, dense_threshold);
  if (q == 0.0) return h;
  Eigen::VectorXd d(static_cast<Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    d[static_cast<Index>(i)] = lambda * q * (q - 1.0) * std::pow(std::abs(w[s[i]]), q - 2.0);
  }
  return {h.support, h.op.plus_diagonal(d)};
}

}  // namespace lqsp
