#include "lqsp/experiment.hpp"

#include "lqsp/random.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lqsp {

namespace {

Eigen::VectorXd sparse_truth(PortableRng& rng, Index n, Index s) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < s; ++i) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    x[perm[static_cast<std::size_t>(i)]] = sign * rng.uniform(0.5, 1.5);
  }
  return x;
}

Eigen::MatrixXd gaussian_matrix(PortableRng& rng, Index m, Index n) {
  Eigen::MatrixXd a(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) a(i, j) = rng.gaussian();
  }
  return a;
}

void check_sizes(Index m, Index n, Index s) {
  if (m < 1 || n < 1) throw std::invalid_argument("generator: m and n must be positive");
  if (s <= 0 || s > n) throw std::invalid_argument("generator: need 0 < s <= n");
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

CsInstance gen_cs(Index m, Index n, Index s, double nf, std::uint64_t seed, double density) {
  check_sizes(m, n, s);
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("gen_cs: density must lie in (0,1]");
  if (!(nf >= 0.0)) throw std::invalid_argument("gen_cs: nf must be nonnegative");

  PortableRng rng(seed);
  CsInstance inst;
  inst.s = s;
  inst.nf = nf;
  inst.seed = seed;
  inst.density = density;

  if (density == 1.0) {
    Eigen::MatrixXd a = gaussian_matrix(rng, m, n);
    for (Index j = 0; j < n; ++j) a.col(j) /= a.col(j).norm();
    inst.A = DataMatrix(std::move(a));
  } else {
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<std::pair<int, double>> col;
    for (Index j = 0; j < n; ++j) {
      do {
        col.clear();
        for (Index i = 0; i < m; ++i) {
          if (rng.uniform() < density) col.emplace_back(static_cast<int>(i), rng.gaussian());
        }
      } while (col.empty());
      double norm = 0.0;
      for (const auto& [i, v] : col) norm += v * v;
      norm = std::sqrt(norm);
      for (const auto& [i, v] : col) trip.emplace_back(i, static_cast<int>(j), v / norm);
    }
    Eigen::SparseMatrix<double> a(m, n);
    a.setFromTriplets(trip.begin(), trip.end());
    inst.A = DataMatrix(a);
  }

  inst.x_true = sparse_truth(rng, n, s);
  inst.b = inst.A.multiply(inst.x_true);
  if (nf > 0.0) {
    for (Index i = 0; i < m; ++i) inst.b[i] += nf * rng.gaussian();
  }
  return inst;
}

ClassificationInstance gen_logistic(Index m, Index n, Index s, std::uint64_t seed) {
  check_sizes(m, n, s);
  PortableRng rng(seed);
  const Eigen::MatrixXd a = gaussian_matrix(rng, m, n);
  ClassificationInstance out;
  out.x_true = sparse_truth(rng, n, s);
  const Eigen::VectorXd t = a * out.x_true;
  out.table.labels.resize(m);
  for (Index i = 0; i < m; ++i) out.table.labels[i] = rng.uniform() < sigmoid(t[i]) ? 1.0 : -1.0;
  out.table.samples = a.sparseView();
  return out;
}

ClassificationInstance gen_svm(Index m, Index n, Index s, std::uint64_t seed) {
  check_sizes(m, n, s);
  PortableRng rng(seed);
  ClassificationInstance out;
  out.x_true = sparse_truth(rng, n, s);
  out.table.labels.resize(m);
  for (Index i = 0; i < m; ++i) out.table.labels[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  Eigen::MatrixXd a = gaussian_matrix(rng, m, n);
  for (Index j = 0; j < n; ++j) {
    if (out.x_true[j] != 0.0) a.col(j) += out.x_true[j] * out.table.labels;
  }
  out.table.samples = a.sparseView();
  out.table = scale_features(out.table);
  return out;
}

double cs_lambda_multiplier(double q) {
  if (q == 0.0) return 0.02;
  if (std::abs(q - 0.5) < 1e-12) return 0.03;
  if (std::abs(q - 2.0 / 3.0) < 1e-12) return 0.04;
  throw std::invalid_argument("lambda_rule_cs: no default multiplier for q = " + std::to_string(q) +
                              "; pass one explicitly");
}

double lambda_rule_cs(const DataMatrix& a, const Eigen::VectorXd& b, double q, std::optional<double> multiplier) {
  if (b.size() != a.rows()) throw std::invalid_argument("lambda_rule_cs: b has the wrong length");
  const double scale = a.multiply_transpose(b).lpNorm<Eigen::Infinity>();
  if (scale == 0.0) throw std::invalid_argument("lambda_rule_cs: A^T b is zero");
  const double mult = multiplier ? *multiplier : cs_lambda_multiplier(q);
  if (!(mult > 0.0)) throw std::invalid_argument("lambda_rule_cs: multiplier must be positive");
  return mult * scale;
}

SvmRegularization lambda_rule_svm(const DatasetTable& table) {
  const double m = static_cast<double>(table.rows());
  const double n = static_cast<double>(table.cols());
  const Eigen::VectorXd ay = table.samples.transpose() * table.labels;
  const double lambda = 0.0003 * std::log2(n / m) / m * ay.lpNorm<Eigen::Infinity>();
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("lambda_rule_svm: rule gives lambda <= 0 (needs n > m and nonzero data); "
                                "set lambda by hand");
  }
  return {lambda, lambda};
}

double svm_grad_tol(Index m, Index n) {
  return std::log2(static_cast<double>(m) * static_cast<double>(n)) * 1e-5;
}

double relative_error(const Eigen::VectorXd& x, const Eigen::VectorXd& x_true) {
  const double denom = x_true.norm();
  if (denom == 0.0) throw std::invalid_argument("relative_error: x_true is zero");
  return (x - x_true).norm() / denom;
}

double classification_accuracy(const DataMatrix& samples, const Eigen::VectorXd& labels_pm1,
                               const Eigen::VectorXd& x) {
  if (labels_pm1.size() != samples.rows() || x.size() != samples.cols()) {
    throw std::invalid_argument("classification_accuracy: shape mismatch");
  }
  const Eigen::VectorXd t = samples.multiply(x);
  Index correct = 0;
  for (Index i = 0; i < t.size(); ++i) {
    if (labels_pm1[i] * t[i] > 0.0) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(t.size());
}

namespace {

MetricRow base_row(const std::string& algo, double q, const SolveReport& report) {
  MetricRow row;
  row.algo = algo;
  row.q = q;
  row.f_value = report.f_value;
  row.support_size = static_cast<Index>(report.support.size());
  row.time_seconds = report.total_seconds;
  row.iterations = report.iterations;
  row.status = std::string(to_string(report.status));
  return row;
}

}  // namespace

MetricRow metrics(const std::string& algo, double q, const SolveReport& report, const CsInstance& instance) {
  MetricRow row = base_row(algo, q, report);
  row.re_err = relative_error(report.x_final, instance.x_true);
  return row;
}

MetricRow metrics(const std::string& algo, double q, const SolveReport& report, const DatasetTable& table) {
  MetricRow row = base_row(algo, q, report);
  row.acc = classification_accuracy(DataMatrix(table.samples), table.labels, report.x_final);
  return row;
}

}  // namespace lqsp
