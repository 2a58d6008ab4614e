#include "lqsp/linear_ops.hpp"

#include "lqsp/kernels.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace lqsp {

namespace {

kernels::DenseView view_of(const Eigen::MatrixXd& m) { return {m.data(), m.rows(), m.cols()}; }

template <int Options>
kernels::CompressedView view_of(const Eigen::SparseMatrix<double, Options>& m) {
  return {m.valuePtr(), m.innerIndexPtr(), m.outerIndexPtr(), m.outerSize(), m.innerSize()};
}

std::span<const double> span_of(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> span_of(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> span_of(Eigen::MatrixXd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

}  // namespace

Support support_of(const Eigen::VectorXd& x) {
  Support s;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) s.push_back(i);
  }
  return s;
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& x, const Support& s) {
  Eigen::VectorXd out(static_cast<Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) out[static_cast<Index>(i)] = x[s[i]];
  return out;
}

Eigen::VectorXd scatter(const Eigen::VectorXd& v, const Support& s, Index n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < s.size(); ++i) out[s[i]] = v[static_cast<Index>(i)];
  return out;
}

// ---------------------------------------------------------------------------
// ColumnBlock

ColumnBlock::ColumnBlock(Eigen::MatrixXd dense) : dense_(std::move(dense)) {}

ColumnBlock::ColumnBlock(Eigen::SparseMatrix<double> sparse) : sparse_(std::move(sparse)) {
  sparse_->makeCompressed();
}

Index ColumnBlock::rows() const { return sparse_ ? sparse_->rows() : dense_.rows(); }
Index ColumnBlock::cols() const { return sparse_ ? sparse_->cols() : dense_.cols(); }

Eigen::VectorXd ColumnBlock::multiply(const Eigen::VectorXd& v) const {
  if (v.size() != cols()) throw std::invalid_argument("ColumnBlock::multiply: dimension mismatch");
  Eigen::VectorXd y(rows());
  if (sparse_) {
    kernels::serial::csc_gemv(view_of(*sparse_), span_of(v), span_of(y));
  } else {
    kernels::parallel::gemv(view_of(dense_), span_of(v), span_of(y));
  }
  return y;
}

Eigen::VectorXd ColumnBlock::multiply_transpose(const Eigen::VectorXd& r) const {
  if (r.size() != rows()) throw std::invalid_argument("ColumnBlock::multiply_transpose: dimension mismatch");
  Eigen::VectorXd y(cols());
  if (sparse_) {
    kernels::parallel::csc_gemv_t(view_of(*sparse_), span_of(r), span_of(y));
  } else {
    kernels::parallel::gemv_t(view_of(dense_), span_of(r), span_of(y));
  }
  return y;
}

Eigen::MatrixXd ColumnBlock::weighted_gram(const Eigen::VectorXd& w) const {
  if (w.size() != 0 && w.size() != rows()) {
    throw std::invalid_argument("ColumnBlock::weighted_gram: weight length mismatch");
  }
  Eigen::MatrixXd g(cols(), cols());
  if (sparse_) {
    kernels::parallel::csc_weighted_gram(view_of(*sparse_), span_of(w), span_of(g));
  } else {
    kernels::parallel::weighted_gram(view_of(dense_), span_of(w), span_of(g));
  }
  return g;
}

// ---------------------------------------------------------------------------
// DataMatrix

struct DataMatrix::Storage {
  Eigen::MatrixXd dense;
  Eigen::SparseMatrix<double, Eigen::ColMajor> csc;
  Eigen::SparseMatrix<double, Eigen::RowMajor> csr;
  bool sparse = false;
};

DataMatrix::DataMatrix() : storage_(std::make_shared<Storage>()) {}

DataMatrix::DataMatrix(Eigen::MatrixXd dense) {
  auto s = std::make_shared<Storage>();
  s->dense = std::move(dense);
  storage_ = std::move(s);
}

DataMatrix::DataMatrix(const Eigen::SparseMatrix<double>& sparse) {
  auto s = std::make_shared<Storage>();
  s->csc = sparse;
  s->csc.prune(0.0);
  s->csc.makeCompressed();
  s->csr = s->csc;
  s->csr.makeCompressed();
  s->sparse = true;
  storage_ = std::move(s);
}

Index DataMatrix::rows() const { return storage_->sparse ? storage_->csc.rows() : storage_->dense.rows(); }
Index DataMatrix::cols() const { return storage_->sparse ? storage_->csc.cols() : storage_->dense.cols(); }
bool DataMatrix::is_sparse() const { return storage_->sparse; }

const Eigen::MatrixXd& DataMatrix::dense() const {
  if (storage_->sparse) throw std::logic_error("DataMatrix::dense: matrix is sparse");
  return storage_->dense;
}

const Eigen::SparseMatrix<double>& DataMatrix::sparse() const {
  if (!storage_->sparse) throw std::logic_error("DataMatrix::sparse: matrix is dense");
  return storage_->csc;
}

Eigen::VectorXd DataMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != cols()) throw std::invalid_argument("DataMatrix::multiply: dimension mismatch");
  Eigen::VectorXd y(rows());
  if (storage_->sparse) {
    kernels::parallel::csr_gemv(view_of(storage_->csr), span_of(x), span_of(y));
  } else {
    kernels::parallel::gemv(view_of(storage_->dense), span_of(x), span_of(y));
  }
  return y;
}

Eigen::VectorXd DataMatrix::multiply_transpose(const Eigen::VectorXd& r) const {
  if (r.size() != rows()) throw std::invalid_argument("DataMatrix::multiply_transpose: dimension mismatch");
  Eigen::VectorXd y(cols());
  if (storage_->sparse) {
    kernels::parallel::csc_gemv_t(view_of(storage_->csc), span_of(r), span_of(y));
  } else {
    kernels::parallel::gemv_t(view_of(storage_->dense), span_of(r), span_of(y));
  }
  return y;
}

Eigen::VectorXd DataMatrix::multiply_serial(const Eigen::VectorXd& x) const {
  if (x.size() != cols()) throw std::invalid_argument("DataMatrix::multiply: dimension mismatch");
  Eigen::VectorXd y(rows());
  if (storage_->sparse) {
    kernels::serial::csr_gemv(view_of(storage_->csr), span_of(x), span_of(y));
  } else {
    kernels::serial::gemv(view_of(storage_->dense), span_of(x), span_of(y));
  }
  return y;
}

Eigen::VectorXd DataMatrix::multiply_transpose_serial(const Eigen::VectorXd& r) const {
  if (r.size() != rows()) throw std::invalid_argument("DataMatrix::multiply_transpose: dimension mismatch");
  Eigen::VectorXd y(cols());
  if (storage_->sparse) {
    kernels::serial::csc_gemv_t(view_of(storage_->csc), span_of(r), span_of(y));
  } else {
    kernels::serial::gemv_t(view_of(storage_->dense), span_of(r), span_of(y));
  }
  return y;
}

ColumnBlock DataMatrix::columns(const Support& s) const {
  const Index k = static_cast<Index>(s.size());
  for (Index j : s) {
    if (j < 0 || j >= cols()) throw std::out_of_range("DataMatrix::columns: index out of range");
  }
  if (!storage_->sparse) {
    Eigen::MatrixXd block(rows(), k);
    for (Index c = 0; c < k; ++c) block.col(c) = storage_->dense.col(s[static_cast<std::size_t>(c)]);
    return ColumnBlock(std::move(block));
  }
  const auto& a = storage_->csc;
  Eigen::SparseMatrix<double> block(rows(), k);
  Index nnz = 0;
  for (Index j : s) nnz += a.outerIndexPtr()[j + 1] - a.outerIndexPtr()[j];
  block.reserve(nnz);
  for (Index c = 0; c < k; ++c) {
    block.startVec(c);
    const Index j = s[static_cast<std::size_t>(c)];
    for (int t = a.outerIndexPtr()[j]; t < a.outerIndexPtr()[j + 1]; ++t) {
      block.insertBack(a.innerIndexPtr()[t], c) = a.valuePtr()[t];
    }
  }
  block.finalize();
  return ColumnBlock(std::move(block));
}

Eigen::MatrixXd DataMatrix::to_dense() const {
  if (storage_->sparse) return Eigen::MatrixXd(storage_->csc);
  return storage_->dense;
}

// ---------------------------------------------------------------------------
// SymmetricOperator

SymmetricOperator SymmetricOperator::from_matrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymmetricOperator: matrix must be square");
  SymmetricOperator op;
  op.dim_ = m.rows();
  op.matrix_ = std::make_shared<const Eigen::MatrixXd>(std::move(m));
  return op;
}

SymmetricOperator SymmetricOperator::from_action(Index dim, Action action) {
  SymmetricOperator op;
  op.dim_ = dim;
  op.action_ = std::move(action);
  return op;
}

const Eigen::MatrixXd& SymmetricOperator::matrix() const {
  if (!matrix_) throw std::logic_error("SymmetricOperator: no stored matrix");
  return *matrix_;
}

Eigen::VectorXd SymmetricOperator::apply(const Eigen::VectorXd& v) const {
  if (v.size() != dim_) throw std::invalid_argument("SymmetricOperator::apply: dimension mismatch");
  if (matrix_) return (*matrix_) * v;
  return action_(v);
}

Eigen::MatrixXd SymmetricOperator::materialize() const {
  if (matrix_) return *matrix_;
  Eigen::MatrixXd m(dim_, dim_);
  for (Index j = 0; j < dim_; ++j) m.col(j) = action_(Eigen::VectorXd::Unit(dim_, j));
  return m;
}

SymmetricOperator SymmetricOperator::plus_diagonal(const Eigen::VectorXd& d) const {
  if (d.size() != dim_) throw std::invalid_argument("SymmetricOperator::plus_diagonal: dimension mismatch");
  if (matrix_) {
    Eigen::MatrixXd m = *matrix_;
    m.diagonal() += d;
    return from_matrix(std::move(m));
  }
  Action base = action_;
  return from_action(dim_, [base, d](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd out = base(v);
    out.array() += d.array() * v.array();
    return out;
  });
}

// ---------------------------------------------------------------------------
// Solves

LinearSolveResult solve_direct(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  if (m.rows() != m.cols() || m.rows() != rhs.size()) {
    throw std::invalid_argument("solve_direct: dimension mismatch");
  }
  LinearSolveResult out;
  const Index n = m.rows();
  if (n == 0) {
    out.solution = Eigen::VectorXd(0);
    return out;
  }
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (norm == 0.0) {
    out.status = LinearSolveStatus::Singular;
    return out;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= 1e-12 * norm)) {
    out.status = LinearSolveStatus::Singular;
    return out;
  }
  out.solution = lu.solve(rhs);
  out.residual_norm = (m * out.solution - rhs).norm();
  if (!(out.residual_norm <= 1e-10 * (1.0 + rhs.norm()))) out.status = LinearSolveStatus::Singular;
  return out;
}

LinearSolveResult solve_cg(const SymmetricOperator& op, const Eigen::VectorXd& rhs, double tol, int maxit) {
  if (rhs.size() != op.dim()) throw std::invalid_argument("solve_cg: dimension mismatch");
  if (maxit < 0) maxit = static_cast<int>(10 * op.dim());
  LinearSolveResult out;
  const Index n = op.dim();
  out.solution = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return out;

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < maxit; ++it) {
    const Eigen::VectorXd mp = op.apply(p);
    const double curvature = p.dot(mp);
    if (!(curvature > 0.0)) {
      out.status = LinearSolveStatus::NonPositiveCurvature;
      out.iterations = it;
      out.residual_norm = std::sqrt(rr);
      return out;
    }
    const double step = rr / curvature;
    out.solution += step * p;
    r -= step * mp;
    const double rr_next = r.squaredNorm();
    out.iterations = it + 1;
    if (std::sqrt(rr_next) <= tol * rhs_norm) {
      out.residual_norm = std::sqrt(rr_next);
      return out;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  out.status = LinearSolveStatus::NoConvergence;
  out.residual_norm = std::sqrt(rr);
  return out;
}

}  // namespace lqsp
