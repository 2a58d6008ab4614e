#pragma once

// Data-parallel inner loops used by the solvers.
//
// Every kernel exists twice: `serial` is the reference used in tests, and
// `parallel` is the OpenMP version used by the library. Both accumulate each
// output entry in the same order, so they agree bitwise for any thread count.

#include <cstddef>
#include <span>

namespace lqsp::kernels {

/// Column-major dense matrix view.
struct DenseView {
  const double* data = nullptr;
  std::ptrdiff_t rows = 0;
  std::ptrdiff_t cols = 0;

  const double* column(std::ptrdiff_t j) const { return data + j * rows; }
};

/// Compressed sparse storage (CSR when outer = rows, CSC when outer = columns).
struct CompressedView {
  const double* values = nullptr;
  const int* inner = nullptr;
  const int* outer = nullptr;  // outer_size + 1 offsets
  std::ptrdiff_t outer_size = 0;
  std::ptrdiff_t inner_size = 0;
};

namespace serial {

/// y = A x. Columns with x_j == 0 are skipped.
void gemv(DenseView a, std::span<const double> x, std::span<double> y);
/// y = A^T r.
void gemv_t(DenseView a, std::span<const double> r, std::span<double> y);
/// y = A x with A in CSR form.
void csr_gemv(CompressedView a, std::span<const double> x, std::span<double> y);
/// y = A^T r with A in CSC form.
void csc_gemv_t(CompressedView a, std::span<const double> r, std::span<double> y);
/// y = A x with A in CSC form (scatter; serial only).
void csc_gemv(CompressedView a, std::span<const double> x, std::span<double> y);
/// out = B^T diag(w) B for a dense m-by-k block B; empty w means w = 1.
/// `out` is k-by-k column-major.
void weighted_gram(DenseView b, std::span<const double> w, std::span<double> out);
/// Same for a CSC block.
void csc_weighted_gram(CompressedView b, std::span<const double> w, std::span<double> out);

}  // namespace serial

namespace parallel {

void gemv(DenseView a, std::span<const double> x, std::span<double> y);
void gemv_t(DenseView a, std::span<const double> r, std::span<double> y);
void csr_gemv(CompressedView a, std::span<const double> x, std::span<double> y);
void csc_gemv_t(CompressedView a, std::span<const double> r, std::span<double> y);
void weighted_gram(DenseView b, std::span<const double> w, std::span<double> out);
void csc_weighted_gram(CompressedView b, std::span<const double> w, std::span<double> out);

}  // namespace parallel

namespace detail {

inline double dot(const double* a, const double* b, std::ptrdiff_t n) {
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double weighted_dot(const double* a, const double* b, const double* w, std::ptrdiff_t n) {
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) s += a[i] * w[i] * b[i];
  return s;
}

// sum_k values[k] * r[inner[k]] over one compressed outer slice.
inline double sparse_dot(const CompressedView& a, std::ptrdiff_t j, const double* r) {
  double s = 0.0;
  for (int k = a.outer[j]; k < a.outer[j + 1]; ++k) s += a.values[k] * r[a.inner[k]];
  return s;
}

}  // namespace detail

}  // namespace lqsp::kernels
