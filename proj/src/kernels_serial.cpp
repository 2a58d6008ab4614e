#include "lqsp/kernels.hpp"

#include <algorithm>
#include <vector>

namespace lqsp::kernels::serial {

void gemv(DenseView a, std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::ptrdiff_t j = 0; j < a.cols; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const double* col = a.column(j);
    for (std::ptrdiff_t i = 0; i < a.rows; ++i) y[i] += xj * col[i];
  }
}

void gemv_t(DenseView a, std::span<const double> r, std::span<double> y) {
  for (std::ptrdiff_t j = 0; j < a.cols; ++j) y[j] = detail::dot(a.column(j), r.data(), a.rows);
}

void csr_gemv(CompressedView a, std::span<const double> x, std::span<double> y) {
  for (std::ptrdiff_t i = 0; i < a.outer_size; ++i) y[i] = detail::sparse_dot(a, i, x.data());
}

void csc_gemv_t(CompressedView a, std::span<const double> r, std::span<double> y) {
  for (std::ptrdiff_t j = 0; j < a.outer_size; ++j) y[j] = detail::sparse_dot(a, j, r.data());
}

void csc_gemv(CompressedView a, std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::ptrdiff_t j = 0; j < a.outer_size; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (int k = a.outer[j]; k < a.outer[j + 1]; ++k) y[a.inner[k]] += a.values[k] * xj;
  }
}

void weighted_gram(DenseView b, std::span<const double> w, std::span<double> out) {
  const std::ptrdiff_t k = b.cols;
  for (std::ptrdiff_t j = 0; j < k; ++j) {
    for (std::ptrdiff_t i = 0; i <= j; ++i) {
      const double g = w.empty() ? detail::dot(b.column(i), b.column(j), b.rows)
                                 : detail::weighted_dot(b.column(i), b.column(j), w.data(), b.rows);
      out[i + j * k] = g;
      out[j + i * k] = g;
    }
  }
}

void csc_weighted_gram(CompressedView b, std::span<const double> w, std::span<double> out) {
  const std::ptrdiff_t k = b.outer_size;
  std::vector<double> work(static_cast<std::size_t>(b.inner_size), 0.0);
  for (std::ptrdiff_t j = 0; j < k; ++j) {
    for (int t = b.outer[j]; t < b.outer[j + 1]; ++t) {
      work[b.inner[t]] = w.empty() ? b.values[t] : w[b.inner[t]] * b.values[t];
    }
    for (std::ptrdiff_t i = 0; i <= j; ++i) {
      const double g = detail::sparse_dot(b, i, work.data());
      out[i + j * k] = g;
      out[j + i * k] = g;
    }
    for (int t = b.outer[j]; t < b.outer[j + 1]; ++t) work[b.inner[t]] = 0.0;
  }
}

}  // namespace lqsp::kernels::serial
