// Serial vs OpenMP timings of the solver's inner kernels.
//
//   kernel_bench [m] [n] [repeats]

#include "lqsp/kernels.hpp"
#include "lqsp/prox.hpp"
#include "lqsp/random.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

namespace k = lqsp::kernels;

namespace {

double time_best(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-18s serial %10.3f ms  parallel %10.3f ms  speedup %5.2fx  %s\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel, same ? "identical" : "MISMATCH");
}

std::span<const double> in(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> io(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> io(Eigen::MatrixXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

int main(int argc, char** argv) {
  const long m = argc > 1 ? std::atol(argv[1]) : 2000;
  const long n = argc > 2 ? std::atol(argv[2]) : 8000;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 5;
  std::printf("m=%ld n=%ld threads=%d\n", m, n, omp_get_max_threads());

  lqsp::PortableRng rng(7);
  Eigen::MatrixXd a(m, n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < m; ++i) a(i, j) = rng.gaussian();
  Eigen::VectorXd x(n), r(m), w(m);
  for (long j = 0; j < n; ++j) x[j] = rng.gaussian();
  for (long i = 0; i < m; ++i) {
    r[i] = rng.gaussian();
    w[i] = rng.uniform();
  }

  Eigen::SparseMatrix<double> sp(m, n);
  {
    std::vector<Eigen::Triplet<double>> trip;
    for (long j = 0; j < n; ++j)
      for (long i = 0; i < m; ++i)
        if (rng.uniform() < 0.01) trip.emplace_back(i, j, rng.gaussian());
    sp.setFromTriplets(trip.begin(), trip.end());
    sp.makeCompressed();
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> sp_rows = sp;
  sp_rows.makeCompressed();

  const k::DenseView dv{a.data(), m, n};
  const k::CompressedView csc{sp.valuePtr(), sp.innerIndexPtr(), sp.outerIndexPtr(), sp.outerSize(), sp.innerSize()};
  const k::CompressedView csr{sp_rows.valuePtr(), sp_rows.innerIndexPtr(), sp_rows.outerIndexPtr(),
                              sp_rows.outerSize(), sp_rows.innerSize()};

  Eigen::VectorXd ys(m), yp(m), zs(n), zp(n);
  {
    const double ts = time_best(repeats, [&] { k::serial::gemv(dv, in(x), io(ys)); });
    const double tp = time_best(repeats, [&] { k::parallel::gemv(dv, in(x), io(yp)); });
    report("gemv", ts, tp, ys == yp);
  }
  {
    const double ts = time_best(repeats, [&] { k::serial::gemv_t(dv, in(r), io(zs)); });
    const double tp = time_best(repeats, [&] { k::parallel::gemv_t(dv, in(r), io(zp)); });
    report("gemv_t", ts, tp, zs == zp);
  }
  {
    const double ts = time_best(repeats, [&] { k::serial::csr_gemv(csr, in(x), io(ys)); });
    const double tp = time_best(repeats, [&] { k::parallel::csr_gemv(csr, in(x), io(yp)); });
    report("csr_gemv", ts, tp, ys == yp);
  }
  {
    const double ts = time_best(repeats, [&] { k::serial::csc_gemv_t(csc, in(r), io(zs)); });
    const double tp = time_best(repeats, [&] { k::parallel::csc_gemv_t(csc, in(r), io(zp)); });
    report("csc_gemv_t", ts, tp, zs == zp);
  }

  const long kcols = std::min<long>(n, 200);
  const k::DenseView block{a.data(), m, kcols};
  Eigen::MatrixXd gs(kcols, kcols), gp(kcols, kcols);
  {
    const double ts = time_best(repeats, [&] { k::serial::weighted_gram(block, in(w), io(gs)); });
    const double tp = time_best(repeats, [&] { k::parallel::weighted_gram(block, in(w), io(gp)); });
    report("weighted_gram", ts, tp, gs == gp);
  }

  const lqsp::ProxSpec spec{0.3, 0.5, lqsp::TieRule::PreferZero};
  Eigen::VectorXd ps, pp;
  {
    const double ts = time_best(repeats, [&] { ps = lqsp::prox_vector_serial(x, spec); });
    const double tp = time_best(repeats, [&] { pp = lqsp::prox_vector(x, spec); });
    report("prox_vector", ts, tp, ps == pp);
  }
  return 0;
}
