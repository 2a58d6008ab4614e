// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include "lqsp/experiment.hpp"
#include "lqsp/libsvm.hpp"
#include "lqsp/prox.hpp"
#include "lqsp/random.hpp"
#include "lqsp/solver.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

using namespace lqsp;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::map<int, Verdict> verdicts;

void record(int id, bool pass, const std::string& detail) { verdicts[id] = {pass, detail}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Suite-wide bookkeeping for the descent and stationarity criteria.
struct SuiteChecks {
  long descent_steps = 0;
  long descent_violations = 0;
  double worst_descent = -INFINITY;
  long stationary_runs = 0;
  long certificate_failures = 0;
  double worst_residual_ratio = 0.0;
  double worst_magnitude_gap = INFINITY;
} suite;

void audit(const Problem& p, const SolveOptions& o, const SolveReport& r) {
  for (std::size_t k = 0; k + 1 < r.history.size(); ++k) {
    const auto& x = r.history[k].x;
    const auto& w = r.history[k].w;
    const auto& xn = r.history[k + 1].x;
    const double gap = p.penalized_value(xn, o.lambda, o.q) -
                       (p.penalized_value(x, o.lambda, o.q) -
                        0.25 * o.sigma * std::max((w - x).squaredNorm(), (xn - x).squaredNorm()));
    ++suite.descent_steps;
    suite.worst_descent = std::max(suite.worst_descent, gap);
    if (!(gap <= 1e-10)) ++suite.descent_violations;
  }
  if (r.status != SolveStatus::StationaryStop) return;
  ++suite.stationary_runs;
  bool ok = true;
  const double res = stationarity_residual(p, r.x_final, r.alpha_last, o.lambda, o.q);
  suite.worst_residual_ratio = std::max(suite.worst_residual_ratio, res / (10.0 * o.grad_tol));
  if (!(res <= 10.0 * o.grad_tol)) ok = false;
  if (o.q > 0.0) {
    const double c = std::pow(2.0 * r.alpha_last * o.lambda * (1.0 - o.q), 1.0 / (2.0 - o.q));
    for (Index i = 0; i < r.x_final.size(); ++i) {
      if (r.x_final[i] == 0.0) continue;
      const double gap = std::abs(r.x_final[i]) - (c - 1e-10);
      suite.worst_magnitude_gap = std::min(suite.worst_magnitude_gap, gap);
      if (gap < 0.0) ok = false;
    }
  }
  if (!ok) ++suite.certificate_failures;
}

SolveReport solve(const Problem& p, SolveOptions o, bool newton) {
  o.record_iterates = true;
  SolveReport r = newton ? psnp(p, o) : prox_grad(p, o);
  audit(p, o, r);
  r.history.clear();
  r.history.shrink_to_fit();
  return r;
}

// 1. Prox against a brute-force grid. Cases are grouped by q so that k^q is
// tabulated once per q; the grid is z_k = k*h on [-|a|-1, |a|+1] with 10^6+1
// points, scanned on the half with the sign of a (the other half is dominated).
void criterion_prox() {
  const auto t0 = Clock::now();
  constexpr long half = 500000;
  std::vector<double> qs;
  for (int i = 0; i < 20; ++i) qs.push_back(0.05 * i);
  qs.push_back(1.0 / 3.0);
  qs.push_back(2.0 / 3.0);

  PortableRng rng(2024);
  struct Case { double a, w; };
  std::vector<std::vector<Case>> cases(qs.size());
  for (int t = 0; t < 10000; ++t) {
    const std::size_t qi = rng.below(qs.size());
    const double q = qs[qi];
    const double w = std::exp(rng.uniform(std::log(1e-3), std::log(3.0)));
    double a = rng.uniform(-5.0, 5.0);
    if (t % 5 == 0) {
      // Near the threshold, where 0 and the nonzero branch compete.
      const double c = std::pow(2.0 * w * (1.0 - q), 1.0 / (2.0 - q));
      const double kappa = c * (2.0 - q) / (2.0 * (1.0 - q));
      a = (rng.uniform() < 0.5 ? -1.0 : 1.0) * kappa * (1.0 + rng.uniform(-1e-3, 1e-3));
    }
    cases[qi].push_back({a, w});
  }

  std::vector<double> table(half + 1);
  long failures = 0;
  double worst = -INFINITY;
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    const double q = qs[qi];
    table[0] = 0.0;
    for (long k = 1; k <= half; ++k) table[k] = q == 0.0 ? 1.0 : std::pow(static_cast<double>(k), q);
    for (const Case& cs : cases[qi]) {
      const double abs_a = std::abs(cs.a);
      const double h = (abs_a + 1.0) / half;
      const double hq = q == 0.0 ? 1.0 : std::pow(h, q);
      long best = 0;
      double best_val = 0.5 * abs_a * abs_a;
      long best_nz = 1;
      double best_nz_val = INFINITY;
      for (long k = 1; k <= half; ++k) {
        const double d = static_cast<double>(k) * h - abs_a;
        const double v = 0.5 * d * d + cs.w * hq * table[k];
        if (v < best_nz_val) {
          best_nz_val = v;
          best_nz = k;
        }
      }
      if (best_nz_val < best_val) best = best_nz;
      const double z_nz = static_cast<double>(best_nz) * h;
      const double refined = oracle::refine(abs_a, cs.w, q, z_nz - h, z_nz + h, z_nz);
      double ref = best == 0 ? 0.0 : z_nz;
      if (oracle::phi(refined, abs_a, cs.w, q) < oracle::phi(ref, abs_a, cs.w, q)) ref = refined;
      ref = cs.a < 0.0 ? -ref : ref;

      const double z = prox_scalar(cs.a, {cs.w, q});
      const double gap = oracle::phi(z, cs.a, cs.w, q) - oracle::phi(ref, cs.a, cs.w, q);
      worst = std::max(worst, gap);
      if (!(gap <= 1e-8)) ++failures;
    }
  }
  const double secs = since(t0);
  record(1, failures == 0 && secs < 30.0,
         fmt("10000 cases, %ld above oracle+1e-8, worst phi gap %.3g, %.1fs", failures, worst, secs));
}

// 2. Gradients against central differences; restricted Hessian actions against
// differences of the gradient.
void criterion_derivatives() {
  const auto t0 = Clock::now();
  PortableRng rng(77);
  const long m = 40, n = 30;
  double worst_g = 0.0, worst_h = 0.0;
  long skipped = 0;
  for (ModelKind kind : {ModelKind::LeastSquares, ModelKind::LogisticL2, ModelKind::SquaredHingeSvm}) {
    Eigen::MatrixXd a(m, n);
    for (auto& e : a.reshaped()) e = rng.gaussian();
    Eigen::VectorXd y(m);
    for (auto& e : y) e = rng.uniform() < 0.5 ? 0.0 : 1.0;
    const Problem p = kind == ModelKind::LeastSquares
                          ? Problem::least_squares(DataMatrix(a), Eigen::VectorXd(a.col(0) + y))
                      : kind == ModelKind::LogisticL2 ? Problem::logistic(DataMatrix(a), y, 1e-2)
                                                      : Problem::squared_hinge_svm(DataMatrix(a), 2.0 * y.array() - 1.0, 1e-2);
    const Eigen::VectorXd resp = 2.0 * y.array() - 1.0;
    int done = 0;
    while (done < 100) {
      Eigen::VectorXd x(n);
      for (auto& e : x) e = 0.3 * rng.gaussian();
      Support s;
      for (Index j = 0; j < n; ++j)
        if (rng.uniform() < 0.3) s.push_back(j);
      if (s.empty()) s.push_back(rng.below(n));
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (Index j : s) v[j] = rng.gaussian();
      const double t = 1e-5;
      if (kind == ModelKind::SquaredHingeSvm) {
        // Stay clear of margin kinks along both the FD and the directional probes.
        const Eigen::VectorXd sx = a * x, sv = a * v;
        bool near = false;
        for (Index i = 0; i < m; ++i) {
          const double reach = 1e-6 * (1.0 + x.norm()) * a.row(i).cwiseAbs().sum() + 2.0 * t * std::abs(sv[i]);
          if (std::abs(1.0 - resp[i] * sx[i]) <= 10.0 * reach) near = true;
        }
        if (near) {
          ++skipped;
          continue;
        }
      }
      const Eigen::VectorXd g = p.gradient(x);
      const Eigen::VectorXd fd =
          oracle::fd_gradient([&](const Eigen::VectorXd& z) { return p.value(z); }, x, 1e-6 * (1.0 + x.norm()));
      worst_g = std::max(worst_g, oracle::rel_inf(g, fd));

      const Eigen::VectorXd hv = p.restricted_hessian(x, s).op.apply(restrict_to(v, s));
      const Eigen::VectorXd dg = restrict_to((p.gradient(x + t * v) - p.gradient(x - t * v)) / (2.0 * t), s);
      worst_h = std::max(worst_h, oracle::rel_inf(hv, dg));
      ++done;
    }
  }
  const double secs = since(t0);
  record(2, worst_g <= 1e-6 && worst_h <= 1e-4 && secs < 10.0,
         fmt("3x100 points, worst gradient rel %.3g, worst Hessian-action rel %.3g, %ld svm points "
             "redrawn near kinks, %.2fs",
             worst_g, worst_h, skipped, secs));
}

// 4-6. Noiseless compressed sensing at (200, 800, 20).
void criteria_cs() {
  const auto t0 = Clock::now();
  const Index m = 200, n = 800, s = 20;
  const std::vector<double> qs{0.0, 0.5, 2.0 / 3.0};
  std::map<double, std::vector<double>> re;
  std::map<double, std::vector<Index>> nnz;
  std::map<double, int> wins, not_stationary;
  long worst_tail = 0;
  int tail_failures = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    const CsInstance inst = gen_cs(m, n, s, 0.0, static_cast<std::uint64_t>(seed));
    const Problem p = inst.problem();
    for (double q : qs) {
      SolveOptions o;
      o.q = q;
      o.lambda = lambda_rule_cs(inst.A, inst.b, q);
      const SolveReport r = solve(p, o, true);
      const SolveReport base = solve(p, o, false);
      re[q].push_back(relative_error(r.x_final, inst.x_true));
      nnz[q].push_back(static_cast<Index>(r.support.size()));
      if (r.status != SolveStatus::StationaryStop) ++not_stationary[q];
      if (r.iterations <= base.iterations) ++wins[q];
      if (q == 0.0) {
        // First k with S^{k+1} = S^k, counted against the stopping index.
        long first = -1;
        for (std::size_t k = 1; k < r.trace.size(); ++k) {
          if (!r.trace[k].support_changed) {
            first = static_cast<long>(k) - 1;
            break;
          }
        }
        const long stop = static_cast<long>(r.trace.size()) - 1;
        const long further = first < 0 ? -1 : stop - (first + 1);
        worst_tail = std::max(worst_tail, further);
        if (r.status != SolveStatus::StationaryStop || first < 0 || further > 2) ++tail_failures;
      }
    }
  }
  const double secs = since(t0);

  bool ok4 = secs < 120.0;
  std::string d4;
  for (double q : qs) {
    const double med = median(re[q]);
    const auto [lo, hi] = std::minmax_element(nnz[q].begin(), nnz[q].end());
    bool ok = not_stationary[q] == 0;
    if (q == 0.0) {
      ok = ok && med <= 1e-6;
    } else {
      ok = ok && med <= 0.10 && *lo >= 18 && *hi <= 22;
    }
    ok4 = ok4 && ok;
    d4 += fmt("q=%.3g median ReErr %.3g |S| in [%ld,%ld] non-stationary %d; ", q, med, static_cast<long>(*lo),
              static_cast<long>(*hi), not_stationary[q]);
  }
  record(4, ok4, d4 + fmt("%.1fs incl. baselines", secs));
  record(5, tail_failures == 0,
         fmt("20 q=0 runs, %d violations, most iterations after first repeat of the support: %ld", tail_failures,
             worst_tail));
  bool ok6 = true;
  std::string d6;
  for (double q : qs) {
    ok6 = ok6 && wins[q] >= 16;
    d6 += fmt("q=%.3g %d/20; ", q, wins[q]);
  }
  record(6, ok6, "psnp iterations <= prox_grad: " + d6);
}

// 7. Superlinear tail on logistic regression.
void criterion_rate() {
  int checked = 0, skipped = 0, failures = 0;
  double worst = 0.0;
  for (int seed = 1; seed <= 10; ++seed) {
    const auto inst = gen_logistic(200, 1000, 10, static_cast<std::uint64_t>(seed));
    const Problem p = Problem::logistic(DataMatrix(inst.table.samples), inst.table.labels01(), 1e-3);
    const double g0 = p.gradient(Eigen::VectorXd::Zero(p.dim())).lpNorm<Eigen::Infinity>();
    for (double q : {0.0, 0.5}) {
      SolveOptions o;
      o.q = q;
      o.lambda = 0.05 * g0;
      const SolveReport r = solve(p, o, true);
      if (r.status != SolveStatus::StationaryStop || r.support.empty() || r.trace.size() < 3 ||
          !second_order_check(p, r.x_final, o.lambda, q, r.alpha_last).sufficient_holds) {
        ++skipped;
        continue;
      }
      ++checked;
      const std::size_t k = r.trace.size();
      bool ok = true;
      for (std::size_t j = k - 3; j + 1 < k; ++j) {
        const double g = r.trace[j].grad_inf, gn = r.trace[j + 1].grad_inf;
        const double bound = std::max(std::pow(g, 1.2), 10.0 * o.grad_tol);
        worst = std::max(worst, gn / bound);
        if (!(gn <= bound)) ok = false;
      }
      if (!ok) ++failures;
    }
  }
  record(7, checked > 0 && failures == 0,
         fmt("%d runs checked, %d skipped (no second-order certificate), %d violations, worst g_{k+1}/bound %.3g",
             checked, skipped, failures, worst));
}

bool same_run(const SolveReport& a, const SolveReport& b) {
  if (a.status != b.status || a.iterations != b.iterations || a.trace.size() != b.trace.size()) return false;
  if (a.x_final.size() != b.x_final.size() || !(a.x_final.array() == b.x_final.array()).all()) return false;
  if (a.objective != b.objective || a.alpha_last != b.alpha_last) return false;
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    const auto& s = a.trace[k];
    const auto& t = b.trace[k];
    if (s.objective != t.objective || s.grad_inf != t.grad_inf || s.alpha != t.alpha ||
        s.support_size != t.support_size || s.newton_accepted != t.newton_accepted)
      return false;
  }
  return true;
}

// 9. Newton off is plain proximal gradient.
void criterion_fallback() {
  const std::vector<double> qs{0.0, 0.5, 2.0 / 3.0, 0.0, 0.5};
  int same = 0, total = 0;
  for (int seed = 1; seed <= 5; ++seed) {
    const double q = qs[static_cast<std::size_t>(seed - 1)];
    const auto useed = static_cast<std::uint64_t>(100 + seed);
    std::vector<std::pair<Problem, SolveOptions>> runs;

    const CsInstance cs = gen_cs(80, 240, 8, 0.01, useed);
    SolveOptions o;
    o.q = q;
    o.lambda = lambda_rule_cs(cs.A, cs.b, q);
    runs.emplace_back(cs.problem(), o);

    const auto lg = gen_logistic(100, 300, 5, useed);
    const Problem lr = Problem::logistic(DataMatrix(lg.table.samples), lg.table.labels01(), 1e-3);
    o.lambda = 0.05 * lr.gradient(Eigen::VectorXd::Zero(lr.dim())).lpNorm<Eigen::Infinity>();
    runs.emplace_back(lr, o);

    const auto sv = gen_svm(100, 500, 5, useed);
    const auto reg = lambda_rule_svm(sv.table);
    o.lambda = reg.lambda;
    o.tau = 10.0;
    o.grad_tol = svm_grad_tol(100, 500);
    runs.emplace_back(Problem::squared_hinge_svm(DataMatrix(sv.table.samples), sv.table.labels, reg.mu), o);

    for (auto& [p, opts] : runs) {
      SolveOptions off = opts;
      off.newton_mode = NewtonMode::Off;
      const SolveReport a = solve(p, off, true);
      const SolveReport b = solve(p, opts, false);
      ++total;
      if (same_run(a, b)) ++same;
    }
  }
  record(9, same == total, fmt("%d/%d runs bitwise identical (5 seeds x 3 models)", same, total));
}

// 10. SVM on seeded synthetic data passed through a LIBSVM file.
void criterion_svm() {
  const auto t0 = Clock::now();
  const Index m = 200, n = 2000;
  const std::vector<double> qs{0.0, 0.5, 2.0 / 3.0};
  std::map<double, int> wins;
  const auto dir = std::filesystem::temp_directory_path() / "lqsp_acceptance";
  std::filesystem::create_directories(dir);
  for (int seed = 1; seed <= 10; ++seed) {
    const auto path = dir / ("svm_" + std::to_string(seed) + ".libsvm");
    write_libsvm(path, gen_svm(m, n, 10, static_cast<std::uint64_t>(seed)).table);
    const DatasetTable table = read_libsvm(path, n);
    const auto reg = lambda_rule_svm(table);
    const DataMatrix data(table.samples);
    const Problem p = Problem::squared_hinge_svm(data, table.labels, reg.mu);
    for (double q : qs) {
      SolveOptions o;
      o.q = q;
      o.lambda = reg.lambda;
      o.tau = 10.0;
      o.grad_tol = svm_grad_tol(m, n);
      const SolveReport r = solve(p, o, true);
      const SolveReport base = solve(p, o, false);
      const double acc = classification_accuracy(data, table.labels, r.x_final);
      const double acc_base = classification_accuracy(data, table.labels, base.x_final);
      if (acc >= acc_base - 0.01 && r.iterations <= base.iterations) ++wins[q];
    }
  }
  std::filesystem::remove_all(dir);
  bool ok = true;
  std::string d;
  for (double q : qs) {
    ok = ok && wins[q] >= 7;
    d += fmt("q=%.3g %d/10; ", q, wins[q]);
  }
  record(10, ok, "seeds where psnp matches accuracy with <= iterations: " + d + fmt("%.1fs", since(t0)));
}

}  // namespace

int main() {
  try {
    criterion_prox();
    criterion_derivatives();
    criteria_cs();
    criterion_rate();
    criterion_fallback();
    criterion_svm();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  record(3, suite.descent_violations == 0 && suite.descent_steps > 0,
         fmt("%ld steps audited, %ld violations, worst F(x+) - bound %.3g", suite.descent_steps,
             suite.descent_violations, suite.worst_descent));
  record(8, suite.certificate_failures == 0 && suite.stationary_runs > 0,
         fmt("%ld stationary runs, %ld failures, worst residual/(10 tol) %.3g, smallest |x_i| - (c - 1e-10) %.3g",
             suite.stationary_runs, suite.certificate_failures, suite.worst_residual_ratio,
             suite.worst_magnitude_gap));

  int failed = 0;
  for (int id = 1; id <= 10; ++id) {
    const auto it = verdicts.find(id);
    const bool pass = it != verdicts.end() && it->second.pass;
    if (!pass) ++failed;
    std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL",
                it == verdicts.end() ? "not run" : it->second.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
