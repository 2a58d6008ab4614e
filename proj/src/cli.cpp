#include "lqsp/cli.hpp"

#include "lqsp/report_io.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace lqsp {

double parse_q(const std::string& text) {
  const auto slash = text.find('/');
  std::size_t used = 0;
  double q = 0.0;
  try {
    if (slash == std::string::npos) {
      q = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
    } else {
      const std::string num = text.substr(0, slash);
      const std::string den = text.substr(slash + 1);
      const double a = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument("");
      const double b = std::stod(den, &used);
      if (used != den.size() || b == 0.0) throw std::invalid_argument("");
      q = a / b;
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse q from '" + text + "'");
  }
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in [0,1), got '" + text + "'");
  return q;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MetricRow aggregate_median(const std::vector<MetricRow>& trials, const std::string& label) {
  if (trials.empty()) throw std::invalid_argument("aggregate_median: no trials");
  auto collect = [&](auto field) {
    std::vector<double> v;
    for (const auto& t : trials) v.push_back(static_cast<double>(field(t)));
    return median(std::move(v));
  };
  MetricRow row;
  row.algo = label;
  row.q = trials.front().q;
  row.f_value = collect([](const MetricRow& t) { return t.f_value; });
  if (trials.front().re_err) row.re_err = collect([](const MetricRow& t) { return t.re_err.value_or(0.0); });
  if (trials.front().acc) row.acc = collect([](const MetricRow& t) { return t.acc.value_or(0.0); });
  row.support_size = static_cast<Index>(std::lround(collect([](const MetricRow& t) { return t.support_size; })));
  row.time_seconds = collect([](const MetricRow& t) { return t.time_seconds; });
  row.iterations = static_cast<int>(std::lround(collect([](const MetricRow& t) { return t.iterations; })));

  std::vector<std::pair<std::string, int>> counts;
  for (const auto& t : trials) {
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == t.status; });
    if (it == counts.end()) {
      counts.emplace_back(t.status, 1);
    } else {
      ++it->second;
    }
  }
  row.status = std::max_element(counts.begin(), counts.end(),
                                [](const auto& a, const auto& b) { return a.second < b.second; })
                   ->first;
  return row;
}

namespace {

struct CommonFlags {
  std::vector<std::string> q_text{"0"};
  std::vector<std::string> algos{"psnp"};
  std::optional<double> lambda;
  std::optional<double> lambda_a;
  std::optional<double> tol;
  int max_iter = 10000;
  std::optional<double> tau;
  std::string newton = "auto";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--q", f.q_text, "Exponent(s) q in [0,1); fractions like 1/2 are accepted");
  cmd->add_option("--algo", f.algos, "psnp and/or proxgrad")
      ->check(CLI::IsMember({"psnp", "proxgrad"}));
  auto* lam = cmd->add_option("--lambda", f.lambda, "Regularization weight");
  cmd->add_option("--lambda-a", f.lambda_a, "Multiplier a in lambda = a*||A^T b||_inf")->excludes(lam);
  cmd->add_option("--tol", f.tol, "Stopping tolerance on the on-support gradient");
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tau", f.tau, "Initial step of the Armijo search");
  cmd->add_option("--newton", f.newton, "Newton solve mode")
      ->check(CLI::IsMember({"auto", "direct", "cg", "off"}));
}

NewtonMode newton_mode(const std::string& s) {
  if (s == "direct") return NewtonMode::Direct;
  if (s == "cg") return NewtonMode::CG;
  if (s == "off") return NewtonMode::Off;
  return NewtonMode::Auto;
}

SolveReport run_algo(const std::string& algo, const Problem& p, const SolveOptions& o) {
  return algo == "proxgrad" ? prox_grad(p, o) : psnp(p, o);
}

std::vector<double> parse_qs(const std::vector<std::string>& texts) {
  std::vector<double> out;
  for (const auto& t : texts) out.push_back(parse_q(t));
  return out;
}

int trial_threads() {
  if (const char* env = std::getenv("LQSP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

void emit_csv(const std::vector<MetricRow>& rows, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_csv(out, rows);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  write_csv(file, rows);
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct CsFlags {
  Index m = 200, n = 800, s = 20;
  double nf = 0.0;
  std::uint64_t seed = 1;
  double density = 1.0;
};

void add_cs(CLI::App* cmd, CsFlags& f) {
  cmd->add_option("--m", f.m, "Measurements")->check(CLI::PositiveNumber);
  cmd->add_option("--n", f.n, "Signal length")->check(CLI::PositiveNumber);
  cmd->add_option("--s", f.s, "Sparsity")->check(CLI::PositiveNumber);
  cmd->add_option("--nf", f.nf, "Noise factor")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--density", f.density, "Fraction of nonzeros in A")->check(CLI::Range(0.0, 1.0));
}

SolveOptions cs_options(const CommonFlags& f, double q, const CsInstance& inst) {
  SolveOptions o;
  o.q = q;
  o.lambda = f.lambda ? *f.lambda : lambda_rule_cs(inst.A, inst.b, q, f.lambda_a);
  o.tau = f.tau.value_or(1.0);
  o.grad_tol = f.tol.value_or(1e-6);
  o.max_iter = f.max_iter;
  o.newton_mode = newton_mode(f.newton);
  return o;
}

SolveOptions classification_options(const CommonFlags& f, double q, double rule_lambda, Index m, Index n) {
  SolveOptions o;
  o.q = q;
  o.lambda = f.lambda ? *f.lambda : rule_lambda;
  o.tau = f.tau.value_or(10.0);
  o.grad_tol = f.tol.value_or(svm_grad_tol(m, n));
  o.max_iter = f.max_iter;
  o.newton_mode = newton_mode(f.newton);
  return o;
}

Problem make_classifier(const std::string& model, const DatasetTable& t, double mu) {
  if (model == "logistic") return Problem::logistic(DataMatrix(t.samples), t.labels01(), mu);
  return Problem::squared_hinge_svm(DataMatrix(t.samples), t.labels, mu);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lq-regularized sparse optimization solvers and benchmarks", "lqsp"};
  app.require_subcommand(1);

  // solve
  CommonFlags solve_flags;
  CsFlags solve_cs;
  std::string solve_data, solve_model = "svm", solve_trace, solve_out;
  std::optional<double> solve_mu;
  auto* solve = app.add_subcommand("solve", "Solve one generated CS instance or one dataset");
  add_common(solve, solve_flags);
  add_cs(solve, solve_cs);
  solve->add_option("--data", solve_data, "LIBSVM file (otherwise a CS instance is generated)")
      ->check(CLI::ExistingFile);
  solve->add_option("--model", solve_model, "Model for --data")->check(CLI::IsMember({"svm", "logistic"}));
  solve->add_option("--mu", solve_mu, "Ridge weight for --data (default: lambda)");
  solve->add_option("--trace", solve_trace, "Write the per-iteration trace here");
  solve->add_option("--out", solve_out, "CSV output path (default stdout)");

  // bench-cs
  CommonFlags cs_flags;
  CsFlags cs;
  int cs_trials = 20;
  std::string cs_sweep, cs_out;
  std::vector<double> cs_values;
  auto* bench_cs = app.add_subcommand("bench-cs", "Compressed-sensing sweep with median aggregation");
  add_common(bench_cs, cs_flags);
  add_cs(bench_cs, cs);
  bench_cs->add_option("--trials", cs_trials, "Trials per cell")->check(CLI::PositiveNumber);
  auto* sweep = bench_cs->add_option("--sweep", cs_sweep, "Swept parameter")->check(CLI::IsMember({"m", "s", "nf"}));
  bench_cs->add_option("--values", cs_values, "Values of the swept parameter")->needs(sweep);
  sweep->needs("--values");
  bench_cs->add_option("--out", cs_out, "CSV output path (default stdout)");

  // bench-svm
  CommonFlags svm_flags;
  svm_flags.algos = {"psnp", "proxgrad"};
  svm_flags.q_text = {"0", "1/2", "2/3"};
  std::vector<std::string> svm_data;
  std::string svm_out;
  Index svm_m = 200, svm_n = 2000, svm_s = 10;
  std::uint64_t svm_seed = 1;
  auto* bench_svm = app.add_subcommand("bench-svm", "SVM runs over all algorithm/q combinations");
  add_common(bench_svm, svm_flags);
  bench_svm->add_option("--data", svm_data, "LIBSVM dataset(s); a synthetic set is generated if omitted")
      ->check(CLI::ExistingFile);
  bench_svm->add_option("--m", svm_m, "Samples of the synthetic set")->check(CLI::PositiveNumber);
  bench_svm->add_option("--n", svm_n, "Features of the synthetic set")->check(CLI::PositiveNumber);
  bench_svm->add_option("--s", svm_s, "Sparsity of the synthetic ground truth")->check(CLI::PositiveNumber);
  bench_svm->add_option("--seed", svm_seed, "Seed of the synthetic set");
  bench_svm->add_option("--out", svm_out, "CSV output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (solve->parsed()) {
      if (solve_flags.q_text.size() != 1 || solve_flags.algos.size() != 1) {
        err << "error: solve takes a single --q and a single --algo; use bench-cs or bench-svm for grids\n";
        return 2;
      }
      const double q = parse_q(solve_flags.q_text.front());
      const std::string algo = solve_flags.algos.front();
      SolveReport rep;
      MetricRow row;
      if (solve_data.empty()) {
        const CsInstance inst = gen_cs(solve_cs.m, solve_cs.n, solve_cs.s, solve_cs.nf, solve_cs.seed,
                                       solve_cs.density);
        rep = run_algo(algo, inst.problem(), cs_options(solve_flags, q, inst));
        row = metrics(algo, q, rep, inst);
      } else {
        const DatasetTable t = scale_features(read_libsvm(std::filesystem::path(solve_data)));
        double lam = 0.0;
        if (!solve_flags.lambda) lam = lambda_rule_svm(t).lambda;
        SolveOptions o = classification_options(solve_flags, q, lam, t.rows(), t.cols());
        rep = run_algo(algo, make_classifier(solve_model, t, solve_mu.value_or(o.lambda)), o);
        row = metrics(algo, q, rep, t);
      }
      for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
      if (!solve_trace.empty()) {
        std::ofstream tf(solve_trace);
        if (!tf) throw std::runtime_error("cannot write " + solve_trace);
        write_trace(tf, rep.trace);
      }
      emit_csv({row}, solve_out, out);
      return 0;
    }

    if (bench_cs->parsed()) {
      const std::vector<double> qs = parse_qs(cs_flags.q_text);
      std::vector<double> values = cs_values;
      if (cs_sweep.empty()) values = {0.0};
      const int threads = trial_threads();
      std::vector<MetricRow> rows;
      for (double v : values) {
        CsFlags cell = cs;
        std::string suffix;
        if (cs_sweep == "m") cell.m = static_cast<Index>(std::llround(v));
        if (cs_sweep == "s") cell.s = static_cast<Index>(std::llround(v));
        if (cs_sweep == "nf") cell.nf = v;
        if (!cs_sweep.empty()) suffix = "@" + cs_sweep + "=" + format_value(v);
        for (double q : qs) {
          for (const auto& algo : cs_flags.algos) {
            std::vector<MetricRow> trial_rows(static_cast<std::size_t>(cs_trials));
            std::vector<std::string> errors(static_cast<std::size_t>(cs_trials));
#pragma omp parallel for num_threads(threads) schedule(dynamic)
            for (int t = 0; t < cs_trials; ++t) {
              try {
                const CsInstance inst =
                    gen_cs(cell.m, cell.n, cell.s, cell.nf, cell.seed + static_cast<std::uint64_t>(t), cell.density);
                const SolveReport rep = run_algo(algo, inst.problem(), cs_options(cs_flags, q, inst));
                trial_rows[static_cast<std::size_t>(t)] = metrics(algo, q, rep, inst);
              } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(t)] = e.what();
              }
            }
            for (const auto& e : errors) {
              if (!e.empty()) throw std::runtime_error(e);
            }
            rows.push_back(aggregate_median(trial_rows, algo + suffix));
          }
        }
      }
      emit_csv(rows, cs_out, out);
      return 0;
    }

    if (bench_svm->parsed()) {
      const std::vector<double> qs = parse_qs(svm_flags.q_text);
      std::vector<std::pair<std::string, DatasetTable>> sets;
      if (svm_data.empty()) {
        sets.emplace_back("synthetic", gen_svm(svm_m, svm_n, svm_s, svm_seed).table);
      } else {
        for (const auto& path : svm_data) {
          sets.emplace_back(std::filesystem::path(path).stem().string(),
                            scale_features(read_libsvm(std::filesystem::path(path))));
        }
      }
      std::vector<MetricRow> rows;
      for (const auto& [name, table] : sets) {
        double lam = 0.0;
        if (!svm_flags.lambda) lam = lambda_rule_svm(table).lambda;
        for (const auto& algo : svm_flags.algos) {
          for (double q : qs) {
            const SolveOptions o = classification_options(svm_flags, q, lam, table.rows(), table.cols());
            const Problem p = Problem::squared_hinge_svm(DataMatrix(table.samples), table.labels, o.lambda);
            const SolveReport rep = run_algo(algo, p, o);
            MetricRow row = metrics(algo, q, rep, table);
            if (sets.size() > 1 || !svm_data.empty()) row.algo += "@" + name;
            rows.push_back(std::move(row));
          }
        }
      }
      emit_csv(rows, svm_out, out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace lqsp
