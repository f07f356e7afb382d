#include "jsr/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jsr/bench.hpp"
#include "jsr/core.hpp"
#include "jsr/datagen.hpp"

namespace jsr::cli {

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("JOINTSPARSE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library picks the OpenMP default
}

bench::ExperimentSpec resolve_spec(const std::string& ref, bool full_scale) {
  const auto names = bench::preset_names();
  if (std::find(names.begin(), names.end(), ref) != names.end())
    return bench::preset(ref, full_scale);
  if (!std::filesystem::exists(ref))
    throw std::invalid_argument("'" + ref + "' is neither a preset (" +
                                [&] {
                                  std::string s;
                                  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
                                  return s;
                                }() +
                                ") nor a config file");
  return bench::load_spec(ref);
}

void print_summary(const bench::ExperimentResult& result) {
  std::printf("%-14s %6s %6s %5s %4s  %-9s %-12s %-12s\n", "solver", "N", "M", "K", "J",
              "success", "mean_rmse", "mean_time_s");
  for (const auto& a : result.aggregates)
    std::printf("%-14s %6zu %6zu %5zu %4zu  %-9.3f %-12.4e %-12.4e\n", a.solver.c_str(), a.N,
                a.M, a.K, a.J, a.success_rate, a.mean_rmse, a.mean_time_s);
}

int run_command(const std::string& spec_ref, int trials, long long seed, bool seed_set,
                const std::string& out_dir, const std::string& format, int threads,
                const std::vector<std::string>& only_solvers, bool full_scale) {
  bench::ExperimentSpec spec = resolve_spec(spec_ref, full_scale);
  if (trials > 0) spec.trials = static_cast<std::size_t>(trials);
  if (seed_set) spec.base_seed = static_cast<std::uint64_t>(seed);
  if (!only_solvers.empty()) {
    std::vector<bench::SolverSetup> kept;
    for (const auto& want : only_solvers) {
      bool found = false;
      for (const auto& s : spec.solvers)
        if (s.label == want) {
          kept.push_back(s);
          found = true;
        }
      if (!found) {
        std::string have;
        for (const auto& s : spec.solvers) have += (have.empty() ? "" : ", ") + s.label;
        throw std::invalid_argument("solver '" + want + "' is not part of this experiment (" +
                                    have + ")");
      }
    }
    spec.solvers = std::move(kept);
  }

  const int nthreads = resolve_threads(threads);
  if (nthreads > 0) omp_set_num_threads(nthreads);

  std::fprintf(stderr, "running '%s': %zu grid point(s), %zu solver(s), %zu trial(s)\n",
               spec.name.c_str(), bench::expand_grid(spec).size(), spec.solvers.size(),
               spec.trials);
  const auto result = bench::run_experiment(spec, nthreads);

  std::vector<std::string> written;
  if (format == "csv" || format == "both") {
    auto w = bench::emit_report(result, bench::ReportFormat::Csv, out_dir);
    written.insert(written.end(), w.begin(), w.end());
  }
  if (format == "json" || format == "both") {
    auto w = bench::emit_report(result, bench::ReportFormat::Json, out_dir);
    written.insert(written.end(), w.begin(), w.end());
  }
  print_summary(result);
  for (const auto& p : written) std::fprintf(stderr, "wrote %s\n", p.c_str());
  return 0;
}

int trace_command(std::size_t n, std::size_t m, std::size_t k, std::size_t j,
                  unsigned long long seed, double rho, long long s_fixed, long long s_offset,
                  std::size_t iters, const std::string& backend, const std::string& out) {
  const auto inst = generate({n, m, k, j, seed});
  SolverConfig cfg;
  cfg.rho = rho;
  const long long s =
      s_fixed > 0 ? s_fixed : std::clamp<long long>(static_cast<long long>(k) + s_offset, 1,
                                                    static_cast<long long>(n));
  cfg.s = static_cast<std::size_t>(s);
  cfg.max_iter = iters;
  cfg.backend = backend == "smw" ? Backend::Smw : Backend::Plain;
  cfg.seed = bench::solver_seed(seed, "trace");
  const auto history = bench::residual_trace(inst, cfg);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (out != "-") {
    file.open(out);
    if (!file) throw std::runtime_error("trace: cannot open " + out);
    os = &file;
  }
  *os << "iter,primal_gap,iterate_change,multiplier_norm\n";
  char buf[128];
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i + 1, history[i].primal_gap,
                  history[i].iterate_change, history[i].multiplier_norm);
    *os << buf;
  }
  if (out != "-") std::fprintf(stderr, "wrote %s (%zu iterations)\n", out.c_str(), history.size());
  return 0;
}

int generate_command(std::size_t n, std::size_t m, std::size_t k, std::size_t j,
                     unsigned long long seed, const std::string& out_dir,
                     const std::string& prefix) {
  const auto inst = generate({n, m, k, j, seed});
  const auto jpath = dump_instance(inst, out_dir, prefix);
  std::printf("wrote %s (and phi/S_true/Y alongside)\n", jpath.c_str());
  return 0;
}

int presets_command(const std::string& dump) {
  if (!dump.empty()) {
    std::cout << bench::spec_to_json_text(bench::preset(dump)) << "\n";
    return 0;
  }
  for (const auto& name : bench::preset_names())
    std::printf("%-8s %s\n", name.c_str(), bench::preset_summary(name).c_str());
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"joint row-sparse recovery benchmark"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment (preset name or JSON config)");
  std::string spec_ref;
  int trials = 0;
  long long seed_ll = 0;
  std::string out_dir = ".";
  std::string format = "both";
  int threads = 0;
  std::vector<std::string> only_solvers;
  bool full_scale = false;
  run->add_option("spec", spec_ref, "preset name or path to a JSON experiment config")
      ->required();
  run->add_option("--trials", trials, "override the trial count");
  auto* seed_opt = run->add_option("--seed", seed_ll, "override the base seed");
  run->add_option("--out-dir", out_dir, "directory for reports (default .)");
  run->add_option("--format", format, "csv, json, or both (default both)")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_option("--threads", threads,
                  "worker threads (default: JOINTSPARSE_THREADS or the OpenMP default)");
  run->add_option("--solver", only_solvers, "restrict to the named solver (repeatable)");
  run->add_flag("--full-scale", full_scale, "use the original heavy sizes for table4/fig5");

  // trace
  auto* trace = app.add_subcommand("trace", "dump per-iteration residuals of one solve");
  std::size_t tn = 500, tm = 150, tk = 50, tj = 10, titers = 1000;
  unsigned long long tseed = 1;
  double trho = 1.0;
  long long ts = 0, ts_offset = 2;
  std::string tbackend = "plain", tout = "-";
  trace->add_option("--N", tn, "signal dimension (default 500)");
  trace->add_option("--M", tm, "measurement count (default 150)");
  trace->add_option("--K", tk, "ground-truth row sparsity (default 50)");
  trace->add_option("--J", tj, "snapshot count (default 10)");
  trace->add_option("--seed", tseed, "instance seed (default 1)");
  trace->add_option("--rho", trho, "penalty parameter (default 1)");
  trace->add_option("--s", ts, "row-sparsity budget (overrides --s-offset)");
  trace->add_option("--s-offset", ts_offset, "budget as K + offset (default 2)");
  trace->add_option("--iters", titers, "iteration count (default 1000)");
  trace->add_option("--backend", tbackend, "plain or smw")
      ->check(CLI::IsMember({"plain", "smw"}));
  trace->add_option("--out", tout, "output CSV path, or - for stdout");

  // generate
  auto* gen = app.add_subcommand("generate", "write one synthetic instance to disk");
  std::size_t gn = 500, gm = 150, gk = 50, gj = 10;
  unsigned long long gseed = 1;
  std::string gout = ".", gprefix;
  gen->add_option("--N", gn, "signal dimension (default 500)");
  gen->add_option("--M", gm, "measurement count (default 150)");
  gen->add_option("--K", gk, "ground-truth row sparsity (default 50)");
  gen->add_option("--J", gj, "snapshot count (default 10)");
  gen->add_option("--seed", gseed, "instance seed (default 1)");
  gen->add_option("--out-dir", gout, "output directory (default .)");
  gen->add_option("--prefix", gprefix, "filename prefix");

  // presets
  auto* pre = app.add_subcommand("presets", "list canned experiments");
  std::string dump;
  pre->add_option("--dump", dump, "print the named preset as a JSON config");

  std::vector<std::string> argv_owned = args;
  std::vector<const char*> argv;
  argv.push_back("jointsparse");
  for (const auto& a : argv_owned) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed())
      return run_command(spec_ref, trials, seed_ll, seed_opt->count() > 0, out_dir, format,
                         threads, only_solvers, full_scale);
    if (trace->parsed())
      return trace_command(tn, tm, tk, tj, tseed, trho, ts, ts_offset, titers, tbackend, tout);
    if (gen->parsed()) return generate_command(gn, gm, gk, gj, gseed, gout, gprefix);
    if (pre->parsed()) return presets_command(dump);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace jsr::cli
