#include "jsr/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "jsr/baselines.hpp"
#include "jsr/core.hpp"
#include "jsr/projection.hpp"

namespace jsr::bench {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string format_instance_id(const GridPoint& p, std::size_t trial, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "N%zu-M%zu-K%zu-J%zu-t%zu-%016llx", p.N, p.M, p.K, p.J, trial,
                static_cast<unsigned long long>(seed));
  return buf;
}

std::size_t resolve_sparsity(const SparsityRule& rule, const GridPoint& p,
                             const ProblemInstance& inst) {
  switch (rule.mode) {
    case SparsityMode::KPlus: {
      const std::int64_t raw = static_cast<std::int64_t>(p.K) + rule.offset;
      const std::int64_t hi = static_cast<std::int64_t>(p.N);
      return static_cast<std::size_t>(std::clamp<std::int64_t>(raw, 1, hi));
    }
    case SparsityMode::Fixed:
      if (rule.value == 0 || rule.value > p.N)
        throw std::invalid_argument("config: fixed sparsity value " +
                                    std::to_string(rule.value) + " outside [1, N=" +
                                    std::to_string(p.N) + "]");
      return rule.value;
    case SparsityMode::Budget:
      return std::min(sparsity_budget(p.M, inst.Y).s, p.N);
  }
  throw std::logic_error("resolve_sparsity: unknown mode");
}

TrialRecord run_one(const SolverSetup& st, const GridPoint& p, const ProblemInstance& inst,
                    double success_threshold, const std::string& instance_id,
                    std::size_t trial) {
  TrialRecord rec;
  rec.instance_id = instance_id;
  rec.solver = st.label;
  rec.N = p.N;
  rec.M = p.M;
  rec.K = p.K;
  rec.J = p.J;
  rec.seed = inst.spec.seed;
  rec.trial = trial;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    SolverResult res;
    switch (st.kind) {
      case SolverKind::AdmmL20: {
        SolverConfig cfg;
        cfg.rho = st.rho;
        cfg.s = resolve_sparsity(st.sparsity, p, inst);
        cfg.max_iter = st.max_iter;
        cfg.eps_primal = st.eps_primal;
        cfg.eps_change = st.eps_change;
        cfg.eps_dual = st.eps_dual;
        cfg.backend = st.backend;
        cfg.seed = solver_seed(inst.spec.seed, st.label);
        cfg.criterion_enabled = st.criterion_enabled;
        res = admm::solve(inst.phi, inst.Y, cfg);
        break;
      }
      case SolverKind::AdmmL21: {
        L21Config cfg;
        cfg.lambda = st.lambda;
        cfg.rho = st.l21_rho;
        cfg.max_iter = st.max_iter;
        cfg.eps_primal = st.eps_primal;
        cfg.eps_change = st.eps_change;
        cfg.eps_dual = st.eps_dual;
        cfg.seed = solver_seed(inst.spec.seed, st.label);
        cfg.criterion_enabled = st.criterion_enabled;
        res = admm_l21_solve(inst.phi, inst.Y, cfg);
        break;
      }
      case SolverKind::Somp:
        res = somp_solve(inst.phi, inst.Y, p.K);
        break;
      case SolverKind::Sniht:
        res = sniht_solve(inst.phi, inst.Y, p.K, st.max_iter);
        break;
    }
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.rmse = rmse(res.S_hat, inst.S_true);
    rec.success = rec.rmse < success_threshold;
    rec.iterations = res.iterations;
    rec.termination = res.termination == Termination::Converged ? "converged" : "max_iter";
  } catch (const std::exception& e) {
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.rmse = std::numeric_limits<double>::quiet_NaN();
    rec.success = false;
    rec.iterations = 0;
    rec.termination = std::string("error: ") + e.what();
  }
  return rec;
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("config: grid has no templates");
  std::vector<GridPoint> points;
  for (const auto& t : spec.grid) {
    if (t.N.empty() || t.M.empty() || t.K.empty() || t.J.empty())
      throw std::invalid_argument("config: grid template missing one of N, M, K, J");
    for (std::size_t n : t.N)
      for (std::size_t m : t.M)
        for (std::size_t k : t.K)
          for (std::size_t j : t.J) {
            if (m >= n)
              throw std::invalid_argument("config: grid point needs M < N (got M=" +
                                          std::to_string(m) + ", N=" + std::to_string(n) + ")");
            if (k > n)
              throw std::invalid_argument("config: grid point needs K <= N (got K=" +
                                          std::to_string(k) + ", N=" + std::to_string(n) + ")");
            if (n == 0 || m == 0 || k == 0 || j == 0)
              throw std::invalid_argument("config: grid values must be positive");
            points.push_back({n, m, k, j});
          }
  }
  return points;
}

std::uint64_t trial_seed(std::uint64_t base_seed, const GridPoint& p, std::size_t trial) {
  std::uint64_t h = 0;
  for (std::uint64_t v : {static_cast<std::uint64_t>(p.N), static_cast<std::uint64_t>(p.M),
                          static_cast<std::uint64_t>(p.K), static_cast<std::uint64_t>(p.J),
                          static_cast<std::uint64_t>(trial)})
    h = mix64(h ^ mix64(v));
  return base_seed ^ h;
}

std::uint64_t solver_seed(std::uint64_t instance_seed, const std::string& label) {
  std::uint64_t h = mix64(instance_seed);
  for (unsigned char c : label) h = mix64(h ^ c);
  return h;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int threads) {
  const auto points = expand_grid(spec);
  if (spec.solvers.empty()) throw std::invalid_argument("config: no solvers configured");
  if (spec.trials == 0) throw std::invalid_argument("config: trials must be positive");
  for (std::size_t a = 0; a < spec.solvers.size(); ++a)
    for (std::size_t b = a + 1; b < spec.solvers.size(); ++b)
      if (spec.solvers[a].label == spec.solvers[b].label)
        throw std::invalid_argument("config: duplicate solver label '" +
                                    spec.solvers[a].label + "'");

  const std::size_t n_solvers = spec.solvers.size();
  const std::size_t tasks = points.size() * spec.trials;
  if (threads <= 0) threads = omp_get_max_threads();

  ExperimentResult result;
  result.spec = spec;
  result.records.resize(tasks * n_solvers);
  result.instances.resize(tasks);

  // One task = one generated instance fed to every solver. Records land in
  // preassigned slots, so the schedule cannot change the output.
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1 && tasks > 1)
  for (std::size_t task = 0; task < tasks; ++task) {
    const std::size_t point_idx = task / spec.trials;
    const std::size_t trial = task % spec.trials;
    const GridPoint& p = points[point_idx];
    const std::uint64_t seed = trial_seed(spec.base_seed, p, trial);

    const ProblemInstance inst = generate({p.N, p.M, p.K, p.J, seed});
    const std::string id = format_instance_id(p, trial, seed);
    result.instances[task] =
        InstanceNote{id, p.N, p.M, p.K, p.J, seed, uniqueness_bound_holds(inst)};

    for (std::size_t s = 0; s < n_solvers; ++s)
      result.records[task * n_solvers + s] =
          run_one(spec.solvers[s], p, inst, spec.success_threshold, id, trial);
  }

  // Reorder to (grid point, solver, trial).
  std::vector<TrialRecord> ordered;
  ordered.reserve(result.records.size());
  for (std::size_t pi = 0; pi < points.size(); ++pi)
    for (std::size_t s = 0; s < n_solvers; ++s)
      for (std::size_t t = 0; t < spec.trials; ++t)
        ordered.push_back(std::move(result.records[(pi * spec.trials + t) * n_solvers + s]));
  result.records = std::move(ordered);

  // Aggregate per (grid point, solver), in the same order.
  for (std::size_t pi = 0; pi < points.size(); ++pi)
    for (std::size_t s = 0; s < n_solvers; ++s) {
      const TrialRecord* block = &result.records[(pi * n_solvers + s) * spec.trials];
      AggregateRow row;
      row.solver = spec.solvers[s].label;
      row.N = points[pi].N;
      row.M = points[pi].M;
      row.K = points[pi].K;
      row.J = points[pi].J;
      row.trials = spec.trials;
      std::vector<double> rmses, times;
      std::size_t successes = 0;
      for (std::size_t t = 0; t < spec.trials; ++t) {
        const TrialRecord& r = block[t];
        if (r.success) ++successes;
        if (std::isfinite(r.rmse)) rmses.push_back(r.rmse);
        times.push_back(r.time_s);
      }
      row.success_rate = static_cast<double>(successes) / static_cast<double>(spec.trials);
      row.mean_rmse = sample_mean(rmses);
      row.std_rmse = sample_std(rmses, row.mean_rmse);
      row.mean_time_s = sample_mean(times);
      row.std_time_s = sample_std(times, row.mean_time_s);
      result.aggregates.push_back(std::move(row));
    }
  return result;
}

std::vector<ResidualTriple> residual_trace(const ProblemInstance& inst, SolverConfig cfg) {
  cfg.criterion_enabled = false;
  return admm::solve(inst.phi, inst.Y, cfg).residual_history;
}

}  // namespace jsr::bench
