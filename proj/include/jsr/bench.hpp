#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jsr/admm.hpp"
#include "jsr/datagen.hpp"

namespace jsr::bench {

enum class SolverKind { AdmmL20, AdmmL21, Somp, Sniht };

// How the row-sparsity budget handed to the thresholded solver is derived
// from the instance.
enum class SparsityMode { KPlus, Fixed, Budget };

struct SparsityRule {
  SparsityMode mode = SparsityMode::KPlus;
  std::int64_t offset = 2;  // KPlus: s = K + offset, clamped to [1, N]
  std::size_t value = 0;    // Fixed
  bool operator==(const SparsityRule&) const = default;
};

struct SolverSetup {
  std::string label;  // unique name used in reports
  SolverKind kind = SolverKind::AdmmL20;
  // AdmmL20
  Backend backend = Backend::Plain;
  double rho = 1.0;
  SparsityRule sparsity{};
  // AdmmL21
  double lambda = 1e-6;
  double l21_rho = 1e-5;
  // shared
  std::size_t max_iter = 1000;
  double eps_primal = 1e-6;
  double eps_change = 1e-6;
  double eps_dual = 1e-6;
  bool criterion_enabled = true;
  bool operator==(const SolverSetup&) const = default;
};

// One template expands to the cartesian product of its axes; a spec's grid
// is the concatenation of its templates (linked axes go in one template per
// point).
struct GridTemplate {
  std::vector<std::size_t> N, M, K, J;
  bool operator==(const GridTemplate&) const = default;
};

struct ExperimentSpec {
  std::string name;
  std::vector<GridTemplate> grid;
  std::vector<SolverSetup> solvers;
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  double success_threshold = 1e-5;
  bool operator==(const ExperimentSpec&) const = default;
};

struct GridPoint {
  std::size_t N = 0, M = 0, K = 0, J = 0;
  bool operator==(const GridPoint&) const = default;
};

struct TrialRecord {
  std::string instance_id;
  std::string solver;
  std::size_t N = 0, M = 0, K = 0, J = 0;
  std::uint64_t seed = 0;  // instance seed
  std::size_t trial = 0;
  double rmse = 0.0;
  bool success = false;
  std::size_t iterations = 0;
  double time_s = 0.0;
  std::string termination;  // "converged" | "max_iter" | "error: <what>"
};

struct AggregateRow {
  std::string solver;
  std::size_t N = 0, M = 0, K = 0, J = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double mean_rmse = 0.0;  // over trials with a finite rmse
  double std_rmse = 0.0;   // sample std (n - 1)
  double mean_time_s = 0.0;
  double std_time_s = 0.0;
};

// Per-instance metadata kept in the JSON report.
struct InstanceNote {
  std::string instance_id;
  std::size_t N = 0, M = 0, K = 0, J = 0;
  std::uint64_t seed = 0;
  bool uniqueness_bound = false;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<TrialRecord> records;      // sorted by (grid point, solver, trial)
  std::vector<AggregateRow> aggregates;  // one row per (grid point, solver)
  std::vector<InstanceNote> instances;   // one row per (grid point, trial)
};

// Validates and expands the grid (templates in order, row-major within each).
std::vector<GridPoint> expand_grid(const ExperimentSpec& spec);

// Instance seed for a trial: base_seed XOR a splitmix64 digest of
// (N, M, K, J, trial). Reordering the grid does not move seeds around.
std::uint64_t trial_seed(std::uint64_t base_seed, const GridPoint& p, std::size_t trial);

// Seed for a solver's internal randomness, derived from the instance seed
// and the solver label so solvers never share or replay the instance stream.
std::uint64_t solver_seed(std::uint64_t instance_seed, const std::string& label);

// Runs every (grid point, trial, solver) combination. All solvers see the
// identical instance for a given (point, trial). threads <= 0 means use the
// OpenMP default; with more than one thread, trials run in parallel and the
// kernels inside each solve stay serial. A solver throwing is recorded as a
// failed trial, not a crash.
ExperimentResult run_experiment(const ExperimentSpec& spec, int threads = 0);

// Residual triples of one solve with early stopping disarmed (cfg.s and the
// rest are taken as given; criterion_enabled is forced off).
std::vector<ResidualTriple> residual_trace(const ProblemInstance& inst, SolverConfig cfg);

enum class ReportFormat { Csv, Json };

// CSV writes <name>_trials.csv and <name>_aggregates.csv; JSON writes
// <name>_report.json (spec echo, instances, records, aggregates). Returns
// the paths written. I/O failures throw std::runtime_error.
std::vector<std::string> emit_report(const ExperimentResult& result, ReportFormat format,
                                     const std::string& out_dir);

// Inverse of the JSON report, field for field.
ExperimentResult load_report_json(const std::string& path);

// Reads back a <name>_trials.csv written by emit_report.
std::vector<TrialRecord> read_trials_csv(const std::string& path);

// Experiment spec <-> JSON config text.
ExperimentSpec parse_spec_text(const std::string& json_text);
ExperimentSpec load_spec(const std::string& path);
std::string spec_to_json_text(const ExperimentSpec& spec);

// Canned experiment definitions (table2, table3, table4, fig2..fig5).
// full_scale switches the heavy presets to their original sizes.
std::vector<std::string> preset_names();
ExperimentSpec preset(const std::string& name, bool full_scale = false);
std::string preset_summary(const std::string& name);

}  // namespace jsr::bench
