#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spgm/problem.hpp"
#include "spgm/solvers.hpp"

namespace spgm {

enum class ApplicationKind { Pca, FairClassification, Portfolio };

// Generator parameters for the built-in synthetic sparse-direction data.
struct SyntheticSpec {
  Index d = 50;
  Index n = 2000;
  double sparsity = 0.9;
  double noise_std = 0.1;
  std::uint64_t seed = 1;
};

// What to optimize. Data comes from a file (dataset_path) or the synthetic
// generator; fair classification needs labels and therefore always a file in
// the sparse text format. kappa = 0 means the documented default 1/d, filled
// in once the data dimension is known; nu = 0 picks the penalty's default.
struct ProblemSpec {
  ApplicationKind application = ApplicationKind::Pca;
  std::string dataset_path;
  SyntheticSpec synthetic;
  Index max_n = 5000;
  Index max_d = 784;

  std::string regularizer_kind = "mcp";  // "mcp" or "scad"
  double kappa = 0.0;
  double nu = 0.0;

  // Fair classification only: the attribute row, the correlation budget, and
  // the outlier-block penalty (SCAD over the per-sample shifts).
  Index sensitive_index = 0;
  double covariance_cap = 0.1;
  double z_kappa = 0.0;
  double z_nu = 0.0;

  // Portfolio only.
  double psi1 = 2.0;
  double psi2 = 2.0;
};

// One solver entry. The budget can be given directly (budget) or as a target
// number of gradient calls (budget_grad_calls), converted once the component
// count is known. The name keys the output files.
struct SolverRun {
  std::string name;
  SolverConfig config;
  std::optional<std::uint64_t> grad_call_target;
};

struct BenchmarkConfig {
  ProblemSpec problem;
  std::vector<SolverRun> solvers;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "bench-out";
  int threads = 1;  // 0 means one per hardware thread
};

const char* algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

// Parses the JSON documented in the README. Strict about keys: a misspelled
// field is an error, not a silent default. Throws std::invalid_argument.
BenchmarkConfig parse_benchmark_config(const std::string& json_text);
BenchmarkConfig load_benchmark_config(const std::string& path);

// Materializes the problem: loads or generates data, applies the subsample
// caps and parameter defaults.
CompositeProblem build_problem(const ProblemSpec& spec);

// Uniform feasible point for the problem's constraint: ones/sqrt(d) on the
// ball-orthant intersection, ones/d on the simplex, zero otherwise. Runs that
// do not set an initial point start here rather than at the solvers' built-in
// projected origin, which for the ball-constrained problems is a stationary
// point every solver would sit on forever.
Vector uniform_feasible_start(const CompositeProblem& problem);

// Writes one trace row per recorded iteration. The column set and order are
// fixed; readers may rely on them.
void write_trace_csv(const std::string& path, const RunReport& report);

// Runs every (solver, seed) pair in trajectory-recording mode, one CSV per
// run plus summary.csv, all written atomically into output_dir. Rows and
// files are deterministic for a fixed config apart from the elapsed_s column.
// Returns 0 on success; a failed run still flushes the others' results before
// the error propagates.
int run_benchmark(const BenchmarkConfig& config);

}  // namespace spgm
