#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spgm/majorizer.hpp"

namespace spgm {

enum class Algorithm { Mbspa, Vrspa, Vrspa2, DeterministicBaseline };
enum class RunMode { Theory, Trace };

// ceil(base^exponent) as an integer, with a guard for pow() landing an ulp
// above an exact power (1000^(2/3) must give 100, not 101).
Index ceil_int_pow(Index base, double exponent);

// 2/3 for the minibatch solver and the baseline, 1/3 for the variance-reduced
// solvers.
double default_alpha(Algorithm algorithm);

struct SolverConfig {
  Algorithm algorithm = Algorithm::Mbspa;
  Index budget_N = 1;
  double theta = 1.0 / 3.0;
  // Schedule exponent; unset means default_alpha(algorithm).
  std::optional<double> alpha;
  // Diagnostic stepsize exponent; must satisfy tau <= theta.
  double tau = 0.0;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::Trace;
  Index trace_every = 1;
  // Compute the stationarity column of the trace. Costs a full gradient per
  // recorded row (never counted), so heavy runs pair this with a large
  // trace_every.
  bool trace_stationarity = true;
  // Debug invariant: after every update, re-derive the step from the gradient
  // mapping and require agreement to 1e-12.
  bool check_mapping_identity = false;
  // Hold all n snapshot component gradients in a d-by-n matrix per epoch
  // (variance-reduced solvers only). Off trades memory for recomputation; the
  // iterates are identical either way, only raw_gradient_evals differs.
  bool cache_snapshot_gradients = true;
  // Defaults to the projection of the origin onto the constraint.
  std::optional<Vector> initial_point;
};

// Everything the stepsize schedules derive from (config, problem); a pure
// function of the two. Fields that do not apply to an algorithm stay zero.
struct Schedule {
  double lipschitz_L = 0.0;
  double lambda = 0.0;     // smoothing level
  double l_lambda = 0.0;   // lipschitz_L + 1/lambda
  double gamma = 0.0;      // stepsize
  double gamma_bar = 0.0;  // diagnostic mapping stepsize, always >= gamma
  Index batch_M = 0;       // minibatch size (minibatch solver)
  Index inner_m = 0;       // inner steps per epoch (variance-reduced)
  Index batch_b = 0;       // correction pairs per inner step
  Index epochs_S = 0;      // outer epochs
};

Schedule derive_schedule(const CompositeProblem& problem, const SolverConfig& config);

struct IterationTrace {
  Index iteration = 0;
  std::uint64_t gradient_calls = 0;
  std::uint64_t prox_calls = 0;  // prox_g + prox_h
  double phi = 0.0;
  std::optional<double> stationarity;
  double elapsed_seconds = 0.0;
};

struct RunReport {
  Vector final_iterate;
  // Image of the randomly indexed iterate under the prox of g; what the
  // convergence guarantees are stated for.
  Vector theory_output;
  // Gradient-mapping norm at theory_output with stepsize gamma_bar.
  double stationarity = 0.0;
  OpCounters counters;
  std::vector<IterationTrace> trace;  // empty outside Trace mode
  Schedule schedule;
  SolverConfig config;
  Index r_index = 0;  // pre-drawn random stop index (stochastic solvers)
  Index t_index = 0;  // pre-drawn inner stop index (variance-reduced only)
  double wall_seconds = 0.0;
};

// Minibatch smoothed proximal iteration. Theory mode runs to the pre-drawn
// random index R and stops; Trace mode runs the full budget and records the
// trajectory, still reporting the same R-indexed output (R is drawn before
// the loop from the same stream, so both modes agree bitwise).
RunReport run_mbspa(const CompositeProblem& problem, const SolverConfig& config, RngStream& rng);

// Variance-reduced variant: per epoch, one snapshot full gradient then inner
// steps whose minibatch is corrected against the snapshot. Requires a
// finite-sum oracle. Vrspa2 is the same loop with the larger minibatch-solver
// stepsize.
RunReport run_vrspa(const CompositeProblem& problem, const SolverConfig& config, RngStream& rng);

// Deterministic full-gradient comparator on the same smoothed surrogate, with
// the minibatch solver's schedule. Runs the whole budget in either mode.
RunReport run_baseline(const CompositeProblem& problem, const SolverConfig& config);

// Seeds a stream from config.seed and dispatches on config.algorithm.
RunReport run_solver(const CompositeProblem& problem, const SolverConfig& config);

// Gradient calls a full Trace-mode run will consume. component_count is
// ignored by the minibatch solver.
std::uint64_t full_run_gradient_calls(Algorithm algorithm, Index budget_N, Index component_count,
                                      double alpha);

// Largest budget_N whose full-run gradient count stays within target_calls
// (for the variance-reduced solvers, the largest whole-epoch budget S*m).
Index budget_for_gradient_calls(Algorithm algorithm, Index component_count,
                                std::uint64_t target_calls, double alpha);

}  // namespace spgm
