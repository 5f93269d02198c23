#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spgm/regularizers.hpp"
#include "spgm/types.hpp"

namespace spgm {

// Outcome of one diagnostic suite. max_violation is the worst amount by which
// a checked bound was exceeded (0 when every check held with room to spare),
// so a failing suite reports how badly it failed, not just that it did.
struct SuiteResult {
  std::string name;
  bool passed = false;
  std::uint64_t checks = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

// Knobs for every suite, sized by default for the full verification runs.
// Tests shrink the counts to keep the unit suite fast; the defaults are what
// `spgm diag` and the acceptance checks execute.
struct DiagnosticsOptions {
  // Closed-form prox vs. brute-force grid minimization of the scalar
  // subproblem, across the whole MCP/SCAD parameter grid.
  Index prox_grid_points = 1000000;
  Index prox_inputs = 200;
  double prox_tol = 1e-6;
  // Injectable prox under test; empty means the library implementation. Lets
  // mutation tests confirm the suite actually catches a corrupted prox.
  std::function<double(const Regularizer&, double lambda, double w)> prox_override;

  // Simplex projection vs. exhaustive small-d least-squares oracle, plus
  // idempotence and nonexpansiveness of every projection.
  Index projection_instances = 1000;
  double projection_tol = 1e-10;
  double idempotence_tol = 1e-12;

  // Smoothed-surrogate majorization: domination, anchored equality, and the
  // gradient smoothness ratio on a synthetic sparse-direction problem.
  Index majorization_anchors = 100;
  Index majorization_points = 100;
  Index majorization_dim = 20;
  double majorization_tol = 1e-9;

  // Envelope inequalities for the nonsmooth penalties.
  Index moreau_points = 1000;
  double moreau_tol = 1e-10;

  // Stepsize monotonicity of the constrained gradient mapping norm.
  Index mapping_triples = 1000;
  double mapping_tol = 1e-10;

  // Application gradients vs. central finite differences.
  Index fd_points = 50;
  double fd_rel_tol = 1e-5;

  // Empirical mean of the stochastic gradient vs. the exact gradient.
  Index unbias_draws = 100000;
  Index unbias_points = 10;
  Index unbias_batch = 5;
  double unbias_sigmas = 4.0;

  std::uint64_t seed = 20240801;
};

SuiteResult prox_grid_suite(const DiagnosticsOptions& opts = {});
SuiteResult projection_suite(const DiagnosticsOptions& opts = {});
SuiteResult majorization_suite(const DiagnosticsOptions& opts = {});
SuiteResult moreau_suite(const DiagnosticsOptions& opts = {});
SuiteResult mapping_monotonicity_suite(const DiagnosticsOptions& opts = {});
SuiteResult gradient_fd_suite(const DiagnosticsOptions& opts = {});
SuiteResult unbiasedness_suite(const DiagnosticsOptions& opts = {});

// Runs every suite above, in the order listed.
std::vector<SuiteResult> run_all_diagnostics(const DiagnosticsOptions& opts = {});

// Prints one row per suite and a closing verdict; returns 0 when all passed,
// 1 otherwise (the `diag` subcommand's exit status).
int report_diagnostics(std::ostream& out, const std::vector<SuiteResult>& results);

}  // namespace spgm
