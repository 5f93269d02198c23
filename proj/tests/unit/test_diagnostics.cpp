#include <sstream>

#include "doctest.h"
#include "spgm/diagnostics.hpp"

using namespace spgm;

namespace {

// Shrunk counts so the whole battery stays in unit-test territory; the
// defaults are exercised by the acceptance checks and `spgm diag`.
DiagnosticsOptions quick_options() {
  DiagnosticsOptions o;
  o.prox_grid_points = 20001;
  o.prox_inputs = 10;
  o.projection_instances = 100;
  o.majorization_anchors = 8;
  o.majorization_points = 12;
  o.majorization_dim = 8;
  o.moreau_points = 60;
  o.mapping_triples = 80;
  o.fd_points = 6;
  o.unbias_draws = 3000;
  o.unbias_points = 3;
  o.unbias_batch = 3;
  return o;
}

}  // namespace

TEST_CASE("diagnostic suites pass on the shipped implementation") {
  const DiagnosticsOptions opts = quick_options();
  const std::vector<SuiteResult> results = run_all_diagnostics(opts);
  REQUIRE(results.size() == 7);
  for (const SuiteResult& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.passed);
    CHECK(r.checks > 0);
  }

  // Reduced but nontrivial check counts, to catch suites silently skipping.
  CHECK(results[0].checks == 54 * 10);  // full parameter grid times inputs
  CHECK(results[3].checks == 4 * 3 * 60 * 3);  // regs x lambdas x points x inequalities

  std::ostringstream table;
  CHECK(report_diagnostics(table, results) == 0);
  CHECK(table.str().find("prox-grid") != std::string::npos);
  CHECK(table.str().find("all diagnostic suites passed") != std::string::npos);
  CHECK(table.str().find("FAIL") == std::string::npos);
}

TEST_CASE("prox suite flags a corrupted prox") {
  DiagnosticsOptions opts = quick_options();
  // Off by a factor in the smoothing weight: a classic transcription slip the
  // suite exists to catch.
  opts.prox_override = [](const Regularizer& reg, double lambda, double w) {
    Vector v(1);
    v << w;
    return reg.prox(2.0 * lambda, v).zeta(0);
  };
  const SuiteResult r = prox_grid_suite(opts);
  CHECK_FALSE(r.passed);
  CHECK(r.max_violation > r.tolerance);
  CHECK(r.detail.find("worst:") != std::string::npos);

  std::ostringstream table;
  CHECK(report_diagnostics(table, {r}) == 1);
  CHECK(table.str().find("FAIL") != std::string::npos);
}
