#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spgm/benchmark.hpp"
#include "spgm/diagnostics.hpp"
#include "spgm/projections.hpp"
#include "spgm/regularizers.hpp"

namespace {

spgm::DiagnosticsOptions quick_diagnostics() {
  spgm::DiagnosticsOptions o;
  o.prox_grid_points = 50001;
  o.prox_inputs = 25;
  o.projection_instances = 200;
  o.majorization_anchors = 15;
  o.majorization_points = 20;
  o.majorization_dim = 10;
  o.moreau_points = 150;
  o.mapping_triples = 200;
  o.fd_points = 10;
  o.unbias_draws = 5000;
  o.unbias_points = 4;
  return o;
}

void print_vector(const spgm::Vector& v) {
  char buf[40];
  for (spgm::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v(i));
    if (i > 0) std::cout << ' ';
    std::cout << buf;
  }
  std::cout << '\n';
}

int run_prox(const std::string& kind, double kappa, double nu, double lambda,
             const std::vector<double>& values) {
  const spgm::Index d = static_cast<spgm::Index>(values.size());
  spgm::Vector w(d);
  for (spgm::Index i = 0; i < d; ++i) w(i) = values[static_cast<std::size_t>(i)];

  if (kind == "mcp" || kind == "scad" || kind == "zero") {
    spgm::Regularizer reg = spgm::Regularizer::zero(d);
    if (kind == "mcp") reg = spgm::Regularizer::mcp({kappa, nu > 0 ? nu : 1.0}, d);
    if (kind == "scad") reg = spgm::Regularizer::scad({kappa, nu > 0 ? nu : 3.7}, d);
    print_vector(reg.prox(lambda, w).zeta);
    return 0;
  }
  // Constraint kinds: the prox of an indicator is the projection, so the same
  // subcommand serves both. lambda is irrelevant here and ignored.
  spgm::Constraint c = spgm::Constraint::free(d);
  if (kind == "nonneg-ball") {
    c = spgm::Constraint::nonneg_ball(d);
  } else if (kind == "simplex") {
    c = spgm::Constraint::simplex(d);
  } else if (kind == "simplex-slack") {
    c = spgm::Constraint::simplex(d, true);
  } else if (kind != "free") {
    std::cerr << "error: unknown kind '" << kind << "'\n";
    return 1;
  }
  print_vector(c.project(w));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic proximal solvers for sparse composite objectives"};
  app.require_subcommand(1);

  auto* bench = app.add_subcommand("bench", "Run the solver benchmark described by a config file");
  std::string config_path;
  bench->add_option("config", config_path, "JSON benchmark config (see README)")
      ->required()
      ->check(CLI::ExistingFile);

  auto* diag = app.add_subcommand("diag", "Run the verification suites and print a table");
  bool quick = false;
  std::uint64_t diag_seed = spgm::DiagnosticsOptions{}.seed;
  diag->add_flag("--quick", quick, "Shrink the suites for a fast smoke run");
  diag->add_option("--seed", diag_seed, "Seed for the randomized checks");

  auto* prox = app.add_subcommand(
      "prox", "Evaluate one prox or projection and print the result vector");
  std::string kind;
  double kappa = 1.0;
  double nu = 0.0;
  double lambda = 1.0;
  std::vector<double> values;
  prox->add_option("--kind", kind,
                   "mcp | scad | zero | free | nonneg-ball | simplex | simplex-slack")
      ->required();
  prox->add_option("--kappa", kappa, "Penalty slope at the origin (mcp/scad)");
  prox->add_option("--nu", nu, "Penalty width knob (mcp/scad); 0 picks the default");
  prox->add_option("--lambda", lambda, "Prox smoothing weight (mcp/scad/zero)");
  prox->add_option("values", values, "Input vector, one number per argument")
      ->required()
      ->expected(-1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      return spgm::run_benchmark(spgm::load_benchmark_config(config_path));
    }
    if (diag->parsed()) {
      spgm::DiagnosticsOptions opts = quick ? quick_diagnostics() : spgm::DiagnosticsOptions{};
      opts.seed = diag_seed;
      return spgm::report_diagnostics(std::cout, spgm::run_all_diagnostics(opts));
    }
    return run_prox(kind, kappa, nu, lambda, values);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
