#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "spgm/applications.hpp"
#include "spgm/benchmark.hpp"
#include "spgm/datasets.hpp"
#include "spgm/problem.hpp"
#include "spgm/projections.hpp"
#include "spgm/regularizers.hpp"
#include "spgm/solvers.hpp"

namespace py = pybind11;
using namespace spgm;

namespace {

Regularizer make_regularizer(const std::string& kind, double kappa, double nu, Index dim) {
  if (kind == "mcp") return Regularizer::mcp({kappa, nu > 0 ? nu : 1.0}, dim);
  if (kind == "scad") return Regularizer::scad({kappa, nu > 0 ? nu : 3.7}, dim);
  if (kind == "zero") return Regularizer::zero(dim);
  throw std::invalid_argument("unknown penalty kind '" + kind + "'");
}

Constraint make_constraint(const std::string& kind, Index dim) {
  if (kind == "free") return Constraint::free(dim);
  if (kind == "nonneg-ball") return Constraint::nonneg_ball(dim);
  if (kind == "simplex") return Constraint::simplex(dim);
  if (kind == "simplex-slack") return Constraint::simplex(dim, true);
  throw std::invalid_argument("unknown constraint kind '" + kind + "'");
}

py::dict report_to_dict(const CompositeProblem& p, const RunReport& rep) {
  py::dict out;
  out["final"] = rep.final_iterate;
  out["output"] = rep.theory_output;
  out["phi"] = evaluate_phi(p, rep.final_iterate);
  out["stationarity"] = rep.stationarity;
  out["gradient_calls"] = rep.counters.gradient_calls;
  out["prox_g_calls"] = rep.counters.prox_g_calls;
  out["prox_h_calls"] = rep.counters.prox_h_calls;
  out["raw_gradient_evals"] = rep.counters.raw_gradient_evals;
  out["r_index"] = rep.r_index;
  out["t_index"] = rep.t_index;

  py::dict sched;
  sched["lipschitz_L"] = rep.schedule.lipschitz_L;
  sched["lambda"] = rep.schedule.lambda;
  sched["l_lambda"] = rep.schedule.l_lambda;
  sched["gamma"] = rep.schedule.gamma;
  sched["gamma_bar"] = rep.schedule.gamma_bar;
  sched["batch_M"] = rep.schedule.batch_M;
  sched["inner_m"] = rep.schedule.inner_m;
  sched["batch_b"] = rep.schedule.batch_b;
  sched["epochs_S"] = rep.schedule.epochs_S;
  out["schedule"] = sched;

  py::list iters, grads, phis;
  for (const IterationTrace& row : rep.trace) {
    iters.append(row.iteration);
    grads.append(row.gradient_calls);
    phis.append(row.phi);
  }
  out["trace_iter"] = iters;
  out["trace_grad_calls"] = grads;
  out["trace_phi"] = phis;
  return out;
}

}  // namespace

PYBIND11_MODULE(_spgm, m) {
  m.doc() = "Stochastic proximal solvers for sparse composite objectives";

  m.def(
      "prox",
      [](const Vector& w, const std::string& kind, double kappa, double nu, double lam) {
        return make_regularizer(kind, kappa, nu, w.size()).prox(lam, w).zeta;
      },
      py::arg("w"), py::arg("kind") = "mcp", py::arg("kappa") = 1.0, py::arg("nu") = 0.0,
      py::arg("lam") = 1.0,
      "Proximal point of the chosen penalty (nu = 0 picks the penalty default).");

  m.def(
      "penalty_value",
      [](const Vector& w, const std::string& kind, double kappa, double nu) {
        return make_regularizer(kind, kappa, nu, w.size()).value(w);
      },
      py::arg("w"), py::arg("kind") = "mcp", py::arg("kappa") = 1.0, py::arg("nu") = 0.0);

  m.def(
      "project",
      [](const Vector& w, const std::string& kind) {
        return make_constraint(kind, w.size()).project(w);
      },
      py::arg("w"), py::arg("kind") = "simplex",
      "Map onto the feasible set: free, nonneg-ball, simplex, or simplex-slack.");

  m.def(
      "synthetic_pca",
      [](Index d, Index n, double sparsity, std::uint64_t seed, double noise_std) {
        Vector planted;
        DatasetMatrix ds = generate_synthetic_pca(d, n, sparsity, seed, noise_std, &planted);
        return py::make_tuple(ds.x, planted);
      },
      py::arg("d"), py::arg("n"), py::arg("sparsity") = 0.9, py::arg("seed") = 1,
      py::arg("noise_std") = 0.1,
      "Draw planted sparse-direction samples; returns (data, planted_direction).");

  m.def(
      "solve_pca",
      [](const Matrix& data, const std::string& algorithm, Index budget, std::uint64_t seed,
         double kappa, double nu, const std::string& penalty, double theta, double tau,
         py::object alpha, bool theory, Index trace_every, py::object w0) {
        CompositeProblem p = [&] {
          const double k = kappa > 0 ? kappa : 1.0 / static_cast<double>(data.rows());
          if (penalty == "scad") return build_pca(data, ScadParams{k, nu > 0 ? nu : 3.7});
          if (penalty == "mcp") return build_pca(data, McpParams{k, nu > 0 ? nu : 1.0});
          throw std::invalid_argument("penalty must be 'mcp' or 'scad'");
        }();
        SolverConfig cfg;
        cfg.algorithm = algorithm_from_name(algorithm);
        cfg.budget_N = budget;
        cfg.seed = seed;
        cfg.theta = theta;
        cfg.tau = tau;
        if (!alpha.is_none()) cfg.alpha = alpha.cast<double>();
        cfg.mode = theory ? RunMode::Theory : RunMode::Trace;
        cfg.trace_every = trace_every > 0 ? trace_every : budget;
        cfg.trace_stationarity = false;
        cfg.initial_point = w0.is_none() ? uniform_feasible_start(p) : w0.cast<Vector>();
        const RunReport rep = run_solver(p, cfg);
        return report_to_dict(p, rep);
      },
      py::arg("data"), py::arg("algorithm") = "mbspa", py::arg("budget") = 100,
      py::arg("seed") = 0, py::arg("kappa") = 0.0, py::arg("nu") = 0.0,
      py::arg("penalty") = "mcp", py::arg("theta") = 1.0 / 3.0, py::arg("tau") = 0.0,
      py::arg("alpha") = py::none(), py::arg("theory") = false, py::arg("trace_every") = 0,
      py::arg("w0") = py::none(),
      "Run one solver on the sparse principal-component problem built from data "
      "(columns are samples) and return the run report as a dict. Starts from "
      "w0 when given, else from the uniform feasible point.");

  m.def("run_benchmark_json",
        [](const std::string& json_text) { return run_benchmark(parse_benchmark_config(json_text)); },
        py::arg("json_text"),
        "Execute a benchmark described by a JSON config string; writes CSV files.");
}
