// Final verification gate: one check per shipped guarantee, each printing a
// single [PASS]/[FAIL] line with the measured numbers. Exit status is the
// number of failed checks, so the test runner needs no output parsing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spgm/applications.hpp"
#include "spgm/benchmark.hpp"
#include "spgm/datasets.hpp"
#include "spgm/diagnostics.hpp"
#include "spgm/majorizer.hpp"
#include "spgm/problem.hpp"
#include "spgm/solvers.hpp"

using namespace spgm;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void run_check(int id, const std::string& label, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome.passed = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!outcome.passed) ++failures;
  std::printf("[%s] %2d. %s (%s; %.1fs)\n", outcome.passed ? "PASS" : "FAIL", id, label.c_str(),
              outcome.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string describe(const SuiteResult& r) {
  std::ostringstream os;
  os << r.checks << " checks, max violation " << r.max_violation;
  if (!r.passed && !r.detail.empty()) os << ", " << r.detail;
  return os.str();
}

Outcome from_suite(const SuiteResult& r, double time_limit = 0.0) {
  Outcome o;
  o.passed = r.passed && (time_limit <= 0.0 || r.seconds <= time_limit);
  o.detail = describe(r);
  return o;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct CounterCase {
  const char* label;
  std::uint64_t got_grad, want_grad;
  std::uint64_t got_pg, want_pg;
  std::uint64_t got_ph, want_ph;
};

Outcome check_counters(const std::vector<CounterCase>& cases) {
  Outcome o;
  o.passed = true;
  std::ostringstream os;
  for (const CounterCase& c : cases) {
    const bool ok =
        c.got_grad == c.want_grad && c.got_pg == c.want_pg && c.got_ph == c.want_ph;
    o.passed = o.passed && ok;
    if (!ok) {
      os << c.label << ": got " << c.got_grad << "/" << c.got_pg << "/" << c.got_ph
         << ", want " << c.want_grad << "/" << c.want_pg << "/" << c.want_ph << "; ";
    }
  }
  if (o.passed) {
    os << cases.size() << " configurations, all counters exact";
  }
  o.detail = os.str();
  return o;
}

}  // namespace

int main() {
  DiagnosticsOptions full;  // defaults are the full verification sizes

  run_check(1, "closed-form prox attains the brute-force grid minimum",
            [&] { return from_suite(prox_grid_suite(full), 60.0); });

  run_check(2, "projections match the exhaustive oracle, idempotent, nonexpansive",
            [&] { return from_suite(projection_suite(full)); });

  run_check(3, "smoothed-surrogate majorization: domination, touching, smoothness",
            [&] { return from_suite(majorization_suite(full)); });

  run_check(4, "envelope inequalities for the nonsmooth penalties",
            [&] { return from_suite(moreau_suite(full)); });

  run_check(5, "gradient-mapping norm is monotone in the stepsize",
            [&] { return from_suite(mapping_monotonicity_suite(full)); });

  run_check(6, "application gradients match central finite differences",
            [&] { return from_suite(gradient_fd_suite(full)); });

  run_check(7, "work counters match their closed forms exactly", [&] {
    std::vector<CounterCase> cases;

    const DatasetMatrix small = generate_synthetic_pca(10, 50, 0.5, 21, 0.2);
    const CompositeProblem p_small = build_pca(small.x, McpParams{0.1, 1.0});
    for (const Index n_iter : {Index{100}, Index{1000}}) {
      SolverConfig cfg;
      cfg.algorithm = Algorithm::Mbspa;
      cfg.budget_N = n_iter;
      cfg.mode = RunMode::Trace;
      cfg.trace_every = n_iter;
      cfg.trace_stationarity = false;
      cfg.seed = 5;
      const RunReport rep = run_solver(p_small, cfg);
      const std::uint64_t batch =
          static_cast<std::uint64_t>(ceil_int_pow(n_iter, 2.0 / 3.0));
      const std::uint64_t n_u = static_cast<std::uint64_t>(n_iter);
      cases.push_back({"mbspa", rep.counters.gradient_calls, n_u * batch,
                       rep.counters.prox_g_calls, n_u, rep.counters.prox_h_calls, n_u});
    }

    const struct {
      Index n, budget;
    } vr_cases[] = {{125, 100}, {1000, 500}};
    for (const auto& vc : vr_cases) {
      const DatasetMatrix ds = generate_synthetic_pca(12, vc.n, 0.5, 22, 0.2);
      const CompositeProblem p = build_pca(ds.x, McpParams{0.1, 1.0});
      SolverConfig cfg;
      cfg.algorithm = Algorithm::Vrspa;
      cfg.budget_N = vc.budget;
      cfg.mode = RunMode::Trace;
      cfg.trace_every = vc.budget;
      cfg.trace_stationarity = false;
      cfg.seed = 6;
      const RunReport rep = run_solver(p, cfg);
      const std::uint64_t m = static_cast<std::uint64_t>(ceil_int_pow(vc.n, 1.0 / 3.0));
      const std::uint64_t b = m * m;
      const std::uint64_t S =
          static_cast<std::uint64_t>((vc.budget + static_cast<Index>(m) - 1) /
                                     static_cast<Index>(m));
      const std::uint64_t inner = S * m;
      cases.push_back({"vrspa", rep.counters.gradient_calls,
                       S * static_cast<std::uint64_t>(vc.n) + S * m * b,
                       rep.counters.prox_g_calls, inner, rep.counters.prox_h_calls, inner});
    }
    return check_counters(cases);
  });

  run_check(8, "stochastic runs reach the deterministic baseline under an equal call budget",
            [&] {
              const auto t0 = Clock::now();
              const Index d = 50;
              const Index n = 2000;
              const std::uint64_t budget_calls = 2000000;
              const DatasetMatrix ds = generate_synthetic_pca(d, n, 0.9, 2024, 0.1);
              const CompositeProblem p =
                  build_pca(ds.x, McpParams{1.0 / static_cast<double>(d), 1.0});

              // The all-zero point is a stationary point of this objective, so
              // every run starts from the same uniform feasible vector.
              const Vector w1 = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));

              SolverConfig base_cfg;
              base_cfg.algorithm = Algorithm::DeterministicBaseline;
              base_cfg.budget_N = budget_for_gradient_calls(Algorithm::DeterministicBaseline, n,
                                                            budget_calls, 1.0);
              base_cfg.mode = RunMode::Trace;
              base_cfg.trace_every = base_cfg.budget_N;
              base_cfg.trace_stationarity = false;
              base_cfg.initial_point = w1;
              const RunReport base = run_solver(p, base_cfg);
              const double base_phi = evaluate_phi(p, base.final_iterate);

              std::ostringstream os;
              os << "baseline phi " << base_phi;
              bool passed = true;
              for (const Algorithm alg :
                   {Algorithm::Mbspa, Algorithm::Vrspa, Algorithm::Vrspa2}) {
                SolverConfig cfg;
                cfg.algorithm = alg;
                cfg.budget_N =
                    budget_for_gradient_calls(alg, n, budget_calls, default_alpha(alg));
                cfg.mode = RunMode::Trace;
                cfg.trace_every = cfg.budget_N;
                cfg.trace_stationarity = false;
                cfg.initial_point = w1;

                const Schedule sched = derive_schedule(p, cfg);
                const double start_stat =
                    stationarity_measure(p, w1, sched.lambda, sched.gamma_bar);

                std::vector<double> phis, stats;
                for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                  cfg.seed = seed;
                  const RunReport rep = run_solver(p, cfg);
                  phis.push_back(evaluate_phi(p, rep.final_iterate));
                  stats.push_back(rep.stationarity);
                }
                const double med_phi = median(phis);
                const double med_stat = median(stats);
                const bool phi_ok = med_phi <= base_phi + 1e-3;
                const bool stat_ok = med_stat <= start_stat / 10.0;
                passed = passed && phi_ok && stat_ok;
                os << "; " << algorithm_name(alg) << " phi " << med_phi << (phi_ok ? "" : " (!)")
                   << ", stationarity " << start_stat << " -> " << med_stat
                   << (stat_ok ? "" : " (!)");
              }
              const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
              passed = passed && secs < 600.0;
              Outcome o;
              o.passed = passed;
              o.detail = os.str();
              return o;
            });

  run_check(9, "stochastic gradients are unbiased within four standard errors",
            [&] { return from_suite(unbiasedness_suite(full)); });

  run_check(10, "unit budget degenerates to one smoothing prox of the start point", [&] {
    const DatasetMatrix ds = generate_synthetic_pca(6, 12, 0.5, 23, 0.2);
    const CompositeProblem p = build_pca(ds.x, McpParams{0.2, 1.0});
    SolverConfig cfg;
    cfg.algorithm = Algorithm::Mbspa;
    cfg.budget_N = 1;
    cfg.mode = RunMode::Theory;
    cfg.seed = 9;
    const RunReport rep = run_solver(p, cfg);
    const Vector w1 = p.constraint().project(Vector::Zero(6));
    const Vector want = p.reg().prox(rep.schedule.lambda, w1).zeta;

    Outcome o;
    o.passed = rep.counters.gradient_calls == 0 && rep.counters.prox_g_calls == 1 &&
               rep.counters.prox_h_calls == 0 && (rep.final_iterate - w1).norm() == 0.0 &&
               (rep.theory_output - want).norm() == 0.0 && rep.schedule.lambda == 1.0;
    std::ostringstream os;
    os << "counters " << rep.counters.gradient_calls << "/" << rep.counters.prox_g_calls << "/"
       << rep.counters.prox_h_calls << ", output gap "
       << (rep.theory_output - want).norm();
    o.detail = os.str();
    return o;
  });

  if (failures == 0) {
    std::printf("all %d checks passed\n", 10);
  } else {
    std::printf("%d of 10 checks FAILED\n", failures);
  }
  return failures;
}
