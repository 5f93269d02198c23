#include "spgm/solvers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace spgm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void validate_config(const SolverConfig& cfg) {
  require(cfg.budget_N >= 1, "SolverConfig: budget_N must be positive");
  require(cfg.trace_every >= 1, "SolverConfig: trace_every must be positive");
  require(std::isfinite(cfg.theta) && cfg.theta >= 0.0, "SolverConfig: theta must be nonnegative");
  require(std::isfinite(cfg.tau) && cfg.tau >= 0.0 && cfg.tau <= cfg.theta,
          "SolverConfig: tau must lie in [0, theta]");
  if (cfg.alpha) {
    require(std::isfinite(*cfg.alpha) && *cfg.alpha > 0.0, "SolverConfig: alpha must be positive");
  }
}

Vector starting_point(const CompositeProblem& p, const SolverConfig& cfg) {
  if (cfg.initial_point) {
    require(cfg.initial_point->size() == p.dimension(),
            "SolverConfig: initial point dimension mismatch");
    return *cfg.initial_point;
  }
  return p.constraint().project(Vector::Zero(p.dimension()));
}

// Debug invariant: the update must equal one backward step along the gradient
// mapping, w_next = w - gamma * P_gamma(w, dir), to within rounding.
void check_step_identity(const Constraint& h, double gamma, const Vector& w, const Vector& dir,
                         const Vector& w_next) {
  const Vector mapping = gradient_mapping(h, gamma, w, dir);
  const double gap = (w_next - (w - gamma * mapping)).cwiseAbs().maxCoeff();
  if (!(gap <= 1e-12)) {
    throw std::logic_error("solver step disagrees with its gradient-mapping form");
  }
}

// Shared tail: the prox image of the randomly indexed anchor plus the
// stationarity diagnostic there. Theory mode charges the output prox (it is
// the algorithm's last operation); Trace mode replays it off the books, and
// the diagnostics never touch the counters.
void finalize_report(RunReport& rep, const CompositeProblem& p, const Vector& anchor,
                     Vector final_iterate, Clock::time_point start) {
  const Schedule& s = rep.schedule;
  ProxResult out = rep.config.mode == RunMode::Theory
                       ? counted_prox_g(p.reg(), rep.counters, s.lambda, anchor)
                       : p.reg().prox(s.lambda, anchor);
  rep.theory_output = std::move(out.zeta);
  rep.stationarity = stationarity_measure(p, anchor, s.lambda, s.gamma_bar);
  rep.final_iterate = std::move(final_iterate);
  rep.wall_seconds = seconds_since(start);
}

struct TraceRecorder {
  const CompositeProblem& p;
  RunReport& rep;
  Clock::time_point start;
  bool enabled = false;

  void row(Index iteration, const Vector& w) {
    if (!enabled) return;
    IterationTrace r;
    r.iteration = iteration;
    r.gradient_calls = rep.counters.gradient_calls;
    r.prox_calls = rep.counters.prox_g_calls + rep.counters.prox_h_calls;
    r.phi = evaluate_phi(p, w);
    if (rep.config.trace_stationarity) {
      r.stationarity = stationarity_measure(p, w, rep.schedule.lambda, rep.schedule.gamma_bar);
    }
    r.elapsed_seconds = seconds_since(start);
    rep.trace.push_back(std::move(r));
  }
};

}  // namespace

Index ceil_int_pow(Index base, double exponent) {
  require(base >= 1, "ceil_int_pow: base must be positive");
  require(std::isfinite(exponent) && exponent >= 0.0,
          "ceil_int_pow: exponent must be nonnegative");
  const double p = std::pow(static_cast<double>(base), exponent);
  const double nearest = std::round(p);
  const double v = std::abs(p - nearest) <= 1e-9 * std::max(1.0, p) ? nearest : std::ceil(p);
  return static_cast<Index>(std::max(1.0, v));
}

double default_alpha(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Vrspa:
    case Algorithm::Vrspa2:
      return 1.0 / 3.0;
    case Algorithm::Mbspa:
    case Algorithm::DeterministicBaseline:
      break;
  }
  return 2.0 / 3.0;
}

Schedule derive_schedule(const CompositeProblem& problem, const SolverConfig& cfg) {
  validate_config(cfg);
  Schedule s;
  s.lipschitz_L = problem.smooth().smoothness().lipschitz_L;
  require(std::isfinite(s.lipschitz_L) && s.lipschitz_L >= 0.0,
          "derive_schedule: oracle must declare a finite smoothness constant");
  const double alpha = cfg.alpha.value_or(default_alpha(cfg.algorithm));
  const double n_budget = static_cast<double>(cfg.budget_N);
  switch (cfg.algorithm) {
    case Algorithm::Mbspa:
      s.batch_M = ceil_int_pow(cfg.budget_N, alpha);
      s.lambda = std::pow(n_budget, -cfg.theta);
      s.gamma_bar = std::pow(n_budget, -cfg.tau);
      break;
    case Algorithm::DeterministicBaseline:
      s.lambda = std::pow(n_budget, -cfg.theta);
      s.gamma_bar = std::pow(n_budget, -cfg.tau);
      break;
    case Algorithm::Vrspa:
    case Algorithm::Vrspa2: {
      const Index n = problem.smooth().component_count();
      require(n >= 1, "derive_schedule: variance reduction requires a finite-sum oracle");
      s.inner_m = ceil_int_pow(n, alpha);
      s.batch_b = s.inner_m * s.inner_m;
      s.epochs_S = (cfg.budget_N + s.inner_m - 1) / s.inner_m;
      const double sm = static_cast<double>(s.epochs_S) * static_cast<double>(s.inner_m);
      s.lambda = std::pow(sm, -cfg.theta);
      s.gamma_bar = std::pow(sm, -cfg.tau);
      break;
    }
  }
  s.l_lambda = s.lipschitz_L + 1.0 / s.lambda;
  s.gamma = cfg.algorithm == Algorithm::Vrspa ? 1.0 / (6.0 * s.l_lambda) : 1.0 / s.l_lambda;
  // tau <= theta makes the diagnostic stepsize dominate the solver stepsize;
  // the slack only absorbs rounding of the two pow() paths.
  if (!(s.gamma_bar >= s.gamma * (1.0 - 1e-12))) {
    throw std::invalid_argument("derive_schedule: diagnostic stepsize below the solver stepsize");
  }
  return s;
}

RunReport run_mbspa(const CompositeProblem& problem, const SolverConfig& config, RngStream& rng) {
  require(config.algorithm == Algorithm::Mbspa, "run_mbspa: config selects a different algorithm");
  RunReport rep;
  rep.config = config;
  rep.schedule = derive_schedule(problem, config);
  const Schedule& s = rep.schedule;
  const Index N = config.budget_N;
  const Index R =
      static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(N))) + 1;
  rep.r_index = R;

  const auto start = Clock::now();
  Vector w = starting_point(problem, config);
  Vector anchor = w;
  OpCounters& c = rep.counters;
  TraceRecorder trace{problem, rep, start, config.mode == RunMode::Trace};

  trace.row(0, w);
  const Index steps = config.mode == RunMode::Theory ? R - 1 : N;
  for (Index k = 1; k <= steps; ++k) {
    ProxResult zr = counted_prox_g(problem.reg(), c, s.lambda, w);
    Vector dir = minibatch_gradient(problem.smooth(), c, rng, w, s.batch_M);
    dir += (w - zr.zeta) / s.lambda;
    Vector w_next = counted_project(problem.constraint(), c, w - s.gamma * dir);
    if (config.check_mapping_identity) {
      check_step_identity(problem.constraint(), s.gamma, w, dir, w_next);
    }
    w = std::move(w_next);
    if (k + 1 == R) anchor = w;
    if (k % config.trace_every == 0 || k == steps) trace.row(k, w);
  }

  finalize_report(rep, problem, anchor, std::move(w), start);
  return rep;
}

RunReport run_vrspa(const CompositeProblem& problem, const SolverConfig& config, RngStream& rng) {
  require(config.algorithm == Algorithm::Vrspa || config.algorithm == Algorithm::Vrspa2,
          "run_vrspa: config selects a different algorithm");
  RunReport rep;
  rep.config = config;
  rep.schedule = derive_schedule(problem, config);
  const Schedule& s = rep.schedule;
  const Index n = problem.smooth().component_count();
  const Index d = problem.dimension();
  const Index R =
      static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(s.epochs_S))) + 1;
  const Index T =
      static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(s.inner_m))) + 1;
  rep.r_index = R;
  rep.t_index = T;

  const auto start = Clock::now();
  Vector w = starting_point(problem, config);
  Vector snapshot = w;
  Vector anchor = w;
  OpCounters& c = rep.counters;
  TraceRecorder trace{problem, rep, start, config.mode == RunMode::Trace};
  Matrix cache;
  if (config.cache_snapshot_gradients) cache.resize(d, n);

  trace.row(0, w);
  const Index epochs = config.mode == RunMode::Theory ? R : s.epochs_S;
  Index iter = 0;
  for (Index k = 1; k <= epochs; ++k) {
    // Snapshot gradient by fixed-order component sum, so the cached and
    // uncached paths produce bitwise-identical runs.
    Vector full = Vector::Zero(d);
    for (Index j = 0; j < n; ++j) {
      Vector gj = problem.smooth().component_gradient(j, snapshot);
      if (config.cache_snapshot_gradients) cache.col(j) = gj;
      full += gj;
    }
    full /= static_cast<double>(n);
    c.gradient_calls += static_cast<std::uint64_t>(n);
    c.raw_gradient_evals += static_cast<std::uint64_t>(n);

    w = snapshot;
    for (Index t = 1; t <= s.inner_m; ++t) {
      if (k == R && t == T) anchor = w;
      ProxResult zr = counted_prox_g(problem.reg(), c, s.lambda, w);
      Vector correction = Vector::Zero(d);
      for (Index i = 0; i < s.batch_b; ++i) {
        const Index j =
            static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        const Vector gw = problem.smooth().component_gradient(j, w);
        if (config.cache_snapshot_gradients) {
          correction += gw - cache.col(j);
        } else {
          correction += gw - problem.smooth().component_gradient(j, snapshot);
        }
      }
      c.gradient_calls += static_cast<std::uint64_t>(s.batch_b);
      c.raw_gradient_evals +=
          static_cast<std::uint64_t>(config.cache_snapshot_gradients ? s.batch_b : 2 * s.batch_b);
      Vector dir = correction / static_cast<double>(s.batch_b) + full + (w - zr.zeta) / s.lambda;
      Vector w_next = counted_project(problem.constraint(), c, w - s.gamma * dir);
      if (config.check_mapping_identity) {
        check_step_identity(problem.constraint(), s.gamma, w, dir, w_next);
      }
      w = std::move(w_next);
      ++iter;
      if (iter % config.trace_every == 0 || (k == epochs && t == s.inner_m)) trace.row(iter, w);
    }
    snapshot = w;
  }

  finalize_report(rep, problem, anchor, std::move(w), start);
  return rep;
}

RunReport run_baseline(const CompositeProblem& problem, const SolverConfig& config) {
  require(config.algorithm == Algorithm::DeterministicBaseline,
          "run_baseline: config selects a different algorithm");
  require(problem.smooth().component_count() >= 1,
          "run_baseline: requires a finite-sum oracle");
  RunReport rep;
  rep.config = config;
  rep.schedule = derive_schedule(problem, config);
  const Schedule& s = rep.schedule;

  const auto start = Clock::now();
  Vector w = starting_point(problem, config);
  OpCounters& c = rep.counters;
  TraceRecorder trace{problem, rep, start, config.mode == RunMode::Trace};

  trace.row(0, w);
  for (Index k = 1; k <= config.budget_N; ++k) {
    ProxResult zr = counted_prox_g(problem.reg(), c, s.lambda, w);
    Vector dir = counted_full_gradient(problem.smooth(), c, w);
    dir += (w - zr.zeta) / s.lambda;
    Vector w_next = counted_project(problem.constraint(), c, w - s.gamma * dir);
    if (config.check_mapping_identity) {
      check_step_identity(problem.constraint(), s.gamma, w, dir, w_next);
    }
    w = std::move(w_next);
    if (k % config.trace_every == 0 || k == config.budget_N) trace.row(k, w);
  }

  finalize_report(rep, problem, w, w, start);
  return rep;
}

RunReport run_solver(const CompositeProblem& problem, const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::Mbspa: {
      RngStream rng(config.seed);
      return run_mbspa(problem, config, rng);
    }
    case Algorithm::Vrspa:
    case Algorithm::Vrspa2: {
      RngStream rng(config.seed);
      return run_vrspa(problem, config, rng);
    }
    case Algorithm::DeterministicBaseline:
      return run_baseline(problem, config);
  }
  throw std::logic_error("run_solver: unknown algorithm");
}

std::uint64_t full_run_gradient_calls(Algorithm algorithm, Index budget_N, Index component_count,
                                      double alpha) {
  require(budget_N >= 1, "full_run_gradient_calls: budget_N must be positive");
  switch (algorithm) {
    case Algorithm::Mbspa:
      return static_cast<std::uint64_t>(budget_N) *
             static_cast<std::uint64_t>(ceil_int_pow(budget_N, alpha));
    case Algorithm::Vrspa:
    case Algorithm::Vrspa2: {
      require(component_count >= 1, "full_run_gradient_calls: finite sum required");
      const std::uint64_t n = static_cast<std::uint64_t>(component_count);
      const std::uint64_t m = static_cast<std::uint64_t>(ceil_int_pow(component_count, alpha));
      const std::uint64_t b = m * m;
      const std::uint64_t S = (static_cast<std::uint64_t>(budget_N) + m - 1) / m;
      return S * n + S * m * b;
    }
    case Algorithm::DeterministicBaseline:
      require(component_count >= 1, "full_run_gradient_calls: finite sum required");
      return static_cast<std::uint64_t>(budget_N) * static_cast<std::uint64_t>(component_count);
  }
  throw std::logic_error("full_run_gradient_calls: unknown algorithm");
}

Index budget_for_gradient_calls(Algorithm algorithm, Index component_count,
                                std::uint64_t target_calls, double alpha) {
  require(target_calls >= 1, "budget_for_gradient_calls: target must be positive");
  switch (algorithm) {
    case Algorithm::Mbspa: {
      // Cost N * ceil(N^alpha) is nondecreasing in N: binary search for the
      // largest budget under target.
      std::uint64_t lo = 1;
      std::uint64_t hi = 2;
      const std::uint64_t cap = std::uint64_t{1} << 31;
      auto cost = [&](std::uint64_t n_iter) {
        return full_run_gradient_calls(Algorithm::Mbspa, static_cast<Index>(n_iter),
                                       component_count, alpha);
      };
      if (cost(1) > target_calls) return 1;
      while (hi < cap && cost(hi) <= target_calls) {
        lo = hi;
        hi *= 2;
      }
      while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (cost(mid) <= target_calls) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return static_cast<Index>(lo);
    }
    case Algorithm::Vrspa:
    case Algorithm::Vrspa2: {
      require(component_count >= 1, "budget_for_gradient_calls: finite sum required");
      const std::uint64_t n = static_cast<std::uint64_t>(component_count);
      const std::uint64_t m = static_cast<std::uint64_t>(ceil_int_pow(component_count, alpha));
      const std::uint64_t per_epoch = n + m * m * m;
      const std::uint64_t S = std::max<std::uint64_t>(1, target_calls / per_epoch);
      return static_cast<Index>(S * m);
    }
    case Algorithm::DeterministicBaseline: {
      require(component_count >= 1, "budget_for_gradient_calls: finite sum required");
      const std::uint64_t n = static_cast<std::uint64_t>(component_count);
      return static_cast<Index>(std::max<std::uint64_t>(1, target_calls / n));
    }
  }
  throw std::logic_error("budget_for_gradient_calls: unknown algorithm");
}

}  // namespace spgm
