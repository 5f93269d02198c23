#include "spgm/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "spgm/applications.hpp"
#include "spgm/datasets.hpp"
#include "spgm/majorizer.hpp"
#include "spgm/problem.hpp"
#include "spgm/projections.hpp"
#include "spgm/rng.hpp"

namespace spgm {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Accumulates the worst signed excess (checked value minus allowed bound) and
// remembers where it happened.
struct Worst {
  double excess = -std::numeric_limits<double>::infinity();
  std::uint64_t checks = 0;
  std::string where;

  void note(double e, const std::function<std::string()>& describe) {
    ++checks;
    if (e > excess) {
      excess = e;
      where = describe();
    }
  }
};

SuiteResult finish(std::string name, double tol, const Worst& w, Clock::time_point start) {
  SuiteResult r;
  r.name = std::move(name);
  r.tolerance = tol;
  r.checks = w.checks;
  r.max_violation = std::max(0.0, w.excess);
  r.passed = w.excess <= 0.0;
  r.seconds = seconds_since(start);
  r.detail = w.where;
  return r;
}

Vector random_vector(RngStream& rng, Index d, double scale) {
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = scale * (2.0 * rng.uniform_real() - 1.0);
  return v;
}

// Central differences on the smooth part, the reference for gradient checks.
Vector fd_gradient(const SmoothOracle& f, const Vector& w, double h) {
  Vector g(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    Vector wp = w;
    Vector wm = w;
    wp(i) += h;
    wm(i) -= h;
    g(i) = (f.value(wp) - f.value(wm)) / (2.0 * h);
  }
  return g;
}

// Exhaustive least-squares oracle for the probability simplex, valid for the
// small dimensions it is used at: try every support set, shift the selected
// coordinates by a common offset to restore the unit sum, keep the feasible
// candidate closest to w. The true projection has exactly this form, so the
// minimum over candidates is it.
Vector simplex_oracle(const Vector& w) {
  const Index d = w.size();
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (Index i = 0; i < d; ++i) {
      if (mask & (1u << i)) {
        sum += w(i);
        ++count;
      }
    }
    const double shift = (1.0 - sum) / count;
    Vector cand = Vector::Zero(d);
    bool ok = true;
    for (Index i = 0; i < d && ok; ++i) {
      if (mask & (1u << i)) {
        cand(i) = w(i) + shift;
        ok = cand(i) >= -1e-12;
      }
    }
    if (!ok) continue;
    const double dist = (cand - w).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = cand;
    }
  }
  return best;
}

struct ProxCombo {
  Regularizer reg;
  std::function<double(double)> g;
  double kappa = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  const char* kind = "";
};

std::vector<ProxCombo> prox_parameter_grid() {
  const double kappas[] = {0.1, 1.0, 3.0};
  const double lambdas[] = {0.05, 0.5, 2.0};
  const double mcp_nus[] = {1.0, 2.0, 4.0};
  const double scad_nus[] = {2.5, 3.7, 5.0};
  std::vector<ProxCombo> combos;
  for (double kappa : kappas) {
    for (double lambda : lambdas) {
      for (double nu : mcp_nus) {
        const McpParams p{kappa, nu};
        combos.push_back({Regularizer::mcp(p, 1), [p](double x) { return mcp_value(p, x); },
                          kappa, nu, lambda, "mcp"});
      }
      for (double nu : scad_nus) {
        const ScadParams p{kappa, nu};
        combos.push_back({Regularizer::scad(p, 1), [p](double x) { return scad_value(p, x); },
                          kappa, nu, lambda, "scad"});
      }
    }
  }
  return combos;
}

}  // namespace

SuiteResult prox_grid_suite(const DiagnosticsOptions& opts) {
  const auto start = Clock::now();
  const std::vector<ProxCombo> combos = prox_parameter_grid();

  // The combos are independent and the grid scans dominate the cost, so one
  // worker per core each takes combos off a shared counter. Inputs are seeded
  // per combo, making the result independent of the thread schedule.
  std::vector<Worst> per_combo(combos.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    std::vector<double> xs(static_cast<std::size_t>(opts.prox_grid_points));
    std::vector<double> gvals(xs.size());
    Vector point(1);
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= combos.size()) return;
      const ProxCombo& combo = combos[c];
      RngStream rng(opts.seed + 1000 * c);

      // Inputs live in [-range, range]; the prox point never exceeds its
      // input in magnitude, so a slightly wider fixed grid covers every
      // subproblem and the penalty values can be precomputed once per combo.
      const double range = 5.0 * combo.nu * combo.kappa + 5.0 * combo.lambda * combo.kappa;
      const double lo = -range - 1.0;
      const double step = 2.0 * (range + 1.0) / static_cast<double>(opts.prox_grid_points - 1);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = lo + static_cast<double>(i) * step;
        gvals[i] = combo.g(xs[i]);
      }
      const double inv2lam = 0.5 / combo.lambda;
      for (Index t = 0; t < opts.prox_inputs; ++t) {
        const double w = range * (2.0 * rng.uniform_real() - 1.0);
        // The subproblem objective only grows with distance from the interval
        // between 0 and w (the penalty is nondecreasing in |x| and the
        // quadratic pulls toward w), so the minimum over the whole grid is
        // attained on the grid points covering that interval. Scanning just
        // those, plus one point of margin on each side, yields exactly the
        // full-grid minimum at a fraction of the work.
        const double win_lo = std::min(0.0, w) - step;
        const double win_hi = std::max(0.0, w) + step;
        const std::size_t i_lo = static_cast<std::size_t>(
            std::max(0.0, std::floor((win_lo - lo) / step)));
        const std::size_t i_hi = std::min(
            xs.size() - 1, static_cast<std::size_t>(std::ceil((win_hi - lo) / step)));
        double grid_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = i_lo; i <= i_hi; ++i) {
          const double diff = xs[i] - w;
          const double q = gvals[i] + diff * diff * inv2lam;
          grid_min = std::min(grid_min, q);
        }
        double zeta;
        if (opts.prox_override) {
          zeta = opts.prox_override(combo.reg, combo.lambda, w);
        } else {
          point(0) = w;
          zeta = combo.reg.prox(combo.lambda, point).zeta(0);
        }
        const double at_zeta = combo.g(zeta) + (zeta - w) * (zeta - w) * inv2lam;
        per_combo[c].note(at_zeta - grid_min - opts.prox_tol, [&] {
          std::ostringstream os;
          os << "worst: " << combo.kind << " kappa=" << combo.kappa << " nu=" << combo.nu
             << " lambda=" << combo.lambda << " w=" << w;
          return os.str();
        });
      }
    }
  };

  const unsigned thread_count = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(combos.size())));
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  Worst worst;
  for (const Worst& w : per_combo) {
    worst.checks += w.checks;
    if (w.excess > worst.excess) {
      worst.excess = w.excess;
      worst.where = w.where;
    }
  }
  return finish("prox-grid", opts.prox_tol, worst, start);
}

SuiteResult projection_suite(const DiagnosticsOptions& opts) {
  const auto start = Clock::now();
  RngStream rng(opts.seed + 1);
  Worst worst;

  // Simplex vs. the exhaustive oracle at small dimension.
  for (Index t = 0; t < opts.projection_instances; ++t) {
    const Index d = 1 + static_cast<Index>(rng.uniform_index(6));
    const Vector w = random_vector(rng, d, 3.0);
    const Vector got = Constraint::simplex(d).project(w);
    const Vector want = simplex_oracle(w);
    worst.note((got - want).cwiseAbs().maxCoeff() - opts.projection_tol, [&] {
      std::ostringstream os;
      os << "worst: simplex oracle mismatch at d=" << d;
      return os.str();
    });
  }

  // Idempotence of every kind, nonexpansiveness of the plain metric ones (the
  // slack-augmented simplex map contracts in its own lifted metric instead).
  const Index d = 7;
  Vector direction = random_vector(rng, d, 1.0);
  direction(0) += 2.0;  // keep it clearly nonzero
  const Constraint kinds[] = {Constraint::free(d), Constraint::nonneg_ball(d),
                              Constraint::simplex(d), Constraint::halfspace_pair(direction, 0.7),
                              Constraint::simplex(d, true)};
  const char* names[] = {"free", "nonneg-ball", "simplex", "halfspace-pair", "simplex-augmented"};
  for (int c = 0; c < 5; ++c) {
    for (Index t = 0; t < opts.projection_instances; ++t) {
      const Vector w = random_vector(rng, d, 4.0);
      const Vector pw = kinds[c].project(w);
      const Vector ppw = kinds[c].project(pw);
      worst.note((ppw - pw).cwiseAbs().maxCoeff() - opts.idempotence_tol, [&] {
        return std::string("worst: idempotence of ") + names[c];
      });
      if (c < 4) {
        const Vector v = random_vector(rng, d, 4.0);
        const Vector pv = kinds[c].project(v);
        const double lhs = (pw - pv).norm();
        const double rhs = (w - v).norm();
        worst.note(lhs - rhs - opts.projection_tol, [&] {
          return std::string("worst: nonexpansiveness of ") + names[c];
        });
      }
    }
  }
  return finish("projection", opts.projection_tol, worst, start);
}

SuiteResult majorization_suite(const DiagnosticsOptions& opts) {
  const auto start = Clock::now();
  RngStream rng(opts.seed + 2);
  Worst worst;

  const Index d = opts.majorization_dim;
  const DatasetMatrix ds = generate_synthetic_pca(d, 3 * d, 0.7, opts.seed + 3, 0.25);
  const CompositeProblem p = build_pca(ds.x, McpParams{1.0 / static_cast<double>(d), 1.0});
  const double lambda = 0.1;
  const double smooth_bound =
      (p.smooth().smoothness().lipschitz_L + 1.0 / lambda) * (1.0 + 1e-6);

  for (Index a = 0; a < opts.majorization_anchors; ++a) {
    const Vector anchor = p.constraint().project(random_vector(rng, d, 1.0));
    const MajorizerState state = make_majorizer(p.reg(), lambda, anchor);

    // The surrogate touches the smoothed objective at its anchor...
    const double at_anchor = eval_majorizer(state, p.smooth().value(anchor), anchor);
    const double smoothed_at_anchor =
        p.smooth().value(anchor) + p.reg().moreau_envelope(lambda, anchor);
    worst.note(std::abs(at_anchor - smoothed_at_anchor) - opts.majorization_tol,
               [&] { return std::string("worst: anchored equality"); });

    Vector prev = anchor;
    Vector prev_grad = majorizer_gradient(state, p.smooth().gradient(anchor), anchor);
    for (Index t = 0; t < opts.majorization_points; ++t) {
      // ...and dominates it at every feasible point.
      const Vector w = p.constraint().project(anchor + random_vector(rng, d, 1.0));
      const double surrogate = eval_majorizer(state, p.smooth().value(w), w);
      const double smoothed = p.smooth().value(w) + p.reg().moreau_envelope(lambda, w);
      worst.note(smoothed - surrogate - opts.majorization_tol,
                 [&] { return std::string("worst: domination"); });

      // Its gradient obeys the advertised Lipschitz constant.
      const Vector grad = majorizer_gradient(state, p.smooth().gradient(w), w);
      const double dist = (w - prev).norm();
      if (dist > 1e-12) {
        worst.note((grad - prev_grad).norm() - smooth_bound * dist,
                   [&] { return std::string("worst: smoothness ratio"); });
      }
      prev = w;
      prev_grad = grad;
    }
  }
  return finish("majorization", opts.majorization_tol, worst, start);
}

SuiteResult moreau_suite(const DiagnosticsOptions& opts) {
  const auto start = Clock::now();
  RngStream rng(opts.seed + 4);
  Worst worst;

  const Index d = 4;
  const Regularizer regs[] = {
      Regularizer::mcp(McpParams{1.0, 2.0}, d), Regularizer::mcp(McpParams{0.3, 1.5}, d),
      Regularizer::scad(ScadParams{1.0, 3.7}, d), Regularizer::scad(ScadParams{0.5, 2.5}, d)};
  const double lambdas[] = {0.01, 0.1, 1.0};

  for (const Regularizer& g : regs) {
    const double l = g.lipschitz_constant();
    for (double lambda : lambdas) {
      for (Index t = 0; t < opts.moreau_points; ++t) {
        const Vector w = random_vector(rng, d, 4.0);
        const ProxResult pr = g.prox(lambda, w);
        const double genv = pr.envelope_value;
        const double gw = g.value(w);
        // The envelope lower-bounds g, the prox point stays within 2*l*lambda
        // of its input, and the smoothing gap is at most l^2*lambda/2.
        worst.note(genv - gw - opts.moreau_tol, [&] { return std::string("worst: envelope <= g"); });
        worst.note((w - pr.zeta).norm() - 2.0 * l * lambda - opts.moreau_tol,
                   [&] { return std::string("worst: prox displacement bound"); });
        worst.note(gw - genv - 0.5 * l * l * lambda - opts.moreau_tol,
                   [&] { return std::string("worst: smoothing gap bound"); });
      }
    }
  }
  return finish("moreau-envelope", opts.moreau_tol, worst, start);
}

SuiteResult mapping_monotonicity_suite(const DiagnosticsOptions& opts) {
  const auto start = Clock::now();
  RngStream rng(opts.seed + 5);
  Worst worst;

  const Index d = 6;
  Vector direction = random_vector(rng, d, 1.0);
  direction(2) += 1.5;
  const Constraint kinds[] = {Constraint::free(d), Constraint::nonneg_ball(d),
                              Constraint::simplex(d), Constraint::halfspace_pair(direction, 0.5)};
  const char* names[] = {"free", "nonneg-ball", "simplex", "halfspace-pair"};

  const Index per_kind = (opts.mapping_triples + 3) / 4;
  for (int c = 0; c < 4; ++c) {
    for (Index t = 0; t < per_kind; ++t) {
      const Vector w = random_vector(rng, d, 2.0);
      const Vector s = random_vector(rng, d, 3.0);
      const double gamma_small = std::pow(10.0, -3.0 + 4.0 * rng.uniform_real());
      const double gamma_big = gamma_small * std::pow(10.0, 2.0 * rng.uniform_real());
      const double big_norm = gradient_mapping(kinds[c], gamma_big, w, s).norm();
      const double small_norm = gradient_mapping(kinds[c], gamma_small, w, s).norm();
      worst.note(big_norm - small_norm - opts.mapping_tol,
                 [&] { return std::string("worst: ") + names[c]; });
    }
  }
  return finish("mapping-monotonicity", opts.mapping_tol, worst, start);
}

SuiteResult gradient_fd_suite(const DiagnosticsOptions& opts) {
  const auto start = Clock::now();
  RngStream rng(opts.seed + 6);
  Worst worst;

  const auto check_problem = [&](const char* label, const CompositeProblem& p, double h,
                                 const std::function<bool(const Vector&)>& usable) {
    Index done = 0;
    while (done < opts.fd_points) {
      const Vector w = p.constraint().project(random_vector(rng, p.dimension(), 1.0));
      if (usable && !usable(w)) continue;
      const Vector g = p.smooth().gradient(w);
      const Vector fd = fd_gradient(p.smooth(), w, h);
      const double rel = (g - fd).norm() / std::max(1.0, g.norm());
      worst.note(rel - opts.fd_rel_tol, [&] { return std::string("worst: ") + label; });
      ++done;
    }
  };

  const DatasetMatrix pca_ds = generate_synthetic_pca(8, 40, 0.5, opts.seed + 7, 0.3);
  check_problem("pca", build_pca(pca_ds.x, McpParams{0.125, 1.0}), 1e-5, nullptr);

  RngStream data_rng(opts.seed + 8);
  Matrix feats(5, 30);
  for (Index i = 0; i < feats.rows(); ++i) {
    for (Index j = 0; j < feats.cols(); ++j) feats(i, j) = 2.0 * data_rng.uniform_real() - 1.0;
  }
  Vector labels(30);
  for (Index j = 0; j < 30; ++j) labels(j) = data_rng.uniform_real() < 0.5 ? -1.0 : 1.0;
  check_problem("fair-classification",
                build_fair_classification(feats, labels, 0, 0.2, McpParams{0.3, 1.5},
                                          ScadParams{0.4, 3.7}),
                1e-6, nullptr);

  Matrix returns(6, 25);
  for (Index i = 0; i < returns.rows(); ++i) {
    for (Index j = 0; j < returns.cols(); ++j) returns(i, j) = 2.0 * data_rng.uniform_real() - 1.0;
  }
  const CompositeProblem portfolio = build_portfolio(returns, 2.0, 1.0, McpParams{0.2, 1.0});
  // The utility's curvature jumps at zero return; keep the difference stencil
  // away from that line.
  const auto off_kink = [&](const Vector& w) {
    for (Index j = 0; j < returns.cols(); ++j) {
      if (std::abs(returns.col(j).dot(w)) < 5e-3) return false;
    }
    return true;
  };
  check_problem("portfolio", portfolio, 1e-6, off_kink);

  return finish("gradient-fd", opts.fd_rel_tol, worst, start);
}

SuiteResult unbiasedness_suite(const DiagnosticsOptions& opts) {
  const auto start = Clock::now();
  RngStream rng(opts.seed + 9);
  Worst worst;

  const DatasetMatrix ds = generate_synthetic_pca(8, 40, 0.5, opts.seed + 10, 0.3);
  const CompositeProblem p = build_pca(ds.x, McpParams{0.125, 1.0});
  const Index d = p.dimension();
  OpCounters scratch;

  for (Index t = 0; t < opts.unbias_points; ++t) {
    const Vector w = p.constraint().project(random_vector(rng, d, 1.0));
    const Vector exact = p.smooth().gradient(w);
    Vector sum = Vector::Zero(d);
    Vector sumsq = Vector::Zero(d);
    for (Index k = 0; k < opts.unbias_draws; ++k) {
      const Vector g = minibatch_gradient(p.smooth(), scratch, rng, w, opts.unbias_batch);
      sum += g;
      sumsq += g.cwiseProduct(g);
    }
    const double K = static_cast<double>(opts.unbias_draws);
    for (Index i = 0; i < d; ++i) {
      const double mean = sum(i) / K;
      const double var = std::max(0.0, sumsq(i) / K - mean * mean) * K / (K - 1.0);
      const double band = opts.unbias_sigmas * std::sqrt(var / K) + 1e-12;
      worst.note(std::abs(mean - exact(i)) - band, [&] {
        std::ostringstream os;
        os << "worst: point " << t << " coordinate " << i;
        return os.str();
      });
    }
  }
  return finish("unbiasedness", 0.0, worst, start);
}

std::vector<SuiteResult> run_all_diagnostics(const DiagnosticsOptions& opts) {
  return {prox_grid_suite(opts),   projection_suite(opts),
          majorization_suite(opts), moreau_suite(opts),
          mapping_monotonicity_suite(opts), gradient_fd_suite(opts),
          unbiasedness_suite(opts)};
}

int report_diagnostics(std::ostream& out, const std::vector<SuiteResult>& results) {
  bool all_passed = true;
  out << "suite                   checks    max violation   tolerance   seconds   status\n";
  for (const SuiteResult& r : results) {
    all_passed = all_passed && r.passed;
    std::ostringstream line;
    line.setf(std::ios::left);
    line.width(24);
    line << r.name;
    line.width(10);
    line << r.checks;
    std::ostringstream nums;
    nums.precision(3);
    nums << std::scientific << r.max_violation;
    line.width(16);
    line << nums.str();
    nums.str("");
    nums << std::scientific << r.tolerance;
    line.width(12);
    line << nums.str();
    nums.str("");
    nums.precision(1);
    nums << std::fixed << r.seconds;
    line.width(10);
    line << nums.str();
    line << (r.passed ? "PASS" : "FAIL");
    out << line.str() << '\n';
    if (!r.passed && !r.detail.empty()) out << "    " << r.detail << '\n';
  }
  out << (all_passed ? "all diagnostic suites passed" : "DIAGNOSTIC FAILURES PRESENT") << '\n';
  return all_passed ? 0 : 1;
}

}  // namespace spgm
