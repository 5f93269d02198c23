#include "spgm/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace spgm {

Vector SmoothOracle::component_gradient(Index, const Vector&) const {
  throw std::logic_error("SmoothOracle: component gradients unavailable in general sampling mode");
}

Vector SmoothOracle::sample_gradient(RngStream& rng, const Vector& w) const {
  const Index n = component_count();
  if (n < 1) {
    throw std::logic_error("SmoothOracle: general-mode oracles must override sample_gradient");
  }
  const Index j = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
  return component_gradient(j, w);
}

CompositeProblem::CompositeProblem(std::shared_ptr<const SmoothOracle> smooth, Regularizer reg,
                                   Constraint constraint)
    : smooth_(std::move(smooth)), reg_(std::move(reg)), constraint_(std::move(constraint)) {
  if (!smooth_) throw std::invalid_argument("CompositeProblem: smooth oracle is null");
  if (smooth_->dimension() != reg_.dimension() || reg_.dimension() != constraint_.dimension()) {
    throw std::invalid_argument("CompositeProblem: component dimensions disagree");
  }
  if (smooth_->component_count() < 0) {
    throw std::invalid_argument("CompositeProblem: negative component count");
  }
}

double evaluate_phi(const CompositeProblem& p, const Vector& w, double feas_tol) {
  if (!p.constraint().is_feasible(w, feas_tol)) {
    return std::numeric_limits<double>::infinity();
  }
  return p.smooth().value(w) + p.reg().value(w);
}

Vector counted_full_gradient(const SmoothOracle& f, OpCounters& c, const Vector& w) {
  Vector g = f.gradient(w);
  const Index n = f.component_count();
  const std::uint64_t cost = n > 0 ? static_cast<std::uint64_t>(n) : 1;
  c.gradient_calls += cost;
  c.raw_gradient_evals += cost;
  return g;
}

Vector counted_component_gradient(const SmoothOracle& f, OpCounters& c, Index j, const Vector& w) {
  const Index n = f.component_count();
  if (n >= 1 && (j < 0 || j >= n)) {
    throw std::invalid_argument("counted_component_gradient: index out of range");
  }
  Vector g = f.component_gradient(j, w);
  c.gradient_calls += 1;
  c.raw_gradient_evals += 1;
  return g;
}

Vector counted_sample_gradient(const SmoothOracle& f, OpCounters& c, RngStream& rng,
                               const Vector& w) {
  Vector g = f.sample_gradient(rng, w);
  c.gradient_calls += 1;
  c.raw_gradient_evals += 1;
  return g;
}

Vector minibatch_gradient(const SmoothOracle& f, OpCounters& c, RngStream& rng, const Vector& w,
                          Index batch_size) {
  if (batch_size < 1) throw std::invalid_argument("minibatch_gradient: batch size must be positive");
  Vector acc = f.sample_gradient(rng, w);
  for (Index k = 1; k < batch_size; ++k) acc += f.sample_gradient(rng, w);
  c.gradient_calls += static_cast<std::uint64_t>(batch_size);
  c.raw_gradient_evals += static_cast<std::uint64_t>(batch_size);
  return acc / static_cast<double>(batch_size);
}

ProxResult counted_prox_g(const Regularizer& g, OpCounters& c, double lambda, const Vector& w) {
  c.prox_g_calls += 1;
  return g.prox(lambda, w);
}

Vector counted_project(const Constraint& h, OpCounters& c, const Vector& w) {
  c.prox_h_calls += 1;
  return h.project(w);
}

}  // namespace spgm
