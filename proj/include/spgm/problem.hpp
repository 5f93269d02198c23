#pragma once

#include <memory>

#include "spgm/counters.hpp"
#include "spgm/oracle.hpp"
#include "spgm/projections.hpp"
#include "spgm/regularizers.hpp"

namespace spgm {

// The composite objective phi = f + g + indicator(C): a smooth oracle, a
// non-smooth penalty, and a feasible set, all over the same dimension.
class CompositeProblem {
 public:
  CompositeProblem(std::shared_ptr<const SmoothOracle> smooth, Regularizer reg,
                   Constraint constraint);

  const SmoothOracle& smooth() const { return *smooth_; }
  std::shared_ptr<const SmoothOracle> smooth_ptr() const { return smooth_; }
  const Regularizer& reg() const { return reg_; }
  const Constraint& constraint() const { return constraint_; }
  Index dimension() const { return reg_.dimension(); }

 private:
  std::shared_ptr<const SmoothOracle> smooth_;
  Regularizer reg_;
  Constraint constraint_;
};

// f(w) + g(w) when w is feasible (within feas_tol), +infinity otherwise.
// Iterates produced by a projection are feasible only up to rounding, hence
// the small default tolerance.
double evaluate_phi(const CompositeProblem& p, const Vector& w, double feas_tol = 1e-10);

// Counted oracle access. Every routine that does gradient work goes through
// these so OpCounters reflect it one-for-one: a component or sampled gradient
// costs 1, an exact full gradient costs n in finite-sum mode (1 in general
// mode, where it is a single oracle call).
Vector counted_full_gradient(const SmoothOracle& f, OpCounters& c, const Vector& w);
Vector counted_component_gradient(const SmoothOracle& f, OpCounters& c, Index j, const Vector& w);
Vector counted_sample_gradient(const SmoothOracle& f, OpCounters& c, RngStream& rng, const Vector& w);

// Average of batch_size independent stochastic gradients (uniform with
// replacement in finite-sum mode). Adds batch_size gradient calls.
Vector minibatch_gradient(const SmoothOracle& f, OpCounters& c, RngStream& rng, const Vector& w,
                          Index batch_size);

// Counted non-smooth steps.
ProxResult counted_prox_g(const Regularizer& g, OpCounters& c, double lambda, const Vector& w);
Vector counted_project(const Constraint& h, OpCounters& c, const Vector& w);

}  // namespace spgm
