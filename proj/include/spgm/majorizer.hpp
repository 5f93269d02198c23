#pragma once

#include "spgm/problem.hpp"

namespace spgm {

// Quadratic surrogate of the penalized objective built at an anchor point.
//
// With zeta the prox of g at the anchor and lambda the smoothing level, the
// model of the non-smooth part is
//   U(w) = ||w||^2/(2 lambda) - d_value - zeta'(w - anchor)/lambda,
//   d_value = anchor'zeta/lambda - ||zeta||^2/(2 lambda) - g(zeta),
// and E(w) = f(w) + U(w) majorizes f + (envelope of g), touches it at the
// anchor, and is (L + 1/lambda)-smooth. Solvers only ever need the gradient;
// eval_majorizer exists for tests and diagnostics.
struct MajorizerState {
  Vector anchor;
  Vector zeta;
  double lambda = 0.0;
  double d_value = 0.0;
};

MajorizerState make_majorizer(const Regularizer& g, double lambda, const Vector& anchor);

// E(w) given the caller-supplied f(w).
double eval_majorizer(const MajorizerState& s, double f_value, const Vector& w);

// grad E(w) = grad_f + (w - zeta)/lambda.
Vector majorizer_gradient(const MajorizerState& s, const Vector& grad_f, const Vector& w);

// P_gamma(w, s) = (w - project(w - gamma s)) / gamma; zero exactly at
// constrained stationary points of a model with gradient s at w.
Vector gradient_mapping(const Constraint& h, double gamma, const Vector& w, const Vector& s);

// Composite stationarity at an anchor point: map the anchor through the prox
// of g, form the surrogate gradient there, and measure the gradient mapping
// with diagnostic stepsize gamma_bar. Pure (never touches run counters).
double stationarity_measure(const CompositeProblem& p, const Vector& anchor, double lambda,
                            double gamma_bar);

}  // namespace spgm
