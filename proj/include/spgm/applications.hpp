#pragma once

#include "spgm/problem.hpp"

namespace spgm {

// C1 surrogate for the 0-1 classification loss: 1 below u = -1, the cubic
// (1/4)u^3 - (3/4)u + 1/2 on [-1, 1], 0 above u = 1.
double smoothed01_loss(double u);
double smoothed01_loss_derivative(double u);

// S-shaped utility of a return u: concave (1 - e^{-psi1 u})/psi1 in gains,
// convex (e^{psi2 u} - 1)/psi2 in losses. C1 at the origin with unit slope;
// psi1 > psi2 models loss aversion. max(psi1, psi2)-smooth.
double exp_utility(double u, double psi1, double psi2);
double exp_utility_derivative(double u, double psi1, double psi2);

// Nonnegative sparse principal component estimation: minimize the negated
// average squared projection -(1/2n) sum_j (w'x_j)^2 over the nonnegative
// unit ball, with a sparsity penalty. data holds one sample per column.
CompositeProblem build_pca(const Matrix& data, const McpParams& params);
CompositeProblem build_pca(const Matrix& data, const ScadParams& params);

// Binary classification with the smoothed 0-1 loss, per-sample mean-shift
// outlier variables, and a fairness constraint capping the empirical
// covariance between the sensitive attribute and the model output.
//
// features is attribute-by-sample; the sensitive_index row is removed from
// the model input and drives the constraint. The decision variable stacks
// [v; z]: v weighs the remaining rows (MCP penalty g1), z holds one outlier
// shift per sample (SCAD penalty g2). When the covariance direction is
// identically zero the constraint is vacuous and degrades to Free with a
// warning on stderr.
CompositeProblem build_fair_classification(const Matrix& features, const Vector& labels,
                                           Index sensitive_index, double covariance_cap,
                                           const McpParams& g1, const ScadParams& g2);

// Sparse long-only portfolio selection over n historical return observations
// (one per column): maximize average S-shaped utility, recast as minimizing
// its negation plus a sparsity penalty over {w >= 0, sum w <= 1}. The budget
// inequality is handled by the simplex projection's implicit slack
// coordinate, so the variable stays d-dimensional.
CompositeProblem build_portfolio(const Matrix& returns, double psi1, double psi2,
                                 const McpParams& params);
CompositeProblem build_portfolio(const Matrix& returns, double psi1, double psi2,
                                 const ScadParams& params);

}  // namespace spgm
