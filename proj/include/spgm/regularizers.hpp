#pragma once

#include <vector>

#include "spgm/types.hpp"

namespace spgm {

// Minimax concave penalty, coordinate-separable. kappa > 0 is the slope at
// the origin, nu > 0 controls where the penalty flattens out (at |v| = nu*kappa
// the per-coordinate value saturates at nu*kappa^2/2).
struct McpParams {
  double kappa = 1.0;
  double nu = 1.0;
};

// Smoothly clipped absolute deviation penalty. kappa > 0 is the knot of the
// linear part, nu > 2 sets the second knot nu*kappa beyond which the value
// saturates at (nu+1)*kappa^2/2.
struct ScadParams {
  double kappa = 1.0;
  double nu = 3.7;
};

// Proximal step output: the mapped point and the envelope value it certifies,
//   envelope_value = ||w - zeta||^2 / (2 lambda) + g(zeta).
struct ProxResult {
  Vector zeta;
  double envelope_value = 0.0;
};

// Scalar pieces of the separable penalties. Exposed so tests and diagnostics
// can grid them directly.
double mcp_value(const McpParams& p, double v);
double scad_value(const ScadParams& p, double v);
double mcp_prox_scalar(const McpParams& p, double lambda, double w);
double scad_prox_scalar(const ScadParams& p, double lambda, double w);

// Non-smooth penalty g. Four kinds:
//   Zero            g = 0 (prox is the identity)
//   Mcp / Scad      the separable penalty applied to every coordinate
//   BlockComposite  sub-penalties on disjoint index blocks; coordinates not
//                   covered by any block are unpenalized
//
// Values are finite everywhere and Lipschitz; prox subproblems are solved in
// closed form per coordinate. When the scalar subproblem has several
// minimizers (the penalties are non-convex, so thresholds genuinely tie) the
// one with the smallest absolute value wins, and a +/- tie resolves to the
// non-negative point.
class Regularizer {
 public:
  enum class Kind { Zero, Mcp, Scad, BlockComposite };

  struct Block;  // defined below; holds a sub-regularizer by value

  static Regularizer zero(Index dim);
  static Regularizer mcp(const McpParams& params, Index dim);
  static Regularizer scad(const ScadParams& params, Index dim);
  static Regularizer block_composite(std::vector<Block> blocks, Index dim);

  Kind kind() const { return kind_; }
  Index dimension() const { return dim_; }

  double value(const Vector& w) const;

  // argmin_x ||w - x||^2 / (2 lambda) + g(x), with the tie rule above.
  ProxResult prox(double lambda, const Vector& w) const;

  // Envelope value at w, computed through the prox point.
  double moreau_envelope(double lambda, const Vector& w) const;

  // Lipschitz constant of g on R^dim: kappa*sqrt(dim) for the separable
  // penalties, 0 for Zero, the l2 combination of block constants otherwise.
  double lipschitz_constant() const;

  const McpParams& mcp_params() const;
  const ScadParams& scad_params() const;
  const std::vector<Block>& blocks() const;

 private:
  Regularizer(Kind kind, Index dim) : kind_(kind), dim_(dim) {}

  Kind kind_ = Kind::Zero;
  Index dim_ = 0;
  McpParams mcp_{};
  ScadParams scad_{};
  std::vector<Block> blocks_;
};

struct Regularizer::Block {
  Index offset = 0;
  Index length = 0;
  Regularizer reg;
};

}  // namespace spgm
