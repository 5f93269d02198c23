#pragma once

#include "spgm/types.hpp"

namespace spgm {

// Exact Euclidean projection onto {u >= 0, sum(u) = target_sum} by the
// sort-and-threshold rule, O(d log d).
Vector project_simplex(const Vector& w, double target_sum = 1.0);

// Feasible set C of the constrained term (an indicator function whose prox is
// the projection). Four kinds:
//   Free           all of R^d, projection is the identity
//   NonnegBall     {w >= 0, ||w||_2 <= 1}
//   Simplex        {w >= 0, sum(w) = 1}; with the augmented-slack flag the
//                  variable is d-dimensional, a slack coordinate
//                  w_{d+1} = 1 - sum(w) is appended, the pair is projected
//                  onto the probability simplex in R^{d+1}, and the slack is
//                  dropped again. The feasible set is then
//                  {w >= 0, sum(w) <= 1}.
//   HalfspacePair  {w : |x_hat' w| <= c} for a fixed direction x_hat != 0 and
//                  budget c > 0
class Constraint {
 public:
  enum class Kind { Free, NonnegBall, Simplex, HalfspacePair };

  static Constraint free(Index dim);
  static Constraint nonneg_ball(Index dim);
  static Constraint simplex(Index dim, bool augmented_slack = false);
  static Constraint halfspace_pair(Vector x_hat, double c);

  Kind kind() const { return kind_; }
  Index dimension() const { return dim_; }
  bool augmented_slack() const { return augmented_slack_; }
  const Vector& x_hat() const;
  double budget_c() const;

  Vector project(const Vector& w) const;
  bool is_feasible(const Vector& w, double tol) const;

 private:
  Constraint(Kind kind, Index dim) : kind_(kind), dim_(dim) {}

  Kind kind_ = Kind::Free;
  Index dim_ = 0;
  bool augmented_slack_ = false;
  Vector x_hat_;
  double c_ = 0.0;
  double x_hat_sq_ = 0.0;
};

}  // namespace spgm
