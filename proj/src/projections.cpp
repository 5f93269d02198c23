#include "spgm/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spgm {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_input(const Vector& w, Index dim, const char* where) {
  if (w.size() != dim) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  if (!w.allFinite()) throw std::invalid_argument(std::string(where) + ": non-finite input");
}

}  // namespace

Vector project_simplex(const Vector& w, double target_sum) {
  require(w.size() >= 1, "project_simplex: empty input");
  require(w.allFinite(), "project_simplex: non-finite input");
  require(std::isfinite(target_sum) && target_sum > 0.0,
          "project_simplex: target sum must be positive");

  const Index d = w.size();
  std::vector<double> u(w.data(), w.data() + d);
  std::sort(u.begin(), u.end(), std::greater<double>());

  // Largest k with u_(k) above the running threshold; k = 1 always qualifies.
  double cum = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < d; ++k) {
    cum += u[static_cast<std::size_t>(k)];
    const double t = (cum - target_sum) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  return (w.array() - theta).max(0.0).matrix();
}

Constraint Constraint::free(Index dim) {
  require(dim >= 1, "Constraint::free: dimension must be positive");
  return Constraint(Kind::Free, dim);
}

Constraint Constraint::nonneg_ball(Index dim) {
  require(dim >= 1, "Constraint::nonneg_ball: dimension must be positive");
  return Constraint(Kind::NonnegBall, dim);
}

Constraint Constraint::simplex(Index dim, bool augmented_slack) {
  require(dim >= 1, "Constraint::simplex: dimension must be positive");
  Constraint c(Kind::Simplex, dim);
  c.augmented_slack_ = augmented_slack;
  return c;
}

Constraint Constraint::halfspace_pair(Vector x_hat, double c) {
  require(x_hat.size() >= 1, "Constraint::halfspace_pair: empty direction");
  require(x_hat.allFinite(), "Constraint::halfspace_pair: non-finite direction");
  require(std::isfinite(c) && c > 0.0, "Constraint::halfspace_pair: budget must be positive");
  const double sq = x_hat.squaredNorm();
  require(sq > 0.0, "Constraint::halfspace_pair: direction must be nonzero");
  Constraint out(Kind::HalfspacePair, x_hat.size());
  out.x_hat_ = std::move(x_hat);
  out.c_ = c;
  out.x_hat_sq_ = sq;
  return out;
}

const Vector& Constraint::x_hat() const {
  if (kind_ != Kind::HalfspacePair) throw std::logic_error("Constraint: no direction stored");
  return x_hat_;
}

double Constraint::budget_c() const {
  if (kind_ != Kind::HalfspacePair) throw std::logic_error("Constraint: no budget stored");
  return c_;
}

Vector Constraint::project(const Vector& w) const {
  check_input(w, dim_, "Constraint::project");
  switch (kind_) {
    case Kind::Free:
      return w;
    case Kind::NonnegBall: {
      Vector p = w.cwiseMax(0.0);
      const double n = p.norm();
      if (n > 1.0) p /= n;
      return p;
    }
    case Kind::Simplex: {
      if (!augmented_slack_) return project_simplex(w, 1.0);
      Vector lifted(dim_ + 1);
      lifted.head(dim_) = w;
      lifted(dim_) = 1.0 - w.sum();
      return project_simplex(lifted, 1.0).head(dim_);
    }
    case Kind::HalfspacePair: {
      const double t = x_hat_.dot(w);
      if (t > c_) return w - ((t - c_) / x_hat_sq_) * x_hat_;
      if (-t > c_) return w - ((t + c_) / x_hat_sq_) * x_hat_;
      return w;
    }
  }
  return w;
}

bool Constraint::is_feasible(const Vector& w, double tol) const {
  check_input(w, dim_, "Constraint::is_feasible");
  require(std::isfinite(tol) && tol >= 0.0, "Constraint::is_feasible: tolerance must be non-negative");
  switch (kind_) {
    case Kind::Free:
      return true;
    case Kind::NonnegBall:
      return w.minCoeff() >= -tol && w.norm() <= 1.0 + tol;
    case Kind::Simplex:
      if (augmented_slack_) return w.minCoeff() >= -tol && w.sum() <= 1.0 + tol;
      return w.minCoeff() >= -tol && std::abs(w.sum() - 1.0) <= tol;
    case Kind::HalfspacePair:
      return std::abs(x_hat_.dot(w)) <= c_ + tol;
  }
  return false;
}

}  // namespace spgm
