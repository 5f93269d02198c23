#pragma once

#include <optional>

#include "spgm/rng.hpp"
#include "spgm/types.hpp"

namespace spgm {

struct SmoothnessInfo {
  // Gradient Lipschitz constant of f; in finite-sum mode it must also bound
  // every component f_j, since the variance-reduced stepsizes lean on the
  // componentwise constant.
  double lipschitz_L = 0.0;
  // Upper bound on E ||grad F(w, xi) - grad f(w)||^2 where declared. Builders
  // that can only certify the bound on the feasible set say so in their docs.
  std::optional<double> variance_sigma_sq;
};

// Smooth term f of the composite objective. Two flavors share the interface:
//   finite-sum   f = (1/n) sum_j f_j, component_count() == n >= 1,
//                component_gradient available, sampling draws a uniform index
//   general      component_count() == 0, sample_gradient supplies unbiased
//                stochastic gradients directly
// value() and gradient() are always exact; stochastic solvers only touch them
// through counted wrappers so work accounting stays honest.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;

  virtual Index dimension() const = 0;
  virtual Index component_count() const = 0;
  virtual SmoothnessInfo smoothness() const = 0;

  virtual double value(const Vector& w) const = 0;
  virtual Vector gradient(const Vector& w) const = 0;

  // Finite-sum mode only; j in [0, n).
  virtual Vector component_gradient(Index j, const Vector& w) const;

  // Unbiased stochastic gradient. Default: uniform component draw.
  virtual Vector sample_gradient(RngStream& rng, const Vector& w) const;
};

}  // namespace spgm
