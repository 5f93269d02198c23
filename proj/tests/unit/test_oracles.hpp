#pragma once

// Small hand-rolled oracles shared by the unit tests. Kept deliberately dumb
// so solver behavior can be predicted by hand.

#include <stdexcept>

#include "spgm/oracle.hpp"

namespace spgm_test {

// f_j(w) = (a_j / 2) ||w||^2, so f = (mean(a)/2) ||w||^2 and the component
// gradients a_j * w differ from the full gradient unless a is constant.
class ScaledQuadratic final : public spgm::SmoothOracle {
 public:
  ScaledQuadratic(spgm::Vector a, spgm::Index dim) : a_(std::move(a)), dim_(dim) {
    if (a_.size() < 1) throw std::invalid_argument("ScaledQuadratic: empty a");
  }

  spgm::Index dimension() const override { return dim_; }
  spgm::Index component_count() const override { return a_.size(); }

  spgm::SmoothnessInfo smoothness() const override {
    spgm::SmoothnessInfo s;
    s.lipschitz_L = a_.cwiseAbs().maxCoeff();
    return s;
  }

  double value(const spgm::Vector& w) const override { return 0.5 * a_.mean() * w.squaredNorm(); }

  spgm::Vector gradient(const spgm::Vector& w) const override { return a_.mean() * w; }

  spgm::Vector component_gradient(spgm::Index j, const spgm::Vector& w) const override {
    return a_(j) * w;
  }

 private:
  spgm::Vector a_;
  spgm::Index dim_;
};

// General sampling mode: f(w) = ||w||^2 / 2 with additive Gaussian gradient
// noise of known second moment sigma^2.
class NoisyQuadratic final : public spgm::SmoothOracle {
 public:
  NoisyQuadratic(spgm::Index dim, double sigma) : dim_(dim), sigma_(sigma) {}

  spgm::Index dimension() const override { return dim_; }
  spgm::Index component_count() const override { return 0; }

  spgm::SmoothnessInfo smoothness() const override {
    spgm::SmoothnessInfo s;
    s.lipschitz_L = 1.0;
    s.variance_sigma_sq = sigma_ * sigma_;
    return s;
  }

  double value(const spgm::Vector& w) const override { return 0.5 * w.squaredNorm(); }
  spgm::Vector gradient(const spgm::Vector& w) const override { return w; }

  spgm::Vector sample_gradient(spgm::RngStream& rng, const spgm::Vector& w) const override {
    spgm::Vector noise(dim_);
    const double scale = sigma_ / std::sqrt(static_cast<double>(dim_));
    for (spgm::Index i = 0; i < dim_; ++i) noise(i) = scale * rng.normal();
    return w + noise;
  }

 private:
  spgm::Index dim_;
  double sigma_;
};

}  // namespace spgm_test
