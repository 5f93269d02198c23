#include "spgm/applications.hpp"

#include <cmath>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spgm {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_psis(double psi1, double psi2) {
  require(std::isfinite(psi1) && psi1 > 0.0, "exp_utility: psi1 must be positive");
  require(std::isfinite(psi2) && psi2 > 0.0, "exp_utility: psi2 must be positive");
}

void check_data(const Matrix& m, const char* msg) {
  require(m.rows() >= 1 && m.cols() >= 1 && m.allFinite(), msg);
}

// f_j(w) = -(1/2)(w'x_j)^2, so the average recovers the negated sample
// second moment of the projections.
class PcaOracle final : public SmoothOracle {
 public:
  explicit PcaOracle(Matrix data) : data_(std::move(data)) {
    double worst = 0.0;
    double fourth = 0.0;
    for (Index j = 0; j < data_.cols(); ++j) {
      const double sq = data_.col(j).squaredNorm();
      worst = std::max(worst, sq);
      fourth += sq * sq;
    }
    lipschitz_ = worst;
    // ||grad f_j(w)|| <= ||x_j||^2 on the unit ball, so the sample fourth
    // moment bounds the sampling variance over the feasible set.
    variance_ = fourth / static_cast<double>(data_.cols());
  }

  Index dimension() const override { return data_.rows(); }
  Index component_count() const override { return data_.cols(); }
  SmoothnessInfo smoothness() const override { return {lipschitz_, variance_}; }

  double value(const Vector& w) const override {
    return -(data_.transpose() * w).squaredNorm() / (2.0 * static_cast<double>(data_.cols()));
  }

  Vector gradient(const Vector& w) const override {
    return -(data_ * (data_.transpose() * w)) / static_cast<double>(data_.cols());
  }

  Vector component_gradient(Index j, const Vector& w) const override {
    return -(data_.col(j).dot(w)) * data_.col(j);
  }

 private:
  Matrix data_;
  double lipschitz_ = 0.0;
  double variance_ = 0.0;
};

// f_j(v, z) = loss(y_j (v'x_j + z_j)) over the stacked variable [v; z]; each
// component touches all of v but only its own outlier coordinate.
class FairOracle final : public SmoothOracle {
 public:
  FairOracle(Matrix xs, Vector labels) : xs_(std::move(xs)), labels_(std::move(labels)) {
    double worst = 0.0;
    for (Index j = 0; j < xs_.cols(); ++j) {
      worst = std::max(worst, xs_.col(j).squaredNorm() + 1.0);
    }
    // The loss curvature never exceeds 3/2 and its slope never exceeds 3/4;
    // composing with the affine map [x_j; 1] gives both constants.
    lipschitz_ = 1.5 * worst;
    variance_ = (9.0 / 16.0) * worst;
  }

  Index dimension() const override { return xs_.rows() + xs_.cols(); }
  Index component_count() const override { return xs_.cols(); }
  SmoothnessInfo smoothness() const override { return {lipschitz_, variance_}; }

  double value(const Vector& w) const override {
    const Index dv = xs_.rows();
    const Index n = xs_.cols();
    const auto v = w.head(dv);
    double total = 0.0;
    for (Index j = 0; j < n; ++j) {
      total += smoothed01_loss(labels_(j) * (xs_.col(j).dot(v) + w(dv + j)));
    }
    return total / static_cast<double>(n);
  }

  Vector gradient(const Vector& w) const override {
    const Index dv = xs_.rows();
    const Index n = xs_.cols();
    const auto v = w.head(dv);
    Vector g = Vector::Zero(dimension());
    for (Index j = 0; j < n; ++j) {
      const double u = labels_(j) * (xs_.col(j).dot(v) + w(dv + j));
      const double coef = smoothed01_loss_derivative(u) * labels_(j);
      g.head(dv) += coef * xs_.col(j);
      g(dv + j) = coef;
    }
    return g / static_cast<double>(n);
  }

  Vector component_gradient(Index j, const Vector& w) const override {
    const Index dv = xs_.rows();
    const double u = labels_(j) * (xs_.col(j).dot(w.head(dv)) + w(dv + j));
    const double coef = smoothed01_loss_derivative(u) * labels_(j);
    Vector g = Vector::Zero(dimension());
    g.head(dv) = coef * xs_.col(j);
    g(dv + j) = coef;
    return g;
  }

 private:
  Matrix xs_;
  Vector labels_;
  double lipschitz_ = 0.0;
  double variance_ = 0.0;
};

// f_j(w) = -utility(r_j'w): the maximization of average utility becomes a
// finite-sum minimization.
class PortfolioOracle final : public SmoothOracle {
 public:
  PortfolioOracle(Matrix returns, double psi1, double psi2)
      : returns_(std::move(returns)), psi1_(psi1), psi2_(psi2) {
    double worst = 0.0;
    double second = 0.0;
    for (Index j = 0; j < returns_.cols(); ++j) {
      const double sq = returns_.col(j).squaredNorm();
      worst = std::max(worst, sq);
      second += sq;
    }
    lipschitz_ = std::max(psi1_, psi2_) * worst;
    // The utility slope lives in (0, 1], so ||grad f_j|| <= ||r_j||.
    variance_ = second / static_cast<double>(returns_.cols());
  }

  Index dimension() const override { return returns_.rows(); }
  Index component_count() const override { return returns_.cols(); }
  SmoothnessInfo smoothness() const override { return {lipschitz_, variance_}; }

  double value(const Vector& w) const override {
    const Vector u = returns_.transpose() * w;
    double total = 0.0;
    for (Index j = 0; j < u.size(); ++j) {
      total += exp_utility(u(j), psi1_, psi2_);
    }
    return -total / static_cast<double>(returns_.cols());
  }

  Vector gradient(const Vector& w) const override {
    const Vector u = returns_.transpose() * w;
    Vector slopes(u.size());
    for (Index j = 0; j < u.size(); ++j) {
      slopes(j) = exp_utility_derivative(u(j), psi1_, psi2_);
    }
    return -(returns_ * slopes) / static_cast<double>(returns_.cols());
  }

  Vector component_gradient(Index j, const Vector& w) const override {
    const double u = returns_.col(j).dot(w);
    return -exp_utility_derivative(u, psi1_, psi2_) * returns_.col(j);
  }

 private:
  Matrix returns_;
  double psi1_ = 0.0;
  double psi2_ = 0.0;
  double lipschitz_ = 0.0;
  double variance_ = 0.0;
};

CompositeProblem assemble_pca(const Matrix& data, Regularizer reg) {
  check_data(data, "build_pca: data must be a nonempty finite matrix");
  auto oracle = std::make_shared<PcaOracle>(data);
  Constraint ball = Constraint::nonneg_ball(data.rows());
  return CompositeProblem(std::move(oracle), std::move(reg), std::move(ball));
}

CompositeProblem assemble_portfolio(const Matrix& returns, double psi1, double psi2,
                                    Regularizer reg) {
  check_data(returns, "build_portfolio: returns must be a nonempty finite matrix");
  check_psis(psi1, psi2);
  auto oracle = std::make_shared<PortfolioOracle>(returns, psi1, psi2);
  Constraint simplex = Constraint::simplex(returns.rows(), true);
  return CompositeProblem(std::move(oracle), std::move(reg), std::move(simplex));
}

}  // namespace

double smoothed01_loss(double u) {
  if (u > 1.0) return 0.0;
  if (u < -1.0) return 1.0;
  return 0.25 * u * u * u - 0.75 * u + 0.5;
}

double smoothed01_loss_derivative(double u) {
  if (u > 1.0 || u < -1.0) return 0.0;
  return 0.75 * u * u - 0.75;
}

double exp_utility(double u, double psi1, double psi2) {
  check_psis(psi1, psi2);
  if (u >= 0.0) return (1.0 - std::exp(-psi1 * u)) / psi1;
  return (std::exp(psi2 * u) - 1.0) / psi2;
}

double exp_utility_derivative(double u, double psi1, double psi2) {
  check_psis(psi1, psi2);
  return u >= 0.0 ? std::exp(-psi1 * u) : std::exp(psi2 * u);
}

CompositeProblem build_pca(const Matrix& data, const McpParams& params) {
  return assemble_pca(data, Regularizer::mcp(params, data.rows()));
}

CompositeProblem build_pca(const Matrix& data, const ScadParams& params) {
  return assemble_pca(data, Regularizer::scad(params, data.rows()));
}

CompositeProblem build_fair_classification(const Matrix& features, const Vector& labels,
                                           Index sensitive_index, double covariance_cap,
                                           const McpParams& g1, const ScadParams& g2) {
  check_data(features, "build_fair_classification: features must be a nonempty finite matrix");
  require(features.rows() >= 2,
          "build_fair_classification: need at least one feature besides the sensitive one");
  require(labels.size() == features.cols(),
          "build_fair_classification: one label per feature column required");
  for (Index j = 0; j < labels.size(); ++j) {
    require(labels(j) == 1.0 || labels(j) == -1.0,
            "build_fair_classification: labels must be +1 or -1");
  }
  require(sensitive_index >= 0 && sensitive_index < features.rows(),
          "build_fair_classification: sensitive attribute index out of range");
  require(std::isfinite(covariance_cap) && covariance_cap > 0.0,
          "build_fair_classification: covariance cap must be positive");

  const Index n = features.cols();
  const Index dv = features.rows() - 1;
  Matrix xs(dv, n);
  Index row = 0;
  for (Index i = 0; i < features.rows(); ++i) {
    if (i == sensitive_index) continue;
    xs.row(row++) = features.row(i);
  }
  const auto sensitive = features.row(sensitive_index);
  const double mean_a = sensitive.mean();

  // Covariance direction between the sensitive attribute and the model
  // output: a two-sided halfspace cap on v, inert on the outlier block.
  Vector x_hat = Vector::Zero(dv);
  for (Index j = 0; j < n; ++j) {
    x_hat += (sensitive(j) - mean_a) * xs.col(j);
  }
  x_hat /= static_cast<double>(n);

  const Index dim = dv + n;
  std::vector<Regularizer::Block> blocks;
  blocks.push_back({0, dv, Regularizer::mcp(g1, dv)});
  blocks.push_back({dv, n, Regularizer::scad(g2, n)});
  Regularizer reg = Regularizer::block_composite(std::move(blocks), dim);

  Constraint constraint = Constraint::free(dim);
  if (x_hat.norm() > 0.0) {
    Vector padded = Vector::Zero(dim);
    padded.head(dv) = x_hat;
    constraint = Constraint::halfspace_pair(std::move(padded), covariance_cap);
  } else {
    std::cerr << "build_fair_classification: warning: sensitive attribute is uncorrelated "
                 "with every feature, dropping the vacuous covariance constraint\n";
  }

  auto oracle = std::make_shared<FairOracle>(std::move(xs), labels);
  return CompositeProblem(std::move(oracle), std::move(reg), std::move(constraint));
}

CompositeProblem build_portfolio(const Matrix& returns, double psi1, double psi2,
                                 const McpParams& params) {
  return assemble_portfolio(returns, psi1, psi2, Regularizer::mcp(params, returns.rows()));
}

CompositeProblem build_portfolio(const Matrix& returns, double psi1, double psi2,
                                 const ScadParams& params) {
  return assemble_portfolio(returns, psi1, psi2, Regularizer::scad(params, returns.rows()));
}

}  // namespace spgm
