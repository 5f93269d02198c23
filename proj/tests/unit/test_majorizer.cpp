#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "spgm/majorizer.hpp"
#include "test_oracles.hpp"

using namespace spgm;
using spgm_test::ScaledQuadratic;

TEST_CASE("majorizer gradient hand value") {
  MajorizerState s;
  s.anchor = Vector::Zero(2);
  s.zeta = Vector::Zero(2);
  s.lambda = 0.5;
  s.d_value = 0.0;
  Vector w(2), gf(2);
  w << 1.0, 2.0;
  gf << 0.1, 0.1;
  Vector g = majorizer_gradient(s, gf, w);
  CHECK(g(0) == doctest::Approx(2.1).epsilon(1e-14));
  CHECK(g(1) == doctest::Approx(4.1).epsilon(1e-14));
}

TEST_CASE("zero penalty majorizer is the proximal quadratic") {
  Regularizer g = Regularizer::zero(3);
  Vector anchor(3);
  anchor << 0.5, -1.0, 2.0;
  MajorizerState s = make_majorizer(g, 1.0, anchor);
  CHECK((s.zeta - anchor).norm() == 0.0);

  Vector w(3);
  w << 1.5, 0.0, 2.0;
  // E(w) - f(w) = ||w - anchor||^2 / (2 lambda)
  const double u = eval_majorizer(s, 0.0, w);
  CHECK(u == doctest::Approx((w - anchor).squaredNorm() / 2.0).epsilon(1e-13));

  MajorizerState s0 = make_majorizer(g, 1.0, Vector::Zero(3));
  CHECK(eval_majorizer(s0, 0.0, w) == doctest::Approx(w.squaredNorm() / 2.0).epsilon(1e-13));
}

TEST_CASE("majorizer touches the smoothed objective at the anchor") {
  RngStream rng(5301);
  Regularizer g = Regularizer::mcp({0.8, 1.5}, 4);
  for (double lambda : {0.05, 0.3, 1.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      Vector anchor(4);
      for (Index i = 0; i < 4; ++i) anchor(i) = 3.0 * (2.0 * rng.uniform_real() - 1.0);
      MajorizerState s = make_majorizer(g, lambda, anchor);
      const double env = g.moreau_envelope(lambda, anchor);
      const double at_anchor = eval_majorizer(s, 0.0, anchor);
      CHECK(at_anchor == doctest::Approx(env).epsilon(1e-12));
    }
  }
}

TEST_CASE("majorizer dominates the smoothed objective everywhere") {
  RngStream rng(5302);
  Regularizer g = Regularizer::scad({1.0, 3.7}, 4);
  for (double lambda : {0.05, 0.3, 1.0}) {
    for (int trial = 0; trial < 40; ++trial) {
      Vector anchor(4), w(4);
      for (Index i = 0; i < 4; ++i) {
        anchor(i) = 3.0 * (2.0 * rng.uniform_real() - 1.0);
        w(i) = 3.0 * (2.0 * rng.uniform_real() - 1.0);
      }
      MajorizerState s = make_majorizer(g, lambda, anchor);
      const double lhs = eval_majorizer(s, 0.0, w);
      const double rhs = g.moreau_envelope(lambda, w);
      CHECK(lhs >= rhs - 1e-10);
    }
  }
}

TEST_CASE("majorizer gradient is (L + 1/lambda)-lipschitz") {
  RngStream rng(5303);
  Vector a(3);
  a << 0.5, 1.0, 2.5;
  ScaledQuadratic f(a, 4);  // L = 2.5 per component, full gradient mean(a) w
  Regularizer g = Regularizer::mcp({1.0, 1.0}, 4);
  const double lambda = 0.2;
  const double bound = f.smoothness().lipschitz_L + 1.0 / lambda;

  Vector anchor(4);
  anchor << 0.3, -0.7, 1.2, 0.0;
  MajorizerState s = make_majorizer(g, lambda, anchor);
  for (int trial = 0; trial < 200; ++trial) {
    Vector w1(4), w2(4);
    for (Index i = 0; i < 4; ++i) {
      w1(i) = 2.0 * (2.0 * rng.uniform_real() - 1.0);
      w2(i) = 2.0 * (2.0 * rng.uniform_real() - 1.0);
    }
    Vector g1 = majorizer_gradient(s, f.gradient(w1), w1);
    Vector g2 = majorizer_gradient(s, f.gradient(w2), w2);
    CHECK((g1 - g2).norm() <= bound * (w1 - w2).norm() * (1.0 + 1e-9));
  }
}

TEST_CASE("gradient mapping hand value") {
  Constraint c = Constraint::nonneg_ball(2);
  Vector w(2), s(2);
  w << 1.0, 1.0;
  s << 2.0, 0.0;
  Vector m = gradient_mapping(c, 1.0, w, s);
  CHECK(m(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m(1) == doctest::Approx(0.0).epsilon(1e-14));

  // Free constraint: the mapping is the gradient itself, any stepsize.
  Constraint fr = Constraint::free(2);
  Vector mf = gradient_mapping(fr, 0.25, w, s);
  CHECK((mf - s).norm() <= 1e-14);
}

TEST_CASE("gradient mapping norm is nonincreasing in the stepsize") {
  RngStream rng(5304);
  Vector xh(3);
  xh << 0.5, -1.0, 2.0;
  const Constraint cs[] = {
      Constraint::free(3),
      Constraint::nonneg_ball(3),
      Constraint::simplex(3, false),
      Constraint::halfspace_pair(xh, 0.9),
  };
  for (const Constraint& c : cs) {
    for (int trial = 0; trial < 250; ++trial) {
      Vector w(3), s(3);
      for (Index i = 0; i < 3; ++i) {
        w(i) = 2.0 * (2.0 * rng.uniform_real() - 1.0);
        s(i) = 3.0 * rng.normal();
      }
      const double g2 = 0.05 + 2.0 * rng.uniform_real();
      const double g1 = g2 + 2.0 * rng.uniform_real();
      const double n1 = gradient_mapping(c, g1, w, s).norm();
      const double n2 = gradient_mapping(c, g2, w, s).norm();
      CHECK(n1 <= n2 + 1e-10);
    }
  }
}

TEST_CASE("stationarity measure on the plain quadratic") {
  Vector a(1);
  a << 1.0;
  auto f = std::make_shared<ScaledQuadratic>(a, 2);
  CompositeProblem p(f, Regularizer::zero(2), Constraint::free(2));

  Vector w(2);
  w << 3.0, 4.0;
  // zeta = w, surrogate gradient = w, free mapping = w: the measure is ||w||.
  CHECK(stationarity_measure(p, w, 0.5, 1.0) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(stationarity_measure(p, Vector::Zero(2), 0.5, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("majorizer and mapping input validation") {
  Regularizer g = Regularizer::zero(2);
  Vector anchor = Vector::Zero(2);
  CHECK_THROWS_AS(make_majorizer(g, 0.0, anchor), std::invalid_argument);
  CHECK_THROWS_AS(make_majorizer(g, -1.0, anchor), std::invalid_argument);

  Constraint c = Constraint::free(2);
  Vector w = Vector::Zero(2), s = Vector::Zero(2);
  CHECK_THROWS_AS(gradient_mapping(c, 0.0, w, s), std::invalid_argument);
  Vector s3 = Vector::Zero(3);
  CHECK_THROWS_AS(gradient_mapping(c, 1.0, w, s3), std::invalid_argument);
}
