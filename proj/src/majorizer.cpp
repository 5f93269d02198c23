#include "spgm/majorizer.hpp"

#include <stdexcept>

namespace spgm {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

MajorizerState make_majorizer(const Regularizer& g, double lambda, const Vector& anchor) {
  require(lambda > 0.0, "make_majorizer: lambda must be positive");
  require(anchor.size() == g.dimension(), "make_majorizer: anchor dimension mismatch");
  MajorizerState s;
  s.anchor = anchor;
  s.lambda = lambda;
  ProxResult pr = g.prox(lambda, anchor);
  s.zeta = std::move(pr.zeta);
  s.d_value = anchor.dot(s.zeta) / lambda - s.zeta.squaredNorm() / (2.0 * lambda) -
              g.value(s.zeta);
  return s;
}

double eval_majorizer(const MajorizerState& s, double f_value, const Vector& w) {
  require(w.size() == s.anchor.size(), "eval_majorizer: dimension mismatch");
  return f_value + w.squaredNorm() / (2.0 * s.lambda) - s.d_value -
         s.zeta.dot(w - s.anchor) / s.lambda;
}

Vector majorizer_gradient(const MajorizerState& s, const Vector& grad_f, const Vector& w) {
  require(w.size() == s.anchor.size(), "majorizer_gradient: dimension mismatch");
  require(grad_f.size() == w.size(), "majorizer_gradient: gradient dimension mismatch");
  return grad_f + (w - s.zeta) / s.lambda;
}

Vector gradient_mapping(const Constraint& h, double gamma, const Vector& w, const Vector& s) {
  require(gamma > 0.0, "gradient_mapping: gamma must be positive");
  require(w.size() == h.dimension(), "gradient_mapping: iterate dimension mismatch");
  require(s.size() == w.size(), "gradient_mapping: gradient dimension mismatch");
  return (w - h.project(w - gamma * s)) / gamma;
}

double stationarity_measure(const CompositeProblem& p, const Vector& anchor, double lambda,
                            double gamma_bar) {
  require(lambda > 0.0, "stationarity_measure: lambda must be positive");
  require(gamma_bar > 0.0, "stationarity_measure: gamma_bar must be positive");
  require(anchor.size() == p.dimension(), "stationarity_measure: anchor dimension mismatch");
  const Vector zeta = p.reg().prox(lambda, anchor).zeta;
  const Vector s = p.smooth().gradient(zeta) + (anchor - zeta) / lambda;
  return gradient_mapping(p.constraint(), gamma_bar, zeta, s).norm();
}

}  // namespace spgm
