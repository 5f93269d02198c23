#include "spgm/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace spgm {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_mcp(const McpParams& p) {
  require(std::isfinite(p.kappa) && p.kappa > 0.0, "mcp: kappa must be positive");
  require(std::isfinite(p.nu) && p.nu > 0.0, "mcp: nu must be positive");
}

void check_scad(const ScadParams& p) {
  require(std::isfinite(p.kappa) && p.kappa > 0.0, "scad: kappa must be positive");
  require(std::isfinite(p.nu) && p.nu > 2.0, "scad: nu must exceed 2");
}

void check_lambda(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "prox: lambda must be positive and finite");
}

void check_input(const Vector& w, Index dim, const char* where) {
  if (w.size() != dim) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  if (!w.allFinite()) throw std::invalid_argument(std::string(where) + ": non-finite input");
}

// Penalty values for a >= 0, parameters already validated.
double mcp_pos(const McpParams& p, double a) {
  if (a <= p.nu * p.kappa) return p.kappa * a - a * a / (2.0 * p.nu);
  return p.nu * p.kappa * p.kappa / 2.0;
}

double scad_pos(const ScadParams& p, double a) {
  if (a <= p.kappa) return p.kappa * a;
  if (a <= p.nu * p.kappa) {
    return (-a * a + 2.0 * p.nu * p.kappa * a - p.kappa * p.kappa) / (2.0 * (p.nu - 1.0));
  }
  return (p.nu + 1.0) * p.kappa * p.kappa / 2.0;
}

// The scalar subproblem q(x) = (w-x)^2/(2 lambda) + g(x) restricted to a
// piecewise region is quadratic (or linear when lambda kills the curvature),
// so its minimizer is either the region's clamped stationary point or an
// endpoint. Each prox below evaluates that short candidate list and applies
// the tie rule: equal value (1e-12 window) resolves to the smallest |x|.
//
// Only the half-line w >= 0 is handled here; odd symmetry of q in (w, x)
// extends the result, and for w >= 0 all candidates are non-negative, so the
// +/- part of the tie rule never has to fire.
constexpr double kTieWindow = 1e-12;

template <int MaxN>
class CandidateSet {
 public:
  void add(double x, double q) {
    xs_[n_] = x;
    qs_[n_] = q;
    ++n_;
  }

  double select() const {
    double qmin = qs_[0];
    for (int i = 1; i < n_; ++i) qmin = std::min(qmin, qs_[i]);
    double best = 0.0;
    bool have = false;
    for (int i = 0; i < n_; ++i) {
      if (qs_[i] > qmin + kTieWindow) continue;
      if (!have || std::abs(xs_[i]) < std::abs(best)) {
        best = xs_[i];
        have = true;
      }
    }
    return best;
  }

 private:
  double xs_[MaxN] = {};
  double qs_[MaxN] = {};
  int n_ = 0;
};

double mcp_prox_pos(const McpParams& p, double lambda, double w) {
  const double nk = p.nu * p.kappa;
  const auto q = [&](double x) { return (w - x) * (w - x) / (2.0 * lambda) + mcp_pos(p, x); };
  CandidateSet<4> cands;
  cands.add(0.0, q(0.0));
  cands.add(nk, q(nk));
  const double xc = std::max(w, nk);  // flat region: unpenalized pull toward w
  cands.add(xc, q(xc));
  if (p.nu != lambda) {
    const double xa = p.nu * (w - lambda * p.kappa) / (p.nu - lambda);
    if (std::isfinite(xa)) {
      const double x = std::clamp(xa, 0.0, nk);
      cands.add(x, q(x));
    }
  }
  return cands.select();
}

double scad_prox_pos(const ScadParams& p, double lambda, double w) {
  const double k = p.kappa;
  const double nk = p.nu * p.kappa;
  const auto q = [&](double x) { return (w - x) * (w - x) / (2.0 * lambda) + scad_pos(p, x); };
  CandidateSet<6> cands;
  cands.add(0.0, q(0.0));
  cands.add(k, q(k));
  cands.add(nk, q(nk));
  {
    const double xa = std::clamp(w - lambda * k, 0.0, k);  // soft-threshold region
    cands.add(xa, q(xa));
  }
  if (p.nu - 1.0 != lambda) {
    const double xb = ((p.nu - 1.0) * w - lambda * p.nu * k) / (p.nu - 1.0 - lambda);
    if (std::isfinite(xb)) {
      const double x = std::clamp(xb, k, nk);
      cands.add(x, q(x));
    }
  }
  const double xc = std::max(w, nk);
  cands.add(xc, q(xc));
  return cands.select();
}

}  // namespace

double mcp_value(const McpParams& p, double v) {
  check_mcp(p);
  require(std::isfinite(v), "mcp_value: non-finite input");
  return mcp_pos(p, std::abs(v));
}

double scad_value(const ScadParams& p, double v) {
  check_scad(p);
  require(std::isfinite(v), "scad_value: non-finite input");
  return scad_pos(p, std::abs(v));
}

double mcp_prox_scalar(const McpParams& p, double lambda, double w) {
  check_mcp(p);
  check_lambda(lambda);
  require(std::isfinite(w), "mcp_prox_scalar: non-finite input");
  const double z = mcp_prox_pos(p, lambda, std::abs(w));
  return w < 0.0 ? -z : z;
}

double scad_prox_scalar(const ScadParams& p, double lambda, double w) {
  check_scad(p);
  check_lambda(lambda);
  require(std::isfinite(w), "scad_prox_scalar: non-finite input");
  const double z = scad_prox_pos(p, lambda, std::abs(w));
  return w < 0.0 ? -z : z;
}

Regularizer Regularizer::zero(Index dim) {
  require(dim >= 1, "Regularizer::zero: dimension must be positive");
  return Regularizer(Kind::Zero, dim);
}

Regularizer Regularizer::mcp(const McpParams& params, Index dim) {
  require(dim >= 1, "Regularizer::mcp: dimension must be positive");
  check_mcp(params);
  Regularizer r(Kind::Mcp, dim);
  r.mcp_ = params;
  return r;
}

Regularizer Regularizer::scad(const ScadParams& params, Index dim) {
  require(dim >= 1, "Regularizer::scad: dimension must be positive");
  check_scad(params);
  Regularizer r(Kind::Scad, dim);
  r.scad_ = params;
  return r;
}

Regularizer Regularizer::block_composite(std::vector<Block> blocks, Index dim) {
  require(dim >= 1, "Regularizer::block_composite: dimension must be positive");
  std::sort(blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.offset < b.offset; });
  Index prev_end = 0;
  for (const Block& b : blocks) {
    require(b.offset >= 0 && b.length >= 1, "block_composite: bad block bounds");
    require(b.offset >= prev_end, "block_composite: blocks overlap");
    require(b.offset + b.length <= dim, "block_composite: block exceeds dimension");
    require(b.reg.dimension() == b.length, "block_composite: sub-regularizer dimension mismatch");
    prev_end = b.offset + b.length;
  }
  Regularizer r(Kind::BlockComposite, dim);
  r.blocks_ = std::move(blocks);
  return r;
}

double Regularizer::value(const Vector& w) const {
  check_input(w, dim_, "Regularizer::value");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Mcp: {
      double s = 0.0;
      for (Index i = 0; i < dim_; ++i) s += mcp_pos(mcp_, std::abs(w(i)));
      return s;
    }
    case Kind::Scad: {
      double s = 0.0;
      for (Index i = 0; i < dim_; ++i) s += scad_pos(scad_, std::abs(w(i)));
      return s;
    }
    case Kind::BlockComposite: {
      double s = 0.0;
      for (const Block& b : blocks_) s += b.reg.value(w.segment(b.offset, b.length));
      return s;
    }
  }
  return 0.0;
}

ProxResult Regularizer::prox(double lambda, const Vector& w) const {
  check_lambda(lambda);
  check_input(w, dim_, "Regularizer::prox");
  ProxResult out;
  out.zeta = w;
  out.envelope_value = 0.0;
  switch (kind_) {
    case Kind::Zero:
      break;
    case Kind::Mcp:
      for (Index i = 0; i < dim_; ++i) {
        const double a = std::abs(w(i));
        const double z = mcp_prox_pos(mcp_, lambda, a);
        out.zeta(i) = w(i) < 0.0 ? -z : z;
        out.envelope_value += (a - z) * (a - z) / (2.0 * lambda) + mcp_pos(mcp_, z);
      }
      break;
    case Kind::Scad:
      for (Index i = 0; i < dim_; ++i) {
        const double a = std::abs(w(i));
        const double z = scad_prox_pos(scad_, lambda, a);
        out.zeta(i) = w(i) < 0.0 ? -z : z;
        out.envelope_value += (a - z) * (a - z) / (2.0 * lambda) + scad_pos(scad_, z);
      }
      break;
    case Kind::BlockComposite:
      for (const Block& b : blocks_) {
        ProxResult sub = b.reg.prox(lambda, w.segment(b.offset, b.length));
        out.zeta.segment(b.offset, b.length) = sub.zeta;
        out.envelope_value += sub.envelope_value;
      }
      break;
  }
  return out;
}

double Regularizer::moreau_envelope(double lambda, const Vector& w) const {
  return prox(lambda, w).envelope_value;
}

double Regularizer::lipschitz_constant() const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Mcp:
      return mcp_.kappa * std::sqrt(static_cast<double>(dim_));
    case Kind::Scad:
      return scad_.kappa * std::sqrt(static_cast<double>(dim_));
    case Kind::BlockComposite: {
      double s = 0.0;
      for (const Block& b : blocks_) {
        const double l = b.reg.lipschitz_constant();
        s += l * l;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

const McpParams& Regularizer::mcp_params() const {
  if (kind_ != Kind::Mcp) throw std::logic_error("Regularizer: not an MCP penalty");
  return mcp_;
}

const ScadParams& Regularizer::scad_params() const {
  if (kind_ != Kind::Scad) throw std::logic_error("Regularizer: not a SCAD penalty");
  return scad_;
}

const std::vector<Regularizer::Block>& Regularizer::blocks() const {
  if (kind_ != Kind::BlockComposite) throw std::logic_error("Regularizer: not a block composite");
  return blocks_;
}

}  // namespace spgm
