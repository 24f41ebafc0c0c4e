#include "paro/domsets.hpp"

#include <cmath>
#include <limits>

namespace paro {

Eigen::VectorXd DominatingSet::vertex(int i) const {
  require(i >= 0 && i <= dim(), "vertex index out of range");
  if (i == 0) return v0;
  Eigen::VectorXd v = v0;
  v[i - 1] += rho[i - 1];
  return v;
}

std::vector<Eigen::VectorXd> DominatingSet::all_vertices() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(dim() + 1);
  for (int i = 0; i <= dim(); ++i) out.push_back(vertex(i));
  return out;
}

DominatingSet build_closed_form(UncertaintySet const& u) {
  int const m = u.dim();
  double const md = static_cast<double>(m);
  double mu = 0.0, rho = 1.0, beta = 1.0;
  std::string origin;

  switch (u.kind()) {
    case SetKind::Hypersphere: {
      mu = 1.0 / (2.0 * std::pow(md, 0.25));
      rho = std::pow(md, 0.25) / 2.0;
      beta = std::sqrt((std::sqrt(md) + 1.0) / 2.0);
      origin = "closed-form hypersphere";
      break;
    }
    case SetKind::Budgeted: {
      double const k = u.budget();
      if (m == 1) {
        mu = 0.0;
        rho = 1.0;
        beta = 1.0;
      } else {
        double const denom = md + k * (k - 2.0);
        mu = k * (k - 1.0) / denom;
        rho = k * (md - k) / denom;
        beta = k * (md - 1.0) / denom;
      }
      origin = "closed-form budgeted";
      break;
    }
    case SetKind::PNormBall: {
      double const p = u.p_exponent();
      double const base = 2.0 * (md - 1.0) + std::pow(2.0, p);
      double const inv_p = 1.0 / p;
      double const co = (1.0 - inv_p) * (1.0 - inv_p);
      mu = std::pow(2.0, inv_p) * std::pow(base, -inv_p / p) / p *
           std::pow(p - 1.0, inv_p + co);
      rho = std::pow(2.0, inv_p - 1.0) * std::pow(base, inv_p - inv_p / p) / p *
            std::pow(p - 1.0, co);
      // The certified factor here is an upper bound on the minimal one; the
      // exact factor is available through compute_beta.
      beta = std::pow(base, inv_p - inv_p / p) * std::pow(p, inv_p - 1.0) *
             std::pow(p - 1.0, co);
      origin = "closed-form p-norm";
      break;
    }
    case SetKind::Ellipsoid: {
      double const a = u.correlation();
      if (a >= 1.0) {
        mu = 0.0;
        rho = 1.0;
        beta = 1.0;
      } else if (a <= std::pow(md, -2.0 / 3.0)) {
        double const w = 1.0 - a;
        mu = 1.0 / (2.0 * std::pow(w * w * w * md + w * w * a * md * md, 0.25));
        rho = 1.0 / (4.0 * w * mu);
        beta = std::sqrt(0.5 * (1.0 + (a * md + std::sqrt(w * md + a * md * md)) / w));
      } else {
        mu = 0.0;
        rho = 1.0 / std::sqrt(a);
        beta = rho;
      }
      origin = "closed-form ellipsoid";
      break;
    }
    case SetKind::VertexPolytope:
      throw InputError("no closed-form dominating set for vertex polytopes");
  }

  DominatingSet dom;
  dom.v0 = Eigen::VectorXd::Constant(m, mu);
  dom.rho = Eigen::VectorXd::Constant(m, rho);
  dom.beta = beta;
  dom.origin = origin;
  return dom;
}

DominatingSet build_general(UncertaintySet const& u) {
  int const m = u.dim();
  int const cap = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m)))) + 1;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
  int rounds = 0;
  while (true) {
    auto const worst = u.plusmax(v);
    if (worst.value <= static_cast<double>(rounds) + 1.0 + 1e-9) break;
    v = v.cwiseMax(worst.argmax);
    ++rounds;
    require_solver(rounds <= cap, "iterative cover did not terminate");
  }
  DominatingSet dom;
  dom.v0 = v;
  dom.rho = Eigen::VectorXd::Constant(m, static_cast<double>(rounds) + 1.0);
  dom.beta = 2.0 * rounds + 1.0;
  dom.origin = "iterative cover";
  return dom;
}

double check_validity(DominatingSet const& dom, UncertaintySet const& u, ValidityMode mode,
                      int num_samples, std::uint64_t seed) {
  require(dom.dim() == u.dim(), "dominating set and uncertainty set dimensions differ");
  require(dom.rho.minCoeff() >= 0.0, "negative spread in dominating set");

  if (mode == ValidityMode::ClosedForm) {
    require(u.kind() != SetKind::VertexPolytope,
            "closed-form validity check needs a closed-form set kind");
    double const mu = dom.v0[0];
    double const rho = dom.rho[0];
    require((dom.v0.array() == mu).all() && (dom.rho.array() == rho).all(),
            "closed-form validity check needs a symmetric dominating set");
    double margin = 0.0;
    for (int j = 1; j <= u.dim(); ++j) {
      double const excess = std::max(u.gamma(j) - mu, 0.0);
      if (excess == 0.0) continue;
      if (rho == 0.0) return std::numeric_limits<double>::infinity();
      margin = std::max(margin, static_cast<double>(j) * excess / rho);
    }
    return margin;
  }

  double margin = 0.0;
  for (auto const& xi : u.sample(num_samples, seed)) {
    double load = 0.0;
    for (int i = 0; i < u.dim(); ++i) {
      double const excess = xi[i] - dom.v0[i];
      if (excess <= 1e-12) continue;
      if (dom.rho[i] == 0.0) return std::numeric_limits<double>::infinity();
      load += excess / dom.rho[i];
    }
    margin = std::max(margin, load);
  }
  return margin;
}

double compute_beta(DominatingSet const& dom, UncertaintySet const& u) {
  require(dom.dim() == u.dim(), "dominating set and uncertainty set dimensions differ");
  auto const vertices = dom.all_vertices();
  auto covered = [&](double t) {
    for (auto const& v : vertices) {
      if (!u.contains(v / t, 1e-12)) return false;
    }
    return true;
  };

  bool all_zero = true;
  for (auto const& v : vertices) {
    if (v.norm() > 0.0) all_zero = false;
  }
  if (all_zero) return 1.0;

  double hi = 1.0;
  int guard = 0;
  while (!covered(hi)) {
    hi *= 2.0;
    require_solver(++guard < 64, "compute_beta: vertices cannot be scaled into the set");
  }
  double lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    double const mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    if (covered(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<Eigen::VectorXd> apply_scales(std::vector<Eigen::VectorXd> const& vertices,
                                          Eigen::VectorXd const& s) {
  require(!vertices.empty(), "apply_scales: empty vertex list");
  require(s.allFinite() && s.minCoeff() >= -1e-9 && s.maxCoeff() <= 1.0 + 1e-9,
          "apply_scales: scales must lie in [0, 1]");
  std::vector<Eigen::VectorXd> out;
  out.reserve(vertices.size());
  for (auto const& v : vertices) {
    require(v.size() == s.size(), "apply_scales: dimension mismatch");
    out.push_back(s.cwiseProduct(Eigen::VectorXd::Ones(s.size()) - v) + v);
  }
  return out;
}

}  // namespace paro
