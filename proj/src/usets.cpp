#include "paro/usets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paro/lp.hpp"
#include "paro/rng.hpp"

namespace paro {

namespace {

bool is_integer(double k) { return std::abs(k - std::round(k)) < 1e-9; }

}  // namespace

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::Hypersphere: return "hypersphere";
    case SetKind::Budgeted: return "budgeted";
    case SetKind::PNormBall: return "p_norm";
    case SetKind::Ellipsoid: return "ellipsoid";
    case SetKind::VertexPolytope: return "vertex_polytope";
  }
  return "unknown";
}

SetKind set_kind_from_string(std::string const& name) {
  if (name == "hypersphere") return SetKind::Hypersphere;
  if (name == "budgeted") return SetKind::Budgeted;
  if (name == "p_norm") return SetKind::PNormBall;
  if (name == "ellipsoid") return SetKind::Ellipsoid;
  if (name == "vertex_polytope") return SetKind::VertexPolytope;
  throw InputError("unknown uncertainty set kind: " + name);
}

UncertaintySet UncertaintySet::hypersphere(int m) {
  require(m >= 1, "hypersphere: dimension must be positive");
  return UncertaintySet(SetKind::Hypersphere, m);
}

UncertaintySet UncertaintySet::budgeted(int m, double k) {
  require(m >= 1, "budgeted: dimension must be positive");
  require(std::isfinite(k) && k >= 1.0 && k <= static_cast<double>(m),
          "budgeted: budget must lie in [1, m]");
  UncertaintySet u(SetKind::Budgeted, m);
  u.param_ = k;
  return u;
}

UncertaintySet UncertaintySet::p_norm_ball(int m, double p) {
  require(m >= 1, "p_norm: dimension must be positive");
  require(std::isfinite(p) && p > 1.0, "p_norm: exponent must exceed 1");
  UncertaintySet u(SetKind::PNormBall, m);
  u.param_ = p;
  return u;
}

UncertaintySet UncertaintySet::ellipsoid(int m, double a) {
  require(m >= 1, "ellipsoid: dimension must be positive");
  require(std::isfinite(a) && a >= 0.0 && a <= 1.0,
          "ellipsoid: correlation weight must lie in [0, 1]");
  UncertaintySet u(SetKind::Ellipsoid, m);
  u.param_ = a;
  return u;
}

UncertaintySet UncertaintySet::vertex_polytope(int m, std::vector<Eigen::VectorXd> vertices) {
  require(m >= 1, "vertex_polytope: dimension must be positive");
  require(!vertices.empty(), "vertex_polytope: vertex list is empty");
  for (auto const& v : vertices) {
    require(v.size() == m, "vertex_polytope: vertex dimension mismatch");
    require(v.allFinite(), "vertex_polytope: vertex has non-finite entries");
    require(v.minCoeff() >= -1e-9 && v.maxCoeff() <= 1.0 + 1e-9,
            "vertex_polytope: vertices must lie in [0, 1]^m");
  }
  UncertaintySet u(SetKind::VertexPolytope, m);
  u.vertices_ = std::move(vertices);
  return u;
}

double UncertaintySet::budget() const {
  require(kind_ == SetKind::Budgeted, "budget() is only defined for budgeted sets");
  return param_;
}

double UncertaintySet::p_exponent() const {
  require(kind_ == SetKind::PNormBall, "p_exponent() is only defined for p-norm balls");
  return param_;
}

double UncertaintySet::correlation() const {
  require(kind_ == SetKind::Ellipsoid, "correlation() is only defined for ellipsoids");
  return param_;
}

std::vector<Eigen::VectorXd> const& UncertaintySet::vertices() const {
  require(kind_ == SetKind::VertexPolytope, "vertices() is only defined for vertex polytopes");
  return vertices_;
}

bool UncertaintySet::contains(Eigen::VectorXd const& xi, double tol) const {
  require(xi.size() == dim_, "contains: dimension mismatch");
  require(xi.allFinite(), "contains: point has non-finite entries");
  if (xi.minCoeff() < -tol) return false;
  switch (kind_) {
    case SetKind::Hypersphere:
      return xi.norm() <= 1.0 + tol;
    case SetKind::Budgeted:
      return xi.maxCoeff() <= 1.0 + tol && xi.sum() <= param_ + tol;
    case SetKind::PNormBall: {
      double acc = 0.0;
      for (int i = 0; i < dim_; ++i) acc += std::pow(std::max(xi[i], 0.0), param_);
      return std::pow(acc, 1.0 / param_) <= 1.0 + tol;
    }
    case SetKind::Ellipsoid: {
      double const s = xi.sum();
      double const quad = (1.0 - param_) * xi.squaredNorm() + param_ * s * s;
      return std::sqrt(std::max(quad, 0.0)) <= 1.0 + tol;
    }
    case SetKind::VertexPolytope: {
      // Distance-to-hull LP: min t  s.t.  |V lambda - xi| <= t, sum lambda = 1.
      int const r = static_cast<int>(vertices_.size());
      LinearProgram lp(r + 1);
      lp.objective[r] = 1.0;
      for (int j = 0; j < r; ++j) lp.lower[j] = 0.0;
      lp.lower[r] = 0.0;
      for (int i = 0; i < dim_; ++i) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(r + 1);
        for (int j = 0; j < r; ++j) row[j] = vertices_[j][i];
        row[r] = -1.0;
        lp.add_row(row, Relation::Le, xi[i]);
        row[r] = 1.0;
        lp.add_row(row, Relation::Ge, xi[i]);
      }
      Eigen::VectorXd ones = Eigen::VectorXd::Ones(r + 1);
      ones[r] = 0.0;
      lp.add_row(ones, Relation::Eq, 1.0);
      auto const sol = solve_lp(lp);
      require_solver(sol.status == LpStatus::Optimal, "vertex_polytope contains: LP failed");
      return sol.objective <= tol;
    }
  }
  return false;
}

double UncertaintySet::gamma(int j) const {
  require(j >= 1 && j <= dim_, "gamma: coordinate count out of range");
  double const jd = static_cast<double>(j);
  switch (kind_) {
    case SetKind::Hypersphere:
      return 1.0 / std::sqrt(jd);
    case SetKind::Budgeted:
      return std::min(1.0, param_ / jd);
    case SetKind::PNormBall:
      return std::pow(jd, -1.0 / param_);
    case SetKind::Ellipsoid:
      return 1.0 / std::sqrt(param_ * jd * jd + (1.0 - param_) * jd);
    case SetKind::VertexPolytope:
      throw InputError("gamma is not available for vertex polytopes");
  }
  return 0.0;
}

LinMax UncertaintySet::linmax(Eigen::VectorXd const& a) const {
  require(a.size() == dim_, "linmax: dimension mismatch");
  require(a.allFinite(), "linmax: non-finite coefficients");
  LinMax out;
  out.argmax = Eigen::VectorXd::Zero(dim_);

  switch (kind_) {
    case SetKind::Hypersphere: {
      Eigen::VectorXd const ap = a.cwiseMax(0.0);
      double const nrm = ap.norm();
      if (nrm > 0.0) {
        out.value = nrm;
        out.argmax = ap / nrm;
      }
      return out;
    }
    case SetKind::Budgeted: {
      std::vector<int> idx(dim_);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](int u, int v) { return a[u] > a[v]; });
      double remaining = param_;
      for (int i : idx) {
        if (a[i] <= 0.0 || remaining <= 0.0) break;
        double const take = std::min(1.0, remaining);
        out.argmax[i] = take;
        out.value += a[i] * take;
        remaining -= take;
      }
      return out;
    }
    case SetKind::PNormBall: {
      double const p = param_;
      double const q = p / (p - 1.0);
      Eigen::VectorXd const ap = a.cwiseMax(0.0);
      double qsum = 0.0;
      for (int i = 0; i < dim_; ++i) qsum += std::pow(ap[i], q);
      if (qsum <= 0.0) return out;
      double const qnorm = std::pow(qsum, 1.0 / q);
      out.value = qnorm;
      for (int i = 0; i < dim_; ++i) {
        out.argmax[i] = std::pow(ap[i] / qnorm, q - 1.0);
      }
      return out;
    }
    case SetKind::Ellipsoid: {
      double const c = param_;
      if (c >= 1.0) {  // degenerate: sum xi <= 1, the simplex
        int best = -1;
        for (int i = 0; i < dim_; ++i) {
          if (a[i] > 0.0 && (best < 0 || a[i] > a[best])) best = i;
        }
        if (best >= 0) {
          out.value = a[best];
          out.argmax[best] = 1.0;
        }
        return out;
      }
      // The quadratic form is exchangeable, so some maximizer is supported on
      // the top-f coefficients for some f; enumerate supports.
      std::vector<int> idx(dim_);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](int u, int v) { return a[u] > a[v]; });
      double best_val = 0.0;
      int best_f = 0;
      double s = 0.0;
      for (int f = 1; f <= dim_; ++f) {
        double const af = a[idx[f - 1]];
        if (af <= 0.0) break;
        s += af;
        // Support is valid when the smallest kept coefficient still gets a
        // non-negative weight in Sigma^{-1} a.
        if (af < c * s / (1.0 - c + c * f) - 1e-15) continue;
        double q = 0.0;
        for (int t = 0; t < f; ++t) q += a[idx[t]] * a[idx[t]];
        double const quad = (q - c * s * s / (1.0 - c + c * f)) / (1.0 - c);
        double const val = std::sqrt(std::max(quad, 0.0));
        if (val > best_val + 1e-15) {
          best_val = val;
          best_f = f;
        }
      }
      if (best_f > 0) {
        out.value = best_val;
        double sf = 0.0;
        for (int t = 0; t < best_f; ++t) sf += a[idx[t]];
        for (int t = 0; t < best_f; ++t) {
          int const i = idx[t];
          double const w = (a[i] - c * sf / (1.0 - c + c * best_f)) / (1.0 - c);
          out.argmax[i] = std::max(w, 0.0) / best_val;
        }
      }
      return out;
    }
    case SetKind::VertexPolytope: {
      int best = 0;
      double best_val = a.dot(vertices_[0]);
      for (size_t j = 1; j < vertices_.size(); ++j) {
        double const v = a.dot(vertices_[j]);
        if (v > best_val + 1e-15) {
          best_val = v;
          best = static_cast<int>(j);
        }
      }
      out.value = best_val;
      out.argmax = vertices_[best];
      return out;
    }
  }
  return out;
}

LinMax UncertaintySet::plusmax(Eigen::VectorXd const& v) const {
  require(v.size() == dim_, "plusmax: dimension mismatch");
  require(v.allFinite(), "plusmax: non-finite anchor");
  LinMax out;
  out.argmax = Eigen::VectorXd::Zero(dim_);

  if (kind_ == SetKind::VertexPolytope) {
    int best = 0;
    double best_val = (vertices_[0] - v).cwiseMax(0.0).sum();
    for (size_t j = 1; j < vertices_.size(); ++j) {
      double const val = (vertices_[j] - v).cwiseMax(0.0).sum();
      if (val > best_val + 1e-15) {
        best_val = val;
        best = static_cast<int>(j);
      }
    }
    out.value = best_val;
    out.argmax = vertices_[best];
    return out;
  }

  require(kind_ == SetKind::Budgeted && is_integer(param_),
          "plusmax is only available for integer-budget sets and vertex polytopes");
  int const k = static_cast<int>(std::round(param_));
  // The objective is convex, so a 0/1 vertex attains the maximum: pick the k
  // coordinates with the largest headroom (1 - v_i)_+ .
  std::vector<int> idx(dim_);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int u, int w) { return v[u] < v[w]; });
  for (int t = 0; t < k && t < dim_; ++t) {
    int const i = idx[t];
    double const gain = std::max(1.0 - v[i], 0.0);
    if (gain <= 0.0) break;
    out.argmax[i] = 1.0;
    out.value += gain;
  }
  return out;
}

double UncertaintySet::boundary_scale(Eigen::VectorXd const& direction) const {
  switch (kind_) {
    case SetKind::Hypersphere:
      return 1.0 / direction.norm();
    case SetKind::Budgeted:
      return std::min(1.0 / direction.maxCoeff(), param_ / direction.sum());
    case SetKind::PNormBall: {
      double acc = 0.0;
      for (int i = 0; i < dim_; ++i) acc += std::pow(direction[i], param_);
      return 1.0 / std::pow(acc, 1.0 / param_);
    }
    case SetKind::Ellipsoid: {
      double const s = direction.sum();
      double const quad = (1.0 - param_) * direction.squaredNorm() + param_ * s * s;
      return 1.0 / std::sqrt(quad);
    }
    case SetKind::VertexPolytope:
      break;
  }
  throw InputError("boundary_scale: unsupported kind");
}

std::vector<Eigen::VectorXd> UncertaintySet::sample(int n, std::uint64_t seed) const {
  require(n >= 0, "sample: negative count");
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  Rng rng(seed);

  if (kind_ == SetKind::VertexPolytope) {
    int const r = static_cast<int>(vertices_.size());
    for (int t = 0; t < n; ++t) {
      if (t % 2 == 0) {
        out.push_back(vertices_[t % r]);
        continue;
      }
      int const picks = 1 + rng.below(3);
      Eigen::VectorXd point = Eigen::VectorXd::Zero(dim_);
      double total = 0.0;
      std::vector<std::pair<int, double>> mix;
      for (int s = 0; s < picks; ++s) {
        double const w = rng.uniform() + 1e-12;
        mix.emplace_back(rng.below(r), w);
        total += w;
      }
      for (auto const& [j, w] : mix) point += (w / total) * vertices_[j];
      out.push_back(std::move(point));
    }
    return out;
  }

  std::vector<Eigen::VectorXd> pool;
  pool.push_back(Eigen::VectorXd::Zero(dim_));
  for (int i = 0; i < dim_; ++i) pool.push_back(Eigen::VectorXd::Unit(dim_, i));

  for (int t = 0; t < n; ++t) {
    Eigen::VectorXd point;
    if (t % 2 == 0) {
      Eigen::VectorXd dir(dim_);
      double mass = 0.0;
      for (int i = 0; i < dim_; ++i) {
        dir[i] = std::abs(rng.gaussian());
        mass += dir[i];
      }
      if (mass <= 0.0) dir[t % dim_] = 1.0;
      point = boundary_scale(dir) * dir;
    } else {
      int const picks = 2 + rng.below(2);
      point = Eigen::VectorXd::Zero(dim_);
      double total = 0.0;
      std::vector<std::pair<int, double>> mix;
      for (int s = 0; s < picks; ++s) {
        double const w = rng.uniform() + 1e-12;
        mix.emplace_back(rng.below(static_cast<int>(pool.size())), w);
        total += w;
      }
      for (auto const& [j, w] : mix) point += (w / total) * pool[j];
    }
    if (pool.size() < 256) pool.push_back(point);
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace paro
