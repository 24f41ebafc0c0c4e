#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "paro/checks.hpp"

namespace paro {

enum class SetKind { Hypersphere, Budgeted, PNormBall, Ellipsoid, VertexPolytope };

std::string to_string(SetKind kind);
SetKind set_kind_from_string(std::string const& name);

struct LinMax {
  double value = 0.0;
  Eigen::VectorXd argmax;
};

// Convex uncertainty set inside the non-negative orthant, intersected with
// [0,1]^m for every supported kind. All kinds contain the origin and the unit
// vectors and are closed under componentwise decrease toward zero.
//
//   Hypersphere     { xi >= 0 : ||xi||_2 <= 1 }
//   Budgeted        { 0 <= xi <= 1 : sum xi <= k },            k in [1, m]
//   PNormBall       { xi >= 0 : ||xi||_p <= 1 },               p > 1
//   Ellipsoid       { xi >= 0 : xi' ((1-a)I + a 11') xi <= 1 }, a in [0, 1]
//   VertexPolytope  conv(v_1, ..., v_r),  v_j in [0, 1]^m
class UncertaintySet {
 public:
  static UncertaintySet hypersphere(int m);
  static UncertaintySet budgeted(int m, double k);
  static UncertaintySet p_norm_ball(int m, double p);
  static UncertaintySet ellipsoid(int m, double a);
  static UncertaintySet vertex_polytope(int m, std::vector<Eigen::VectorXd> vertices);

  int dim() const { return dim_; }
  SetKind kind() const { return kind_; }
  double budget() const;
  double p_exponent() const;
  double correlation() const;
  std::vector<Eigen::VectorXd> const& vertices() const;

  bool contains(Eigen::VectorXd const& xi, double tol = 1e-9) const;

  // Largest value t such that the point with t on j coordinates (and zero
  // elsewhere) lies in the set. Closed-form kinds only.
  double gamma(int j) const;

  // max_{xi in U} a . xi with one maximizer (ties resolved toward lower
  // coordinate / vertex indices).
  LinMax linmax(Eigen::VectorXd const& a) const;

  // max_{xi in U} sum_i (xi_i - v_i)_+ . Supported for integer-budget sets
  // (0/1 vertex argument) and vertex polytopes (enumeration).
  LinMax plusmax(Eigen::VectorXd const& v) const;

  // Deterministic sample of n points inside the set: closed-form kinds
  // alternate exact boundary points in random non-negative directions with
  // random convex combinations of known members; vertex polytopes use convex
  // combinations of their vertex list.
  std::vector<Eigen::VectorXd> sample(int n, std::uint64_t seed) const;

 private:
  UncertaintySet(SetKind kind, int m) : kind_(kind), dim_(m) {}

  double boundary_scale(Eigen::VectorXd const& direction) const;

  SetKind kind_;
  int dim_;
  double param_ = 0.0;  // k, p, or a depending on the kind
  std::vector<Eigen::VectorXd> vertices_;
};

}  // namespace paro
