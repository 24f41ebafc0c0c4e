#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "paro/core.hpp"
#include "paro/domsets.hpp"

namespace paro {

// Piecewise affine decision rule induced by a dominating set: the decision at
// xi is the convex combination of the per-vertex solutions x_0..x_m with
// weights lambda(xi). Nonanticipativity is a property of the vertex solutions
// themselves (stage blocks not allowed to see coordinate i are shared with
// x_0 bit-for-bit); evaluation preserves it automatically.
struct PiecewisePolicy {
  DominatingSet dom;
  // Optional vertex re-scaling used when the policy was optimized jointly
  // with scale variables; evaluation weights always come from the original
  // (v0, rho), so this is carried for reporting and domination mapping only.
  std::optional<Eigen::VectorXd> s;
  std::vector<Eigen::VectorXd> vertex_solutions;  // x_0, x_1, ..., x_m

  int dim() const { return dom.dim(); }
  int num_decisions() const {
    return vertex_solutions.empty() ? 0 : static_cast<int>(vertex_solutions.front().size());
  }
};

// Affine decision rule x(xi) = P xi + q. Rows of P corresponding to a
// stage-t decision are structurally zero outside the coordinates revealed by
// stages 1..t.
struct AffinePolicy {
  StagePartition stages;
  Eigen::MatrixXd P;  // num_decisions x num_coords
  Eigen::VectorXd q;  // num_decisions
};

// Constant decision rule.
struct BoxPolicy {
  Eigen::VectorXd x;
};

// Componentwise domination map. Without s: h(xi) = max(xi, v0). With s:
// h'(xi)_j = h_j + s_j (1 - h_j), pulling each coordinate toward 1.
Eigen::VectorXd dominate(Eigen::VectorXd const& v0, Eigen::VectorXd const& xi,
                         std::optional<Eigen::VectorXd> const& s = std::nullopt);

// Convex weights lambda_i(xi) = ((xi - v0)_+)_i / rho_i (0 when rho_i = 0,
// which only happens for collapsed vertices that carry no excess mass).
Eigen::VectorXd lambda_coeffs(DominatingSet const& dom, Eigen::VectorXd const& xi);

// x(xi) = x_0 + sum_i lambda_i(xi) (x_i - x_0). Weights use the original
// (v0, rho) even when pol.s is set.
Eigen::VectorXd evaluate_pap(PiecewisePolicy const& pol, Eigen::VectorXd const& xi);

Eigen::VectorXd evaluate_affine(AffinePolicy const& pol, Eigen::VectorXd const& xi);

// Throws InputError if P has a nonzero entry at a (decision, coordinate)
// pair the stage partition does not allow.
void require_affine_support(AffinePolicy const& pol);

struct AssessmentReport {
  double max_cost = 0.0;
  double mean_cost = 0.0;
  double worst_violation = 0.0;  // max over realizations of max_r (D xi + d - A x)_r
  bool feasible = true;          // worst_violation <= tol
  int num_realizations = 0;
};

using DecisionRule = std::function<Eigen::VectorXd(Eigen::VectorXd const&)>;

// Runs the decision rule on each realization and aggregates cost and
// constraint violation. Decisions are reported raw: infeasible ones are
// measured, not clipped.
AssessmentReport assess(AroInstance const& inst, DecisionRule const& decide,
                        std::vector<Eigen::VectorXd> const& realizations, double tol = 1e-7);

}  // namespace paro
