#include "paro/policies.hpp"

#include <algorithm>

#include "paro/checks.hpp"

namespace paro {

Eigen::VectorXd dominate(Eigen::VectorXd const& v0, Eigen::VectorXd const& xi,
                         std::optional<Eigen::VectorXd> const& s) {
  require(v0.size() == xi.size(), "dominate: point and anchor dimensions differ");
  Eigen::VectorXd h = xi.cwiseMax(v0);
  if (s) {
    require(s->size() == xi.size(), "dominate: scale vector dimension differs");
    h += s->cwiseProduct(Eigen::VectorXd::Ones(h.size()) - h);
  }
  return h;
}

Eigen::VectorXd lambda_coeffs(DominatingSet const& dom, Eigen::VectorXd const& xi) {
  require(dom.dim() == xi.size(), "lambda_coeffs: dimension mismatch");
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(xi.size());
  for (int i = 0; i < xi.size(); ++i) {
    double const excess = xi[i] - dom.v0[i];
    if (excess > 0.0 && dom.rho[i] > 0.0) lambda[i] = excess / dom.rho[i];
  }
  return lambda;
}

Eigen::VectorXd evaluate_pap(PiecewisePolicy const& pol, Eigen::VectorXd const& xi) {
  int const m = pol.dim();
  require(xi.size() == m, "evaluate_pap: realization dimension mismatch");
  require(static_cast<int>(pol.vertex_solutions.size()) == m + 1,
          "evaluate_pap: expected one solution per dominating-set vertex");
  Eigen::VectorXd const& x0 = pol.vertex_solutions.front();
  for (auto const& x : pol.vertex_solutions) {
    require(x.size() == x0.size(), "evaluate_pap: vertex solutions have mixed sizes");
  }
  Eigen::VectorXd const lambda = lambda_coeffs(pol.dom, xi);
  // Written as x0 plus weighted differences so stage blocks shared with x0
  // (difference exactly zero) are untouched by the weights of coordinates
  // the stage is not allowed to see.
  Eigen::VectorXd x = x0;
  for (int i = 0; i < m; ++i) {
    x += lambda[i] * (pol.vertex_solutions[i + 1] - x0);
  }
  return x;
}

Eigen::VectorXd evaluate_affine(AffinePolicy const& pol, Eigen::VectorXd const& xi) {
  require(pol.P.rows() == pol.q.size(), "evaluate_affine: coefficient/offset row mismatch");
  require(pol.P.cols() == xi.size(), "evaluate_affine: realization dimension mismatch");
  return pol.P * xi + pol.q;
}

void require_affine_support(AffinePolicy const& pol) {
  require(pol.P.rows() == pol.q.size(), "affine policy: coefficient/offset row mismatch");
  auto const dec_stage =
      stage_of_each_decision(pol.stages, static_cast<int>(pol.P.rows()));
  int const m = static_cast<int>(pol.P.cols());
  auto const unc_stage = stage_of_each_uncertainty(pol.stages, m);
  for (int r = 0; r < pol.P.rows(); ++r) {
    for (int j = 0; j < m; ++j) {
      // Coordinate j is visible to decision r iff revealed by stage
      // unc_stage[j] + 1 <= dec stage of r + 1, i.e. unc_stage[j] <= dec_stage[r].
      if (unc_stage[j] <= dec_stage[r]) continue;
      require(pol.P(r, j) == 0.0,
              "affine policy: decision " + std::to_string(r) +
                  " depends on unrevealed coordinate " + std::to_string(j));
    }
  }
}

AssessmentReport assess(AroInstance const& inst, DecisionRule const& decide,
                        std::vector<Eigen::VectorXd> const& realizations, double tol) {
  AssessmentReport report;
  if (realizations.empty()) return report;

  report.max_cost = -std::numeric_limits<double>::infinity();
  report.worst_violation = -std::numeric_limits<double>::infinity();
  double total_cost = 0.0;
  for (auto const& xi : realizations) {
    require(xi.size() == inst.num_coords(), "assess: realization dimension mismatch");
    Eigen::VectorXd const x = decide(xi);
    require(x.size() == inst.num_decisions(), "assess: decision dimension mismatch");
    double const cost = inst.c.dot(x);
    total_cost += cost;
    report.max_cost = std::max(report.max_cost, cost);
    if (inst.num_rows() > 0) {
      double const violation = (inst.D * xi + inst.d - inst.A * x).maxCoeff();
      report.worst_violation = std::max(report.worst_violation, violation);
    }
  }
  if (inst.num_rows() == 0) report.worst_violation = 0.0;
  report.mean_cost = total_cost / static_cast<double>(realizations.size());
  report.num_realizations = static_cast<int>(realizations.size());
  report.feasible = report.worst_violation <= tol;
  return report;
}

}  // namespace paro
