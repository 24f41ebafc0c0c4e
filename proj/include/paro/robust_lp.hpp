#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "paro/core.hpp"
#include "paro/domsets.hpp"
#include "paro/lp.hpp"
#include "paro/policies.hpp"

namespace paro {

// Column layout of the vertex master LP. Decision j of vertex solution i
// lives in column col_of[i][j]; nonanticipativity makes different vertices
// share a column wherever their revealed prefixes coincide.
struct VariableMap {
  int num_columns = 0;
  int z_col = -1;
  std::vector<int> s_cols;                 // empty unless re-scaling is enabled
  std::vector<std::vector<int>> col_of;    // (m+1) x n
};

struct PapMasterOptions {
  bool enable_rescaling = false;
  // When set, every vertex solution gets its own columns and the sharing
  // pattern is enforced with explicit equality rows instead. Exists for
  // differential testing of the aliasing logic.
  bool equality_rows = false;
};

// Master LP over per-vertex solutions x_0..x_m with epigraph z:
//   min z
//   z >= c.x_i                                   for every vertex i
//   A x_i [- D diag(1 - v_i) s] >= D v_i + d     for every vertex i
// with s in [0,1]^m when re-scaling is enabled. Decision columns are shared
// across vertices whose revealed prefixes are equal at the decision's stage.
std::pair<LinearProgram, VariableMap> build_pap_master(AroInstance const& inst,
                                                       DominatingSet const& dom,
                                                       PapMasterOptions const& opts = {});

PiecewisePolicy extract_piecewise_policy(DominatingSet const& dom, VariableMap const& map,
                                         LpSolution const& sol);

// Static covering LP at the all-ones corner: min c.x s.t. A x >= D e + d.
LinearProgram build_box(AroInstance const& inst);

struct AffineCutConfig {
  double cut_tol = 1e-6;
  int max_rounds = 500;
  double time_limit_sec = 0.0;  // <= 0 means unlimited; checked between rounds
  // Stop early once the master value reaches this threshold. The master value
  // only grows and is a lower bound of the final one, so crossing a threshold
  // early already decides any "value >= threshold" question.
  double stop_above = std::numeric_limits<double>::infinity();
  // Budgeted sets normally bypass the loop for the exact dual reformulation;
  // set this to run the separation loop anyway (differential testing).
  bool force_cutting_plane = false;
  SolverConfig lp;
};

struct AffineSolveResult {
  AffinePolicy policy;
  double objective = 0.0;
  int cuts_used = 0;  // separation points used (0 on the direct dual path)
  int rounds = 0;     // separation iterations performed (1 on the dual path)
  bool converged = false;
  std::vector<double> round_objectives;  // master value after each solve
};

// Exact affine-policy solve over a budgeted set by dualizing each robust row
// against {0 <= xi <= 1, sum xi <= k}: one static LP, no separation loop.
AffineSolveResult solve_affine_budgeted_dual(AroInstance const& inst,
                                             SolverConfig const& config = {});

// Cutting-plane solve of the affine-policy restriction: master LP over the
// allowed entries of P, offsets q and epigraph z, constrained on a growing
// pool of scenarios; scenarios are separated with the set's linear-maximum
// oracle until no constraint is violated by more than cut_tol. Budgeted sets
// are routed to the exact dual form unless cfg.force_cutting_plane is set.
AffineSolveResult solve_affine_cutting_plane(AroInstance const& inst,
                                             AffineCutConfig const& cfg = {});

}  // namespace paro
