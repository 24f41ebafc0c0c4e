#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "paro/checks.hpp"

namespace paro {

enum class Relation { Ge, Le, Eq };

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

std::string to_string(LpStatus status);

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense linear program
//
//   min  objective . x
//   s.t. rows[i] . x  (>= | <= | =)  rhs[i]
//        lower <= x <= upper          (entries may be +-infinity)
//
// Rows are stored densely; problems in this code base are small enough that
// dense storage is the simpler and faster choice.
struct LinearProgram {
  explicit LinearProgram(int num_vars)
      : objective(Eigen::VectorXd::Zero(num_vars)),
        lower(Eigen::VectorXd::Constant(num_vars, -kInf)),
        upper(Eigen::VectorXd::Constant(num_vars, kInf)) {}

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  void add_row(Eigen::VectorXd coeffs, Relation relation, double rhs_value) {
    require(coeffs.size() == objective.size(), "row length does not match variable count");
    rows.push_back(std::move(coeffs));
    relations.push_back(relation);
    rhs.push_back(rhs_value);
  }

  Eigen::VectorXd objective;
  std::vector<Eigen::VectorXd> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct SolverConfig {
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;
  long max_iters = -1;         // -1: defaults to 50 * (rows + cols)
  double time_limit_s = -1.0;  // -1: no limit
};

struct LpSolution {
  LpStatus status = LpStatus::IterLimit;
  Eigen::VectorXd x;  // structural variable values (meaningful when Optimal)
  double objective = 0.0;
  long iterations = 0;
};

// Bounded-variable tableau simplex. Composite (artificial-free) phase 1,
// Dantzig pricing with a Bland fallback after 50 degenerate pivots, and a
// dual-simplex path for re-solving after appending rows, which keeps
// cutting-plane masters warm.
class SimplexSolver {
 public:
  explicit SimplexSolver(SolverConfig const& config = {}) : cfg_(config) {}

  void load(LinearProgram const& lp);
  LpSolution solve();

  // Appends rows to the already-solved program and re-optimizes with the dual
  // simplex. Falls back to a fresh primal solve if the warm start stalls.
  LpSolution add_rows_and_resolve(std::vector<Eigen::VectorXd> const& coeffs,
                                  std::vector<Relation> const& relations,
                                  std::vector<double> const& rhs_values);

  // The loaded program after presolve (singleton rows folded into bounds).
  LinearProgram const& program() const { return lp_; }

 private:
  enum class VarState : signed char { Basic, AtLower, AtUpper, FreeAtZero };

  void presolve_bounds();
  void install_tableau();
  void set_slack_bounds(int row);
  long iteration_cap() const;
  bool timed_out() const;

  LpStatus phase1(long& iters);
  LpStatus phase2(long& iters);
  LpStatus dual_simplex(long& iters);

  // Ratio test for a primal step of variable `entering` in direction `sigma`.
  // Returns the step length and the blocking row (-1: blocked by the entering
  // variable's own opposite bound; -2: unblocked).
  struct RatioResult {
    double step = 0.0;
    int blocking_row = -2;
  };
  RatioResult ratio_test(int entering, double sigma, bool phase_one) const;

  void apply_step(int entering, double sigma, double step);
  void pivot(int row, int entering);
  void compute_reduced_costs();
  void refine_basic_values();
  void equilibrate_rows();
  void exact_basic_resolve();
  bool refactorize();
  double max_primal_violation() const;
  double total_infeasibility() const;
  LpSolution finish(LpStatus status, long iters);

  SolverConfig cfg_;
  LinearProgram lp_{0};

  int num_rows_ = 0;
  int num_struct_ = 0;
  int num_cols_ = 0;  // structural + one slack per row

  Eigen::MatrixXd tab_;    // num_rows_ x num_cols_, equals B^{-1} [A I]
  Eigen::VectorXd xval_;   // current value of every variable
  Eigen::VectorXd lb_, ub_;
  Eigen::VectorXd cost_;   // structural costs, slacks zero
  Eigen::VectorXd dcost_;  // reduced costs (valid in phase 2 and dual simplex)
  std::vector<int> basis_;          // row -> column
  std::vector<int> row_of_;        // column -> row, -1 if nonbasic
  std::vector<VarState> state_;
  double start_time_ = 0.0;
  bool solved_once_ = false;
  bool presolve_feasible_ = true;
  LpStatus last_status_ = LpStatus::IterLimit;
};

// One-shot convenience wrapper.
LpSolution solve_lp(LinearProgram const& lp, SolverConfig const& config = {});

}  // namespace paro
