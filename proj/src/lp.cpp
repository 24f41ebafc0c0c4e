#include "paro/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace paro {

namespace {

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// Pivot admission threshold: tableau entries smaller than this are treated as
// structural zeros in ratio tests and entering choices.
constexpr double kPivotTol = 1e-11;

}  // namespace

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterLimit: return "iter_limit";
  }
  return "unknown";
}

void SimplexSolver::load(LinearProgram const& lp) {
  require(lp.num_vars() > 0, "linear program needs at least one variable");
  require(lp.objective.allFinite(), "objective has non-finite entries");
  for (int i = 0; i < lp.num_rows(); ++i) {
    require(lp.rows[i].allFinite(), "constraint row has non-finite entries");
    require(std::isfinite(lp.rhs[i]), "constraint rhs is not finite");
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    require(!(lp.lower[j] > lp.upper[j]), "variable has lower bound above upper bound");
    require(!std::isnan(lp.lower[j]) && !std::isnan(lp.upper[j]), "variable bound is NaN");
  }
  lp_ = lp;
  presolve_bounds();
  equilibrate_rows();
  install_tableau();
  solved_once_ = false;
}

// Normalizes every row to unit maximum coefficient. Row scaling leaves the
// solution set untouched but keeps the basis matrices well conditioned when
// the input mixes rows of very different magnitudes, which is what drives the
// pivot-drift failures on large instances.
void SimplexSolver::equilibrate_rows() {
  for (size_t i = 0; i < lp_.rows.size(); ++i) {
    double const s = lp_.rows[i].cwiseAbs().maxCoeff();
    if (s > 0.0 && s != 1.0) {
      lp_.rows[i] /= s;
      lp_.rhs[i] /= s;
    }
  }
}

// Folds rows with at most one nonzero coefficient into variable bounds. This
// is an exact transformation; it shrinks the tableau (covering instances carry
// one explicit x_j >= 0 row per decision) and removes the pivots those rows
// would otherwise cost.
void SimplexSolver::presolve_bounds() {
  presolve_feasible_ = true;
  double const ft = cfg_.feas_tol;
  std::vector<Eigen::VectorXd> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;

  for (int i = 0; i < lp_.num_rows(); ++i) {
    Eigen::VectorXd const& row = lp_.rows[static_cast<size_t>(i)];
    int nonzeros = 0;
    int col = -1;
    for (int j = 0; j < lp_.num_vars() && nonzeros < 2; ++j) {
      if (row[j] != 0.0) {
        ++nonzeros;
        col = j;
      }
    }
    if (nonzeros >= 2) {
      rows.push_back(row);
      relations.push_back(lp_.relations[static_cast<size_t>(i)]);
      rhs.push_back(lp_.rhs[static_cast<size_t>(i)]);
      continue;
    }
    double const b = lp_.rhs[static_cast<size_t>(i)];
    Relation const rel = lp_.relations[static_cast<size_t>(i)];
    if (nonzeros == 0) {
      bool const ok = (rel == Relation::Ge && b <= ft) || (rel == Relation::Le && b >= -ft) ||
                      (rel == Relation::Eq && std::abs(b) <= ft);
      if (!ok) presolve_feasible_ = false;
      continue;
    }
    double const a = row[col];
    double const v = b / a;
    bool const raises = (rel == Relation::Ge) == (a > 0.0);  // binds from below
    if (rel == Relation::Eq || raises) lp_.lower[col] = std::max(lp_.lower[col], v);
    if (rel == Relation::Eq || !raises) lp_.upper[col] = std::min(lp_.upper[col], v);
  }

  for (int j = 0; j < lp_.num_vars(); ++j) {
    if (lp_.lower[j] > lp_.upper[j]) {
      if (lp_.lower[j] - lp_.upper[j] > ft) {
        presolve_feasible_ = false;
      } else {
        lp_.upper[j] = lp_.lower[j];
      }
    }
  }
  lp_.rows = std::move(rows);
  lp_.relations = std::move(relations);
  lp_.rhs = std::move(rhs);
}

void SimplexSolver::set_slack_bounds(int row) {
  int const col = num_struct_ + row;
  switch (lp_.relations[row]) {
    case Relation::Ge: lb_[col] = -kInf; ub_[col] = 0.0; break;
    case Relation::Le: lb_[col] = 0.0; ub_[col] = kInf; break;
    case Relation::Eq: lb_[col] = 0.0; ub_[col] = 0.0; break;
  }
}

void SimplexSolver::install_tableau() {
  num_rows_ = lp_.num_rows();
  num_struct_ = lp_.num_vars();
  num_cols_ = num_struct_ + num_rows_;

  tab_.setZero(num_rows_, num_cols_);
  lb_.resize(num_cols_);
  ub_.resize(num_cols_);
  cost_.setZero(num_cols_);
  cost_.head(num_struct_) = lp_.objective;
  lb_.head(num_struct_) = lp_.lower;
  ub_.head(num_struct_) = lp_.upper;

  basis_.assign(num_rows_, -1);
  row_of_.assign(num_cols_, -1);
  state_.assign(num_cols_, VarState::AtLower);
  xval_.setZero(num_cols_);

  for (int j = 0; j < num_struct_; ++j) {
    if (lp_.lower[j] > -kInf) {
      state_[j] = VarState::AtLower;
      xval_[j] = lp_.lower[j];
    } else if (lp_.upper[j] < kInf) {
      state_[j] = VarState::AtUpper;
      xval_[j] = lp_.upper[j];
    } else {
      state_[j] = VarState::FreeAtZero;
      xval_[j] = 0.0;
    }
  }
  for (int i = 0; i < num_rows_; ++i) {
    tab_.row(i).head(num_struct_) = lp_.rows[i];
    tab_(i, num_struct_ + i) = 1.0;
    set_slack_bounds(i);
    int const col = num_struct_ + i;
    basis_[i] = col;
    row_of_[col] = i;
    state_[col] = VarState::Basic;
    xval_[col] = lp_.rhs[i] - lp_.rows[i].dot(xval_.head(num_struct_));
  }
  dcost_.setZero(num_cols_);
}

long SimplexSolver::iteration_cap() const {
  return cfg_.max_iters >= 0 ? cfg_.max_iters : 50L * (num_rows_ + num_struct_);
}

bool SimplexSolver::timed_out() const {
  return cfg_.time_limit_s > 0 && now_seconds() - start_time_ > cfg_.time_limit_s;
}

double SimplexSolver::total_infeasibility() const {
  double total = 0.0;
  for (int i = 0; i < num_rows_; ++i) {
    double const v = xval_[basis_[i]];
    total += std::max(lb_[basis_[i]] - v, 0.0) + std::max(v - ub_[basis_[i]], 0.0);
  }
  return total;
}

double SimplexSolver::max_primal_violation() const {
  double worst = 0.0;
  auto const x = xval_.head(num_struct_);
  for (int i = 0; i < num_rows_; ++i) {
    double const lhs = lp_.rows[i].dot(x);
    switch (lp_.relations[i]) {
      case Relation::Ge: worst = std::max(worst, lp_.rhs[i] - lhs); break;
      case Relation::Le: worst = std::max(worst, lhs - lp_.rhs[i]); break;
      case Relation::Eq: worst = std::max(worst, std::abs(lhs - lp_.rhs[i])); break;
    }
  }
  for (int j = 0; j < num_struct_; ++j) {
    if (lp_.lower[j] > -kInf) worst = std::max(worst, lp_.lower[j] - xval_[j]);
    if (lp_.upper[j] < kInf) worst = std::max(worst, xval_[j] - lp_.upper[j]);
  }
  return worst;
}

// Two-pass (Harris) ratio test. Pass one finds the longest step possible when
// every bound is allowed to flex by the feasibility tolerance; pass two picks,
// among the rows whose strict ratio fits under that relaxed step, the one with
// the largest pivot element. Tiny pivots are what turn a basis singular, so
// trading a tolerance-sized bound violation for a well-conditioned pivot is
// the right deal; the violations are repaired by the refinement passes.
SimplexSolver::RatioResult SimplexSolver::ratio_test(int entering, double sigma,
                                                     bool phase_one) const {
  RatioResult best;
  best.step = kInf;
  best.blocking_row = -2;

  double const ft = cfg_.feas_tol;
  double const own_range = ub_[entering] - lb_[entering];

  // Pass 1: relaxed limit on the step length.
  double theta = own_range < kInf ? own_range : kInf;
  auto const movement = [&](int i, double& rate, double& dist) {
    double const t = tab_(i, entering);
    if (std::abs(t) < kPivotTol) return false;
    rate = -t * sigma;  // movement of basic i per unit step
    int const bcol = basis_[i];
    double const v = xval_[bcol];
    double const lo = lb_[bcol];
    double const hi = ub_[bcol];
    if (v < lo - ft) {
      if (!(phase_one && rate > 0)) return false;  // blocks on becoming feasible
      dist = lo - v;
    } else if (v > hi + ft) {
      if (!(phase_one && rate < 0)) return false;
      dist = v - hi;
    } else if (rate > 0) {
      if (hi >= kInf) return false;
      dist = hi - v;
    } else {
      if (lo <= -kInf) return false;
      dist = v - lo;
    }
    dist = std::max(dist, 0.0);
    return true;
  };
  for (int i = 0; i < num_rows_; ++i) {
    double rate = 0.0, dist = 0.0;
    if (!movement(i, rate, dist)) continue;
    theta = std::min(theta, (dist + ft) / std::abs(rate));
  }
  if (theta >= kInf) return best;  // nothing blocks: unbounded direction

  // Pass 2: the best-conditioned pivot among rows blocking within theta.
  int brow = -1;
  double bpiv = 0.0;
  double bstep = kInf;
  for (int i = 0; i < num_rows_; ++i) {
    double rate = 0.0, dist = 0.0;
    if (!movement(i, rate, dist)) continue;
    double const step = dist / std::abs(rate);
    if (step > theta) continue;
    double const piv = std::abs(tab_(i, entering));
    if (piv > bpiv) {
      bpiv = piv;
      brow = i;
      bstep = step;
    }
  }
  if (brow >= 0 && !(own_range < kInf && own_range < bstep)) {
    best.step = bstep;
    best.blocking_row = brow;
  } else if (own_range < kInf) {
    best.step = own_range;  // the entering variable flips to its other bound
    best.blocking_row = -1;
  }
  return best;
}

void SimplexSolver::apply_step(int entering, double sigma, double step) {
  if (step == 0.0) return;
  double const move = sigma * step;
  for (int i = 0; i < num_rows_; ++i) {
    double const t = tab_(i, entering);
    if (t != 0.0) xval_[basis_[i]] -= t * move;
  }
  xval_[entering] += move;
}

void SimplexSolver::pivot(int row, int entering) {
  double const piv = tab_(row, entering);
  Eigen::RowVectorXd const prow = tab_.row(row) / piv;
  tab_.row(row) = prow;
  Eigen::VectorXd pcol = tab_.col(entering);
  pcol(row) = 0.0;
  tab_.noalias() -= pcol * prow;
  tab_.col(entering).setZero();
  tab_(row, entering) = 1.0;

  int const leaving = basis_[row];
  row_of_[leaving] = -1;
  basis_[row] = entering;
  row_of_[entering] = row;
}

void SimplexSolver::compute_reduced_costs() {
  dcost_ = cost_;
  for (int i = 0; i < num_rows_; ++i) {
    double const cb = cost_[basis_[i]];
    if (cb != 0.0) dcost_.noalias() -= cb * tab_.row(i).transpose();
  }
  for (int i = 0; i < num_rows_; ++i) dcost_[basis_[i]] = 0.0;
}

void SimplexSolver::refine_basic_values() {
  if (num_rows_ == 0) return;
  for (int round = 0; round < 3; ++round) {
    Eigen::VectorXd resid(num_rows_);
    auto const x = xval_.head(num_struct_);
    for (int i = 0; i < num_rows_; ++i) {
      resid[i] = lp_.rhs[i] - lp_.rows[i].dot(x) - xval_[num_struct_ + i];
    }
    if (resid.lpNorm<Eigen::Infinity>() < 1e-12) return;
    Eigen::VectorXd const delta = tab_.middleCols(num_struct_, num_rows_) * resid;
    for (int i = 0; i < num_rows_; ++i) xval_[basis_[i]] += delta[i];
  }
}

// Recomputes the basic values from a fresh factorization of the basis matrix,
// discarding whatever error the incrementally updated tableau has accumulated.
// Used as a recovery step when refinement through the tableau is not enough.
void SimplexSolver::exact_basic_resolve() {
  if (num_rows_ == 0) return;
  Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(num_rows_, num_rows_);
  for (int i = 0; i < num_rows_; ++i) {
    int const col = basis_[i];
    if (col < num_struct_) {
      for (int r = 0; r < num_rows_; ++r) basis_matrix(r, i) = lp_.rows[r][col];
    } else {
      basis_matrix(col - num_struct_, i) = 1.0;
    }
  }
  Eigen::VectorXd rhs(num_rows_);
  for (int r = 0; r < num_rows_; ++r) rhs[r] = lp_.rhs[r];
  for (int j = 0; j < num_cols_; ++j) {
    if (state_[j] == VarState::Basic || xval_[j] == 0.0) continue;
    if (j < num_struct_) {
      for (int r = 0; r < num_rows_; ++r) rhs[r] -= lp_.rows[r][j] * xval_[j];
    } else {
      rhs[j - num_struct_] -= xval_[j];
    }
  }
  Eigen::VectorXd const basic_values = Eigen::PartialPivLU<Eigen::MatrixXd>(basis_matrix).solve(rhs);
  if (!basic_values.allFinite()) return;
  for (int i = 0; i < num_rows_; ++i) xval_[basis_[i]] = basic_values[i];
}

// Rebuilds the whole tableau exactly for the current basis: refactors the basis
// matrix from the original data and recomputes B^{-1}[A I], the basic values,
// and the reduced costs. Returns false when the basis matrix is too close to
// singular for the result to be trusted; callers then fall back to their old
// state. This is the heavyweight answer to accumulated pivot drift.
bool SimplexSolver::refactorize() {
  if (num_rows_ == 0) return true;
  Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(num_rows_, num_rows_);
  for (int i = 0; i < num_rows_; ++i) {
    int const col = basis_[i];
    if (col < num_struct_) {
      for (int r = 0; r < num_rows_; ++r) basis_matrix(r, i) = lp_.rows[r][col];
    } else {
      basis_matrix(col - num_struct_, i) = 1.0;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> const lu(basis_matrix);
  Eigen::MatrixXd full(num_rows_, num_cols_);
  for (int r = 0; r < num_rows_; ++r) full.row(r).head(num_struct_) = lp_.rows[r];
  full.middleCols(num_struct_, num_rows_) =
      Eigen::MatrixXd::Identity(num_rows_, num_rows_);
  Eigen::MatrixXd fresh = lu.solve(full);
  if (!fresh.allFinite()) return false;
  // The columns of the basic variables must come back as the identity.
  double id_err = 0.0;
  for (int i = 0; i < num_rows_; ++i) {
    for (int r = 0; r < num_rows_; ++r) {
      id_err = std::max(id_err, std::abs(fresh(r, basis_[i]) - (r == i ? 1.0 : 0.0)));
    }
  }
  if (id_err > 1e-6) return false;
  tab_ = std::move(fresh);
  exact_basic_resolve();
  compute_reduced_costs();
  return true;
}

LpStatus SimplexSolver::phase1(long& iters) {
  long const cap = iteration_cap();
  int stall = 0;
  bool fresh_factor = false;
  double last_total = kInf;
  std::vector<int> viol_rows;
  std::vector<double> viol_sign;
  Eigen::RowVectorXd d1(num_cols_);

  while (true) {
    if (iters >= cap || timed_out()) return LpStatus::IterLimit;
    double const ft = cfg_.feas_tol;
    viol_rows.clear();
    viol_sign.clear();
    for (int i = 0; i < num_rows_; ++i) {
      double const v = xval_[basis_[i]];
      if (v < lb_[basis_[i]] - ft) {
        viol_rows.push_back(i);
        viol_sign.push_back(-1.0);
      } else if (v > ub_[basis_[i]] + ft) {
        viol_rows.push_back(i);
        viol_sign.push_back(1.0);
      }
    }
    if (viol_rows.empty()) return LpStatus::Optimal;  // feasible

    // Gradient of the total infeasibility with respect to each nonbasic move.
    d1.setZero();
    for (size_t k = 0; k < viol_rows.size(); ++k) {
      d1.noalias() -= viol_sign[k] * tab_.row(viol_rows[k]);
    }

    bool const bland = stall >= 50;
    int entering = -1;
    double sigma = 0.0;
    double best_score = cfg_.opt_tol;
    for (int j = 0; j < num_cols_; ++j) {
      if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
      double const dj = d1[j];
      double score = 0.0;
      double sig = 0.0;
      if (state_[j] == VarState::AtLower && dj < -cfg_.opt_tol) {
        score = -dj;
        sig = 1.0;
      } else if (state_[j] == VarState::AtUpper && dj > cfg_.opt_tol) {
        score = dj;
        sig = -1.0;
      } else if (state_[j] == VarState::FreeAtZero && std::abs(dj) > cfg_.opt_tol) {
        score = std::abs(dj);
        sig = dj > 0 ? -1.0 : 1.0;
      } else {
        continue;
      }
      if (bland) {
        entering = j;
        sigma = sig;
        break;
      }
      if (score > best_score) {
        best_score = score;
        entering = j;
        sigma = sig;
      }
    }
    if (entering < 0) return LpStatus::Infeasible;

    RatioResult const rr = ratio_test(entering, sigma, /*phase_one=*/true);
    if (rr.blocking_row == -2) {
      // An unblocked infeasibility-reducing ray cannot exist; the tableau has
      // drifted. Refactor once and rescan before giving up.
      if (!fresh_factor && refactorize()) {
        fresh_factor = true;
        continue;
      }
      return LpStatus::IterLimit;  // numerical breakdown
    }
    fresh_factor = false;

    apply_step(entering, sigma, rr.step);
    if (rr.blocking_row == -1) {
      state_[entering] =
          state_[entering] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      xval_[entering] =
          state_[entering] == VarState::AtUpper ? ub_[entering] : lb_[entering];
    } else {
      int const r = rr.blocking_row;
      int const leaving = basis_[r];
      double const v = xval_[leaving];
      bool to_lower;
      if (v < lb_[leaving] - ft) {
        to_lower = true;  // was below, pulled up to its lower bound
      } else if (v > ub_[leaving] + ft) {
        to_lower = false;
      } else {
        to_lower = std::abs(v - lb_[leaving]) <= std::abs(v - ub_[leaving]);
      }
      xval_[leaving] = to_lower ? lb_[leaving] : ub_[leaving];
      state_[leaving] = to_lower ? VarState::AtLower : VarState::AtUpper;
      state_[entering] = VarState::Basic;
      pivot(r, entering);
    }
    ++iters;

    double const total = total_infeasibility();
    if (total > last_total - 1e-12) {
      ++stall;
    } else {
      stall = 0;
    }
    last_total = total;
  }
}

LpStatus SimplexSolver::phase2(long& iters) {
  long const cap = iteration_cap();
  int stall = 0;
  int rescans = 0;
  bool fresh_factor = false;
  double last_obj = kInf;

  while (true) {
    if (iters >= cap || timed_out()) return LpStatus::IterLimit;
    bool const bland = stall >= 50;
    int entering = -1;
    double sigma = 0.0;
    double best_score = cfg_.opt_tol;
    for (int j = 0; j < num_cols_; ++j) {
      if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
      double const dj = dcost_[j];
      double score = 0.0;
      double sig = 0.0;
      if (state_[j] == VarState::AtLower && dj < -cfg_.opt_tol) {
        score = -dj;
        sig = 1.0;
      } else if (state_[j] == VarState::AtUpper && dj > cfg_.opt_tol) {
        score = dj;
        sig = -1.0;
      } else if (state_[j] == VarState::FreeAtZero && std::abs(dj) > cfg_.opt_tol) {
        score = std::abs(dj);
        sig = dj > 0 ? -1.0 : 1.0;
      } else {
        continue;
      }
      if (bland) {
        entering = j;
        sigma = sig;
        break;
      }
      if (score > best_score) {
        best_score = score;
        entering = j;
        sigma = sig;
      }
    }
    if (entering < 0) {
      // Guard against drift in the incrementally maintained reduced costs.
      if (rescans < 3) {
        ++rescans;
        compute_reduced_costs();
        // Re-scan with fresh reduced costs; if still clean we are optimal.
        bool improving = false;
        for (int j = 0; j < num_cols_ && !improving; ++j) {
          if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
          double const dj = dcost_[j];
          improving = (state_[j] == VarState::AtLower && dj < -cfg_.opt_tol) ||
                      (state_[j] == VarState::AtUpper && dj > cfg_.opt_tol) ||
                      (state_[j] == VarState::FreeAtZero && std::abs(dj) > cfg_.opt_tol);
        }
        if (improving) continue;
      }
      return LpStatus::Optimal;
    }

    RatioResult const rr = ratio_test(entering, sigma, /*phase_one=*/false);
    if (rr.blocking_row == -2) {
      if (std::getenv("PARO_LP_DEBUG")) {
        std::fprintf(stderr,
                     "[lp] phase2 ray: entering=%d sigma=%g dcost=%.3e fresh=%d iters=%ld\n",
                     entering, sigma, dcost_[entering], int(fresh_factor), iters);
      }
      // Confirm an unbounded ray on an exactly rebuilt tableau before
      // reporting it; drift can erase the blocking entries of a column.
      if (!fresh_factor && refactorize()) {
        fresh_factor = true;
        continue;
      }
      if (std::getenv("PARO_LP_DEBUG")) {
        std::fprintf(stderr, "[lp] phase2 ray confirmed (refactor %s)\n",
                     fresh_factor ? "was fresh" : "failed");
      }
      return LpStatus::Unbounded;
    }
    fresh_factor = false;

    apply_step(entering, sigma, rr.step);
    if (rr.blocking_row == -1) {
      state_[entering] =
          state_[entering] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      xval_[entering] =
          state_[entering] == VarState::AtUpper ? ub_[entering] : lb_[entering];
    } else {
      int const r = rr.blocking_row;
      int const leaving = basis_[r];
      double const v = xval_[leaving];
      bool const to_lower = std::abs(v - lb_[leaving]) <= std::abs(v - ub_[leaving]);
      xval_[leaving] = to_lower ? lb_[leaving] : ub_[leaving];
      state_[leaving] = to_lower ? VarState::AtLower : VarState::AtUpper;
      state_[entering] = VarState::Basic;
      double const ratio = dcost_[entering] / tab_(r, entering);
      if (ratio != 0.0) dcost_.noalias() -= ratio * tab_.row(r).transpose();
      dcost_[entering] = 0.0;
      pivot(r, entering);
    }
    ++iters;

    double const obj = lp_.objective.dot(xval_.head(num_struct_));
    if (obj > last_obj - 1e-12) {
      ++stall;
    } else {
      stall = 0;
    }
    last_obj = obj;
  }
}

LpStatus SimplexSolver::dual_simplex(long& iters) {
  long const cap = iteration_cap();
  int stall = 0;
  double last_total = kInf;
  double const ft = cfg_.feas_tol;

  while (true) {
    if (iters >= cap || timed_out()) return LpStatus::IterLimit;
    bool const bland = stall >= 50;

    int r = -1;
    double worst = ft;
    for (int i = 0; i < num_rows_; ++i) {
      double const v = xval_[basis_[i]];
      double const viol = std::max(lb_[basis_[i]] - v, v - ub_[basis_[i]]);
      if (viol > worst) {
        worst = viol;
        r = i;
        if (bland) break;
      }
    }
    if (r < 0) {
      // Primal feasible again; let phase 2 confirm optimality (it exits
      // immediately when the reduced costs are clean).
      return phase2(iters);
    }

    int const bcol = basis_[r];
    bool const below = xval_[bcol] < lb_[bcol] - ft;
    auto const admissible = [&](int j) {
      if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) return false;
      double const t = tab_(r, j);
      if (std::abs(t) < kPivotTol) return false;
      if (state_[j] == VarState::FreeAtZero) return true;
      if (below) {
        return (state_[j] == VarState::AtLower && t < 0) ||
               (state_[j] == VarState::AtUpper && t > 0);
      }
      return (state_[j] == VarState::AtLower && t > 0) ||
             (state_[j] == VarState::AtUpper && t < 0);
    };
    int entering = -1;
    if (bland) {
      for (int j = 0; j < num_cols_ && entering < 0; ++j) {
        if (admissible(j)) entering = j;
      }
    } else {
      // Harris-style two passes on the dual ratio |d_j| / |t|: find the
      // relaxed bound first, then the largest pivot underneath it.
      double theta = kInf;
      for (int j = 0; j < num_cols_; ++j) {
        if (!admissible(j)) continue;
        double const t = std::abs(tab_(r, j));
        theta = std::min(theta, (std::abs(dcost_[j]) + cfg_.opt_tol) / t);
      }
      double best_pivot = 0.0;
      for (int j = 0; j < num_cols_; ++j) {
        if (!admissible(j)) continue;
        double const t = std::abs(tab_(r, j));
        if (std::abs(dcost_[j]) / t > theta) continue;
        if (t > best_pivot) {
          best_pivot = t;
          entering = j;
        }
      }
    }
    if (entering < 0) return LpStatus::Infeasible;

    double const target = below ? lb_[bcol] : ub_[bcol];
    double const move = (target - xval_[bcol]) / (-tab_(r, entering));
    apply_step(entering, move >= 0 ? 1.0 : -1.0, std::abs(move));
    xval_[bcol] = target;
    state_[bcol] = below ? VarState::AtLower : VarState::AtUpper;
    state_[entering] = VarState::Basic;
    double const ratio = dcost_[entering] / tab_(r, entering);
    if (ratio != 0.0) dcost_.noalias() -= ratio * tab_.row(r).transpose();
    dcost_[entering] = 0.0;
    pivot(r, entering);
    ++iters;

    double const total = total_infeasibility();
    if (total > last_total - 1e-12) {
      ++stall;
    } else {
      stall = 0;
    }
    last_total = total;
  }
}

LpSolution SimplexSolver::finish(LpStatus status, long iters) {
  LpSolution sol;
  sol.status = status;
  sol.x = xval_.head(num_struct_);
  sol.objective = lp_.objective.dot(sol.x);
  sol.iterations = iters;
  solved_once_ = true;
  last_status_ = status;
  return sol;
}

LpSolution SimplexSolver::solve() {
  require(lp_.num_vars() > 0, "no program loaded");
  start_time_ = now_seconds();
  long iters = 0;
  if (!presolve_feasible_) return finish(LpStatus::Infeasible, iters);
  for (int attempt = 0; attempt < 4; ++attempt) {
    LpStatus status = phase1(iters);
    if (status != LpStatus::Optimal) return finish(status, iters);
    compute_reduced_costs();
    status = phase2(iters);
    if (status == LpStatus::Unbounded) {
      // Phase 2 assumes a primal-feasible basis; the ratio test never blocks
      // on a basic variable that is already outside its bounds. When drift
      // (exposed by the exact refactorization in the ray check) broke
      // feasibility, the "ray" is an artifact: restore feasibility with
      // phase 1 from the current basis and re-optimize.
      bool broken = false;
      for (int i = 0; i < num_rows_ && !broken; ++i) {
        double const v = xval_[basis_[i]];
        broken = v < lb_[basis_[i]] - cfg_.feas_tol || v > ub_[basis_[i]] + cfg_.feas_tol;
      }
      if (broken && attempt < 3) continue;
      return finish(status, iters);
    }
    if (status != LpStatus::Optimal) return finish(status, iters);
    refine_basic_values();
    if (max_primal_violation() <= cfg_.feas_tol) return finish(LpStatus::Optimal, iters);
    exact_basic_resolve();
    if (max_primal_violation() <= cfg_.feas_tol) return finish(LpStatus::Optimal, iters);
    // The claimed optimum is infeasible beyond tolerance: rebuild the tableau
    // exactly at this basis and let phase 1 repair it from there. A cold
    // restart is the last resort when the basis cannot be refactored.
    if (!refactorize()) install_tableau();
  }
  return finish(LpStatus::IterLimit, iters);
}

LpSolution SimplexSolver::add_rows_and_resolve(std::vector<Eigen::VectorXd> const& coeffs,
                                               std::vector<Relation> const& relations,
                                               std::vector<double> const& rhs_values) {
  require_solver(solved_once_, "add_rows_and_resolve needs a prior solve");
  require(coeffs.size() == relations.size() && coeffs.size() == rhs_values.size(),
          "added rows: mismatched lengths");
  int const extra = static_cast<int>(coeffs.size());
  if (extra == 0) return solve();

  int const old_rows = num_rows_;
  int const old_cols = num_cols_;
  // Appended rows get the same unit-max normalization as the loaded ones.
  std::vector<Eigen::VectorXd> srows(static_cast<size_t>(extra));
  std::vector<double> srhs(static_cast<size_t>(extra));
  for (int k = 0; k < extra; ++k) {
    require(std::isfinite(rhs_values[k]) && coeffs[k].allFinite(),
            "added row has non-finite entries");
    double s = coeffs[k].cwiseAbs().maxCoeff();
    if (s <= 0.0) s = 1.0;
    srows[static_cast<size_t>(k)] = coeffs[k] / s;
    srhs[static_cast<size_t>(k)] = rhs_values[k] / s;
    lp_.add_row(srows[static_cast<size_t>(k)], relations[k], srhs[static_cast<size_t>(k)]);
  }
  if (last_status_ != LpStatus::Optimal) {
    // No usable warm basis; solve the extended program from scratch.
    install_tableau();
    return solve();
  }

  tab_.conservativeResize(old_rows + extra, old_cols + extra);
  tab_.block(0, old_cols, old_rows, extra).setZero();
  num_rows_ += extra;
  num_cols_ += extra;

  lb_.conservativeResize(num_cols_);
  ub_.conservativeResize(num_cols_);
  cost_.conservativeResize(num_cols_);
  dcost_.conservativeResize(num_cols_);
  xval_.conservativeResize(num_cols_);
  row_of_.resize(num_cols_, -1);
  state_.resize(num_cols_, VarState::Basic);

  auto const x = xval_.head(num_struct_);
  for (int k = 0; k < extra; ++k) {
    int const row = old_rows + k;
    int const col = old_cols + k;
    cost_[col] = 0.0;
    dcost_[col] = 0.0;
    set_slack_bounds(row);

    // Express the appended row in the current basis: subtract, for every basic
    // structural column, that coefficient times the column's tableau row.
    Eigen::VectorXd const& srow = srows[static_cast<size_t>(k)];
    Eigen::RowVectorXd trow = Eigen::RowVectorXd::Zero(num_cols_);
    trow.head(num_struct_) = srow;
    trow[col] = 1.0;
    for (int i = 0; i < old_rows; ++i) {
      if (basis_[i] >= num_struct_) continue;
      double const c = srow[basis_[i]];
      if (c != 0.0) trow.noalias() -= c * tab_.row(i);
    }
    tab_.row(row) = trow;

    basis_.push_back(col);
    row_of_[col] = row;
    state_[col] = VarState::Basic;
    xval_[col] = srhs[static_cast<size_t>(k)] - srow.dot(x);
  }

  start_time_ = now_seconds();
  long iters = 0;
  LpStatus status = dual_simplex(iters);
  if (status == LpStatus::Optimal) {
    refine_basic_values();
    if (max_primal_violation() <= cfg_.feas_tol) return finish(status, iters);
    exact_basic_resolve();
    if (max_primal_violation() <= cfg_.feas_tol) return finish(status, iters);
  }
  if (status == LpStatus::Infeasible) return finish(status, iters);
  // Warm start stalled or drifted: rebuild and solve fresh.
  install_tableau();
  return solve();
}

LpSolution solve_lp(LinearProgram const& lp, SolverConfig const& config) {
  SimplexSolver solver(config);
  solver.load(lp);
  return solver.solve();
}

}  // namespace paro
