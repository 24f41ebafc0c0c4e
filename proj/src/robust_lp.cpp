#include "paro/robust_lp.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <utility>

#include "paro/checks.hpp"

namespace paro {

namespace {

// Restriction of a dominating-set vertex to the coordinates revealed after
// the first `stages_done` stages. Entries are exact sums of anchor and
// spread values, so exact comparison decides prefix equality.
Eigen::VectorXd materialized_prefix(DominatingSet const& dom, int vertex,
                                    std::vector<int> const& prefix) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(prefix.size()));
  for (size_t p = 0; p < prefix.size(); ++p) {
    int const j = prefix[p];
    double entry = dom.v0[j];
    if (vertex >= 1 && vertex - 1 == j) entry += dom.rho[j];
    v[static_cast<Eigen::Index>(p)] = entry;
  }
  return v;
}

// class_rep[t][i] = smallest vertex index whose revealed prefix after stages
// 1..t+1 equals vertex i's. Vertices in the same class must share their
// stage-(t+1) decision columns.
std::vector<std::vector<int>> vertex_classes(AroInstance const& inst, DominatingSet const& dom) {
  int const m = inst.num_coords();
  int const num_stages = inst.stages.num_stages();
  std::vector<std::vector<int>> reps(static_cast<size_t>(num_stages));
  for (int t = 0; t < num_stages; ++t) {
    auto const prefix = revealed_prefix(inst.stages, t + 1);
    std::vector<Eigen::VectorXd> mats(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) mats[static_cast<size_t>(i)] = materialized_prefix(dom, i, prefix);
    auto& rep = reps[static_cast<size_t>(t)];
    rep.assign(static_cast<size_t>(m) + 1, 0);
    for (int i = 0; i <= m; ++i) {
      int r = i;
      for (int j = 0; j < i; ++j) {
        if (mats[static_cast<size_t>(j)] == mats[static_cast<size_t>(i)]) {
          r = j;
          break;
        }
      }
      rep[static_cast<size_t>(i)] = r;
    }
  }
  return reps;
}

}  // namespace

std::pair<LinearProgram, VariableMap> build_pap_master(AroInstance const& inst,
                                                       DominatingSet const& dom,
                                                       PapMasterOptions const& opts) {
  require_valid(inst);
  require(dom.dim() == inst.num_coords(),
          "dominating set dimension does not match the instance");

  int const m = inst.num_coords();
  int const n = inst.num_decisions();
  int const l = inst.num_rows();
  auto const reps = vertex_classes(inst, dom);
  auto const dec_stage = stage_of_each_decision(inst.stages, n);

  VariableMap map;
  map.col_of.assign(static_cast<size_t>(m) + 1, std::vector<int>(static_cast<size_t>(n), -1));
  int next_col = 0;
  if (opts.equality_rows) {
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j < n; ++j) map.col_of[static_cast<size_t>(i)][static_cast<size_t>(j)] = next_col++;
    }
  } else {
    // Representatives get fresh columns, stage by stage; everyone else points
    // at their representative's column.
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j < n; ++j) {
        int const t = dec_stage[static_cast<size_t>(j)];
        int const r = reps[static_cast<size_t>(t)][static_cast<size_t>(i)];
        if (r == i) {
          map.col_of[static_cast<size_t>(i)][static_cast<size_t>(j)] = next_col++;
        } else {
          map.col_of[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              map.col_of[static_cast<size_t>(r)][static_cast<size_t>(j)];
        }
      }
    }
  }
  map.z_col = next_col++;
  if (opts.enable_rescaling) {
    for (int k = 0; k < m; ++k) map.s_cols.push_back(next_col++);
  }
  map.num_columns = next_col;

  LinearProgram lp(map.num_columns);
  lp.objective[map.z_col] = 1.0;
  for (int col : map.s_cols) {
    lp.lower[col] = 0.0;
    lp.upper[col] = 1.0;
  }

  for (int i = 0; i <= m; ++i) {
    auto const& cols = map.col_of[static_cast<size_t>(i)];
    Eigen::VectorXd const vi = dom.vertex(i);

    Eigen::VectorXd epi = Eigen::VectorXd::Zero(map.num_columns);
    epi[map.z_col] = 1.0;
    for (int j = 0; j < n; ++j) epi[cols[static_cast<size_t>(j)]] -= inst.c[j];
    lp.add_row(std::move(epi), Relation::Ge, 0.0);

    Eigen::VectorXd const rhs = inst.D * vi + inst.d;
    for (int r = 0; r < l; ++r) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(map.num_columns);
      for (int j = 0; j < n; ++j) row[cols[static_cast<size_t>(j)]] += inst.A(r, j);
      if (opts.enable_rescaling) {
        for (int k = 0; k < m; ++k) {
          row[map.s_cols[static_cast<size_t>(k)]] -= inst.D(r, k) * (1.0 - vi[k]);
        }
      }
      lp.add_row(std::move(row), Relation::Ge, rhs[r]);
    }
  }

  if (opts.equality_rows) {
    for (int t = 0; t < inst.stages.num_stages(); ++t) {
      for (int i = 1; i <= m; ++i) {
        int const r = reps[static_cast<size_t>(t)][static_cast<size_t>(i)];
        if (r == i) continue;
        for (int j : inst.stages.dec_of_stage[static_cast<size_t>(t)]) {
          Eigen::VectorXd row = Eigen::VectorXd::Zero(map.num_columns);
          row[map.col_of[static_cast<size_t>(i)][static_cast<size_t>(j)]] = 1.0;
          row[map.col_of[static_cast<size_t>(r)][static_cast<size_t>(j)]] = -1.0;
          lp.add_row(std::move(row), Relation::Eq, 0.0);
        }
      }
    }
  }

  return {std::move(lp), std::move(map)};
}

PiecewisePolicy extract_piecewise_policy(DominatingSet const& dom, VariableMap const& map,
                                         LpSolution const& sol) {
  require_solver(sol.status == LpStatus::Optimal,
                 "cannot extract a policy from a non-optimal master solution");
  require(sol.x.size() == map.num_columns, "solution size does not match the variable map");
  int const m = dom.dim();
  require(static_cast<int>(map.col_of.size()) == m + 1,
          "variable map does not match the dominating set");

  PiecewisePolicy pol;
  pol.dom = dom;
  pol.vertex_solutions.resize(static_cast<size_t>(m) + 1);
  int const n = map.col_of.empty() ? 0 : static_cast<int>(map.col_of.front().size());
  for (int i = 0; i <= m; ++i) {
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x[j] = sol.x[map.col_of[static_cast<size_t>(i)][static_cast<size_t>(j)]];
    pol.vertex_solutions[static_cast<size_t>(i)] = std::move(x);
  }
  if (!map.s_cols.empty()) {
    Eigen::VectorXd s(m);
    for (int k = 0; k < m; ++k) {
      // The solver keeps bounded columns within feasibility tolerance; clamp
      // the stored scales to their exact range.
      s[k] = std::clamp(sol.x[map.s_cols[static_cast<size_t>(k)]], 0.0, 1.0);
    }
    pol.s = std::move(s);
  }
  return pol;
}

LinearProgram build_box(AroInstance const& inst) {
  int const n = inst.num_decisions();
  LinearProgram lp(n);
  lp.objective = inst.c;
  Eigen::VectorXd const rhs =
      inst.D * Eigen::VectorXd::Ones(inst.num_coords()) + inst.d;
  for (int r = 0; r < inst.num_rows(); ++r) {
    lp.add_row(inst.A.row(r).transpose(), Relation::Ge, rhs[r]);
  }
  return lp;
}

namespace {

struct AffineLayout {
  Eigen::MatrixXi p_col;         // -1 where the entry is structurally zero
  std::vector<int> q_col;
  int z_col = -1;
  int num_columns = 0;
};

AffineLayout affine_layout(AroInstance const& inst) {
  int const m = inst.num_coords();
  int const n = inst.num_decisions();
  auto const dec_stage = stage_of_each_decision(inst.stages, n);
  auto const unc_stage = stage_of_each_uncertainty(inst.stages, m);
  AffineLayout lay;
  lay.p_col = Eigen::MatrixXi::Constant(n, m, -1);
  int next = 0;
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < m; ++k) {
      if (unc_stage[static_cast<size_t>(k)] <= dec_stage[static_cast<size_t>(r)]) {
        lay.p_col(r, k) = next++;
      }
    }
  }
  lay.q_col.resize(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) lay.q_col[static_cast<size_t>(r)] = next++;
  lay.z_col = next++;
  lay.num_columns = next;
  return lay;
}

// z - c . (P xi + q) >= 0 evaluated at one scenario.
Eigen::VectorXd epigraph_cut(AroInstance const& inst, AffineLayout const& lay,
                             Eigen::VectorXd const& xi) {
  Eigen::VectorXd epi = Eigen::VectorXd::Zero(lay.num_columns);
  epi[lay.z_col] = 1.0;
  for (int r = 0; r < inst.num_decisions(); ++r) {
    epi[lay.q_col[static_cast<size_t>(r)]] -= inst.c[r];
    for (int k = 0; k < inst.num_coords(); ++k) {
      if (lay.p_col(r, k) >= 0) epi[lay.p_col(r, k)] -= inst.c[r] * xi[k];
    }
  }
  return epi;
}

// Covering row i applied to the affine decision: A_i . (P xi + q) >= D_i xi + d_i.
Eigen::VectorXd covering_cut(AroInstance const& inst, AffineLayout const& lay, int i,
                             Eigen::VectorXd const& xi) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(lay.num_columns);
  for (int r = 0; r < inst.num_decisions(); ++r) {
    row[lay.q_col[static_cast<size_t>(r)]] += inst.A(i, r);
    for (int k = 0; k < inst.num_coords(); ++k) {
      if (lay.p_col(r, k) >= 0) row[lay.p_col(r, k)] += inst.A(i, r) * xi[k];
    }
  }
  return row;
}

}  // namespace

AffineSolveResult solve_affine_budgeted_dual(AroInstance const& inst,
                                             SolverConfig const& config) {
  require_valid(inst);
  require(inst.uset.kind() == SetKind::Budgeted,
          "the dual affine form needs a budgeted uncertainty set");
  int const m = inst.num_coords();
  int const n = inst.num_decisions();
  int const l = inst.num_rows();
  double const k = inst.uset.budget();
  auto const lay = affine_layout(inst);

  // One dual block per robust constraint (the epigraph plus every covering
  // row): a scalar multiplier for the budget and one per upper bound xi_j <= 1.
  // Robust feasibility of g.xi + h >= 0 over the budgeted set becomes
  //   h - k y - sum_j mu_j >= 0   and   g_j + y + mu_j >= 0 for all j
  // with y, mu >= 0.
  int const num_blocks = l + 1;
  auto const y_col = [&](int r) { return lay.num_columns + r; };
  auto const mu_col = [&](int r, int j) { return lay.num_columns + num_blocks + r * m + j; };
  int const total = lay.num_columns + num_blocks * (1 + m);

  LinearProgram lp(total);
  lp.objective[lay.z_col] = 1.0;
  for (int r = 0; r < num_blocks; ++r) {
    lp.lower[y_col(r)] = 0.0;
    for (int j = 0; j < m; ++j) lp.lower[mu_col(r, j)] = 0.0;
  }

  {
    Eigen::VectorXd main = Eigen::VectorXd::Zero(total);
    main[lay.z_col] = 1.0;
    for (int t = 0; t < n; ++t) main[lay.q_col[static_cast<size_t>(t)]] -= inst.c[t];
    main[y_col(0)] = -k;
    for (int j = 0; j < m; ++j) main[mu_col(0, j)] = -1.0;
    lp.add_row(std::move(main), Relation::Ge, 0.0);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(total);
      for (int t = 0; t < n; ++t) {
        if (lay.p_col(t, j) >= 0) row[lay.p_col(t, j)] -= inst.c[t];
      }
      row[y_col(0)] = 1.0;
      row[mu_col(0, j)] = 1.0;
      lp.add_row(std::move(row), Relation::Ge, 0.0);
    }
  }
  for (int i = 0; i < l; ++i) {
    Eigen::VectorXd main = Eigen::VectorXd::Zero(total);
    for (int t = 0; t < n; ++t) main[lay.q_col[static_cast<size_t>(t)]] += inst.A(i, t);
    main[y_col(i + 1)] = -k;
    for (int j = 0; j < m; ++j) main[mu_col(i + 1, j)] = -1.0;
    lp.add_row(std::move(main), Relation::Ge, inst.d[i]);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(total);
      for (int t = 0; t < n; ++t) {
        if (lay.p_col(t, j) >= 0) row[lay.p_col(t, j)] += inst.A(i, t);
      }
      row[y_col(i + 1)] = 1.0;
      row[mu_col(i + 1, j)] = 1.0;
      lp.add_row(std::move(row), Relation::Ge, inst.D(i, j));
    }
  }

  LpSolution const sol = solve_lp(lp, config);
  require_solver(sol.status == LpStatus::Optimal,
                 "affine dual solve failed: " + to_string(sol.status));

  AffineSolveResult result;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd q(n);
  for (int t = 0; t < n; ++t) {
    q[t] = sol.x[lay.q_col[static_cast<size_t>(t)]];
    for (int j = 0; j < m; ++j) {
      P(t, j) = lay.p_col(t, j) >= 0 ? sol.x[lay.p_col(t, j)] : 0.0;
    }
  }
  result.policy.stages = inst.stages;
  result.policy.P = std::move(P);
  result.policy.q = std::move(q);
  result.objective = sol.objective;
  result.converged = true;
  result.rounds = 1;
  result.cuts_used = 0;
  result.round_objectives = {sol.objective};
  return result;
}

AffineSolveResult solve_affine_cutting_plane(AroInstance const& inst,
                                             AffineCutConfig const& cfg) {
  require_valid(inst);
  require(cfg.max_rounds >= 1, "cutting plane needs at least one round");
  if (inst.uset.kind() == SetKind::Budgeted && !cfg.force_cutting_plane) {
    return solve_affine_budgeted_dual(inst, cfg.lp);
  }
  auto const started = std::chrono::steady_clock::now();
  auto const timed_out = [&] {
    if (cfg.time_limit_sec <= 0.0) return false;
    auto const elapsed = std::chrono::steady_clock::now() - started;
    return std::chrono::duration<double>(elapsed).count() > cfg.time_limit_sec;
  };
  int const m = inst.num_coords();
  int const n = inst.num_decisions();
  auto const lay = affine_layout(inst);

  // Seed points: the origin carries its full constraint block (bounding the
  // offsets q), the unit vectors start with epigraph rows only. Everything
  // else enters as individual separation cuts, which keeps the master small
  // even when many rounds are needed.
  std::vector<Eigen::VectorXd> pool;
  pool.push_back(Eigen::VectorXd::Zero(m));
  for (int k = 0; k < m; ++k) pool.push_back(Eigen::VectorXd::Unit(m, k));

  LinearProgram lp(lay.num_columns);
  lp.objective[lay.z_col] = 1.0;
  {
    Eigen::VectorXd const& zero = pool.front();
    lp.add_row(epigraph_cut(inst, lay, zero), Relation::Ge, 0.0);
    for (int i = 0; i < inst.num_rows(); ++i) {
      lp.add_row(covering_cut(inst, lay, i, zero), Relation::Ge, inst.d[i]);
    }
    for (int k = 0; k < m; ++k) {
      lp.add_row(epigraph_cut(inst, lay, pool[static_cast<size_t>(k) + 1]), Relation::Ge, 0.0);
    }
  }

  SimplexSolver solver(cfg.lp);
  solver.load(lp);
  LpSolution sol = solver.solve();

  AffineSolveResult result;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  auto const read_policy = [&] {
    for (int r = 0; r < n; ++r) {
      q[r] = sol.x[lay.q_col[static_cast<size_t>(r)]];
      for (int k = 0; k < m; ++k) {
        P(r, k) = lay.p_col(r, k) >= 0 ? sol.x[lay.p_col(r, k)] : 0.0;
      }
    }
  };
  auto const note_point = [&](Eigen::VectorXd const& xi) {
    for (auto const& p : pool) {
      if ((p - xi).cwiseAbs().maxCoeff() <= 1e-12) return;
    }
    pool.push_back(xi);
  };

  while (true) {
    ++result.rounds;
    if (sol.status == LpStatus::IterLimit && timed_out() && !result.round_objectives.empty()) {
      // Ran out of time inside a resolve; report the last clean round.
      result.converged = false;
      sol.objective = result.round_objectives.back();
      break;
    }
    require_solver(sol.status == LpStatus::Optimal,
                   std::string("affine master solve failed: ") +
                       (sol.status == LpStatus::Infeasible    ? "infeasible"
                        : sol.status == LpStatus::Unbounded   ? "unbounded"
                                                              : "iteration limit"));
    result.round_objectives.push_back(sol.objective);
    read_policy();
    if (sol.objective >= cfg.stop_above) {
      // The caller only needed the master value to clear a threshold.
      result.converged = false;
      break;
    }
    double const z = sol.x[lay.z_col];

    std::vector<Eigen::VectorXd> coeffs;
    std::vector<double> rhs;
    {
      auto const lm = inst.uset.linmax(P.transpose() * inst.c);
      if (lm.value + inst.c.dot(q) - z > cfg.cut_tol) {
        coeffs.push_back(epigraph_cut(inst, lay, lm.argmax));
        rhs.push_back(0.0);
        note_point(lm.argmax);
      }
    }
    for (int i = 0; i < inst.num_rows(); ++i) {
      Eigen::VectorXd const dir =
          inst.D.row(i).transpose() - P.transpose() * inst.A.row(i).transpose();
      auto const lm = inst.uset.linmax(dir);
      if (lm.value + inst.d[i] - inst.A.row(i).dot(q) > cfg.cut_tol) {
        coeffs.push_back(covering_cut(inst, lay, i, lm.argmax));
        rhs.push_back(inst.D.row(i).dot(lm.argmax) + inst.d[i]);
        note_point(lm.argmax);
      }
    }

    if (coeffs.empty()) {
      result.converged = true;
      break;
    }
    if (result.rounds >= cfg.max_rounds || timed_out()) {
      result.converged = false;
      break;
    }

    std::vector<Relation> const relations(coeffs.size(), Relation::Ge);
    sol = solver.add_rows_and_resolve(coeffs, relations, rhs);
    if (std::getenv("PARO_AFF_DEBUG") != nullptr) {
      std::fprintf(stderr, "round %d: +%d cuts obj=%.9g status=%s iters=%ld\n", result.rounds,
                   static_cast<int>(coeffs.size()), sol.objective,
                   to_string(sol.status).c_str(), sol.iterations);
    }
  }

  result.policy.stages = inst.stages;
  result.policy.P = std::move(P);
  result.policy.q = std::move(q);
  result.objective = sol.objective;
  result.cuts_used = static_cast<int>(pool.size());
  return result;
}

}  // namespace paro
