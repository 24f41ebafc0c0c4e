#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "paro/lp.hpp"
#include "paro/rng.hpp"
#include "reference_simplex.hpp"

using Eigen::VectorXd;
using namespace paro;

namespace {

VectorXd vec(std::initializer_list<double> entries) {
  VectorXd v(static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) v[i++] = e;
  return v;
}

double feasibility_violation(LinearProgram const& lp, VectorXd const& x) {
  double worst = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    double const lhs = lp.rows[i].dot(x);
    switch (lp.relations[i]) {
      case Relation::Ge: worst = std::max(worst, lp.rhs[i] - lhs); break;
      case Relation::Le: worst = std::max(worst, lhs - lp.rhs[i]); break;
      case Relation::Eq: worst = std::max(worst, std::abs(lhs - lp.rhs[i])); break;
    }
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower[j] > -kInf) worst = std::max(worst, lp.lower[j] - x[j]);
    if (lp.upper[j] < kInf) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

LinearProgram random_lp(Rng& rng, int max_vars, int max_rows) {
  int const n = 1 + rng.below(max_vars);
  int const m = rng.below(max_rows + 1);
  LinearProgram lp(n);
  for (int j = 0; j < n; ++j) {
    lp.objective[j] = rng.uniform(-2.0, 2.0);
    switch (rng.below(5)) {
      case 0: lp.lower[j] = 0.0; break;                                   // x >= 0
      case 1: break;                                                      // free
      case 2: lp.lower[j] = rng.uniform(-2.0, 0.0); lp.upper[j] = rng.uniform(0.0, 2.0); break;
      case 3: lp.lower[j] = 0.0; lp.upper[j] = rng.uniform(0.5, 2.0); break;
      case 4: lp.upper[j] = 0.0; break;                                   // x <= 0
    }
  }
  for (int i = 0; i < m; ++i) {
    VectorXd row = VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < 0.7) row[j] = rng.uniform(-2.0, 2.0);
    }
    Relation rel = Relation::Ge;
    switch (rng.below(3)) {
      case 0: rel = Relation::Ge; break;
      case 1: rel = Relation::Le; break;
      case 2: rel = Relation::Eq; break;
    }
    lp.add_row(row, rel, rng.uniform(-2.0, 2.0));
  }
  return lp;
}

}  // namespace

TEST_CASE("simple bounded maximization") {
  LinearProgram lp(2);
  lp.objective = vec({-1.0, -1.0});  // max x+y
  lp.lower = vec({0.0, 0.0});
  lp.upper = vec({kInf, kInf});
  lp.add_row(vec({1.0, 1.0}), Relation::Le, 1.0);
  auto const sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("bounds only, no rows") {
  LinearProgram lp(1);
  lp.objective[0] = 1.0;
  lp.lower[0] = 3.0;
  auto const sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.x[0] == doctest::Approx(3.0));
}

TEST_CASE("equality rows") {
  LinearProgram lp(3);
  lp.objective = vec({1.0, 2.0, 3.0});
  lp.lower = vec({0.0, 0.0, 0.0});
  lp.upper = vec({kInf, kInf, kInf});
  lp.add_row(vec({1.0, 1.0, 1.0}), Relation::Eq, 1.0);
  lp.add_row(vec({1.0, -1.0, 0.0}), Relation::Eq, 0.25);
  auto const sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  // x1 - x2 = 0.25, x1 + x2 + x3 = 1; cheapest puts x3 = 0.
  CHECK(sol.objective == doctest::Approx(1.0 * 0.625 + 2.0 * 0.375).epsilon(1e-9));
}

TEST_CASE("unbounded detection") {
  LinearProgram lp(1);
  lp.objective[0] = -1.0;
  lp.lower[0] = 0.0;
  auto const sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::Unbounded);
}

TEST_CASE("infeasible detection") {
  LinearProgram lp(1);
  lp.add_row(vec({1.0}), Relation::Ge, 1.0);
  lp.add_row(vec({1.0}), Relation::Le, 0.0);
  auto const sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::Infeasible);
}

TEST_CASE("free variables both directions") {
  LinearProgram lp(2);
  lp.objective = vec({1.0, 1.0});
  lp.add_row(vec({1.0, 1.0}), Relation::Ge, -3.0);
  lp.add_row(vec({1.0, -1.0}), Relation::Ge, -5.0);
  auto const sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("iteration cap is honored") {
  LinearProgram lp(3);
  lp.objective = vec({-1.0, -1.0, -1.0});
  lp.lower = vec({0.0, 0.0, 0.0});
  lp.upper = vec({kInf, kInf, kInf});
  lp.add_row(vec({1.0, 2.0, 1.0}), Relation::Le, 4.0);
  lp.add_row(vec({2.0, 1.0, 3.0}), Relation::Le, 5.0);
  SolverConfig cfg;
  cfg.max_iters = 0;
  auto const sol = solve_lp(lp, cfg);
  CHECK(sol.status == LpStatus::IterLimit);
}

TEST_CASE("differential test against the naive reference solver") {
  int optimal_cases = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed * 7919 + 13);
    LinearProgram const lp = random_lp(rng, 7, 7);
    auto const fast = solve_lp(lp);
    auto const ref = paro::testing::reference_solve(lp);
    INFO("seed ", seed, " fast=", to_string(fast.status), " ref=", to_string(ref.status));
    REQUIRE(ref.status != LpStatus::IterLimit);
    CHECK(fast.status == ref.status);
    if (fast.status == LpStatus::Optimal && ref.status == LpStatus::Optimal) {
      ++optimal_cases;
      CHECK(std::abs(fast.objective - ref.objective) < 1e-6);
      CHECK(feasibility_violation(lp, fast.x) < 1e-7);
    }
  }
  // The generator should produce a healthy share of solvable programs.
  CHECK(optimal_cases > 20);
}

TEST_CASE("warm restart after adding rows matches a fresh solve") {
  int warm_cases = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed * 104729 + 7);
    LinearProgram lp = random_lp(rng, 6, 5);
    SimplexSolver solver;
    solver.load(lp);
    auto const base = solver.solve();

    int const extra = 1 + rng.below(3);
    std::vector<VectorXd> rows;
    std::vector<Relation> rels;
    std::vector<double> rhs;
    for (int k = 0; k < extra; ++k) {
      VectorXd row = VectorXd::Zero(lp.num_vars());
      for (int j = 0; j < lp.num_vars(); ++j) {
        if (rng.uniform() < 0.7) row[j] = rng.uniform(-2.0, 2.0);
      }
      rows.push_back(row);
      rels.push_back(rng.uniform() < 0.5 ? Relation::Ge : Relation::Le);
      rhs.push_back(rng.uniform(-2.0, 2.0));
    }
    auto const warm = solver.add_rows_and_resolve(rows, rels, rhs);

    for (int k = 0; k < extra; ++k) lp.add_row(rows[k], rels[k], rhs[k]);
    auto const fresh = solve_lp(lp);
    INFO("seed ", seed, " base=", to_string(base.status), " warm=", to_string(warm.status),
         " fresh=", to_string(fresh.status));
    CHECK(warm.status == fresh.status);
    if (warm.status == LpStatus::Optimal && fresh.status == LpStatus::Optimal) {
      ++warm_cases;
      CHECK(std::abs(warm.objective - fresh.objective) < 1e-6);
      CHECK(feasibility_violation(solver.program(), warm.x) < 1e-7);
    }
  }
  CHECK(warm_cases > 15);
}

TEST_CASE("degenerate program still terminates") {
  // Many redundant rows through the same vertex.
  LinearProgram lp(2);
  lp.objective = vec({-1.0, -2.0});
  lp.lower = vec({0.0, 0.0});
  lp.upper = vec({kInf, kInf});
  for (int i = 0; i < 20; ++i) {
    lp.add_row(vec({1.0 + 1e-12 * i, 1.0}), Relation::Le, 1.0);
  }
  auto const sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("fixed variables are respected") {
  LinearProgram lp(2);
  lp.objective = vec({1.0, 1.0});
  lp.lower = vec({0.5, 0.0});
  lp.upper = vec({0.5, kInf});
  lp.add_row(vec({1.0, 1.0}), Relation::Ge, 2.0);
  auto const sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(0.5));
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
}
